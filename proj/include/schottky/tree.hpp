// The 3-regular tree as the Cayley graph of Z/2 * Z/2 * Z/2.  Vertices are
// reduced words over {a, b, c} (no letter repeats), the root is the empty
// word, and the edge between w and w.x carries label x seen from both ends.
// Geodesics are anchored, bi-infinite, and eventually periodic, which is
// enough to carry every axis that appears here.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace schottky::trees {

using Label = std::uint8_t;  // 0 = a, 1 = b, 2 = c

inline char label_char(Label x) { return static_cast<char>('a' + x); }

class Vertex {
 public:
  Vertex() = default;

  static Vertex from_labels(std::vector<Label> labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] > 2) throw std::domain_error("Vertex: label out of range");
      if (i && labels[i] == labels[i - 1])
        throw std::domain_error("Vertex: word is not reduced");
    }
    Vertex v;
    v.word_ = std::move(labels);
    return v;
  }

  // "abac"; the root is "", "e" or the epsilon glyph
  static Vertex parse(const std::string& s) {
    if (s.empty() || s == "e" || s == "\xce\xb5") return Vertex();
    std::vector<Label> labels;
    labels.reserve(s.size());
    for (char ch : s) {
      if (ch < 'a' || ch > 'c') throw std::domain_error("Vertex: bad letter in " + s);
      labels.push_back(static_cast<Label>(ch - 'a'));
    }
    return from_labels(std::move(labels));
  }

  std::string text() const {
    if (word_.empty()) return "\xce\xb5";
    std::string out;
    out.reserve(word_.size());
    for (Label x : word_) out += label_char(x);
    return out;
  }

  std::size_t depth() const { return word_.size(); }
  const std::vector<Label>& labels() const { return word_; }

  // neighbor across the edge labeled x
  Vertex step(Label x) const {
    if (x > 2) throw std::domain_error("Vertex: label out of range");
    Vertex v = *this;
    if (!v.word_.empty() && v.word_.back() == x)
      v.word_.pop_back();
    else
      v.word_.push_back(x);
    return v;
  }

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;

 private:
  std::vector<Label> word_;
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Label x : v.labels()) {
      h ^= x + 1;
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline std::size_t common_prefix(const Vertex& u, const Vertex& v) {
  std::size_t n = std::min(u.depth(), v.depth());
  std::size_t c = 0;
  while (c < n && u.labels()[c] == v.labels()[c]) ++c;
  return c;
}

inline long long distance(const Vertex& u, const Vertex& v) {
  std::size_t c = common_prefix(u, v);
  return static_cast<long long>(u.depth() - c) + static_cast<long long>(v.depth() - c);
}

// edge labels along the geodesic from u to v: climb out of u, descend into v
inline std::vector<Label> path_labels(const Vertex& u, const Vertex& v) {
  std::size_t c = common_prefix(u, v);
  std::vector<Label> out;
  out.reserve(u.depth() + v.depth() - 2 * c);
  for (std::size_t i = u.depth(); i > c; --i) out.push_back(u.labels()[i - 1]);
  for (std::size_t i = c; i < v.depth(); ++i) out.push_back(v.labels()[i]);
  return out;
}

inline Vertex walk(Vertex u, const std::vector<Label>& steps) {
  for (Label x : steps) u = u.step(x);
  return u;
}

// label of the edge between two adjacent vertices
inline Label edge_label(const Vertex& u, const Vertex& v) {
  if (distance(u, v) != 1) throw std::domain_error("edge_label: not adjacent");
  return u.depth() < v.depth() ? v.labels().back() : u.labels().back();
}

// one direction of a geodesic: step labels, eventually periodic
struct Ray {
  std::vector<Label> head;
  std::vector<Label> cycle;

  Label label_at(std::size_t i) const {
    if (i < head.size()) return head[i];
    return cycle[(i - head.size()) % cycle.size()];
  }
};

class Geodesic {
 public:
  Geodesic(Vertex anchor, Ray fwd, Ray bwd)
      : anchor_(std::move(anchor)), fwd_(std::move(fwd)), bwd_(std::move(bwd)) {
    check_ray(fwd_);
    check_ray(bwd_);
    if (fwd_.label_at(0) == bwd_.label_at(0))
      throw std::domain_error("Geodesic: the two directions leave by the same edge");
  }

  const Vertex& anchor() const { return anchor_; }

  Vertex at(long long i) const {
    const Ray& r = i >= 0 ? fwd_ : bwd_;
    std::size_t n = static_cast<std::size_t>(i >= 0 ? i : -i);
    Vertex cur = anchor_;
    for (std::size_t k = 0; k < n; ++k) cur = cur.step(r.label_at(k));
    return cur;
  }

  // vertices at indices lo..hi inclusive
  std::vector<Vertex> window(long long lo, long long hi) const {
    if (lo > hi) throw std::domain_error("Geodesic: empty window");
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    Vertex cur = at(lo);
    out.push_back(cur);
    for (long long i = lo; i < hi; ++i) {
      cur = cur.step(label_between(i, i + 1));
      out.push_back(cur);
    }
    return out;
  }

  // label of the edge from index i to index i+1
  Label label_between(long long i, long long j) const {
    if (j != i + 1) throw std::domain_error("Geodesic: wants consecutive indices");
    if (i >= 0) return fwd_.label_at(static_cast<std::size_t>(i));
    return bwd_.label_at(static_cast<std::size_t>(-i) - 1);
  }

 private:
  static void check_ray(const Ray& r) {
    if (r.cycle.empty()) throw std::domain_error("Geodesic: ray cycle is empty");
    for (Label x : r.head)
      if (x > 2) throw std::domain_error("Geodesic: label out of range");
    for (Label x : r.cycle)
      if (x > 2) throw std::domain_error("Geodesic: label out of range");
    std::size_t total = r.head.size() + 2 * r.cycle.size();
    for (std::size_t i = 0; i + 1 < total; ++i)
      if (r.label_at(i) == r.label_at(i + 1))
        throw std::domain_error("Geodesic: ray backtracks");
  }

  Vertex anchor_;
  Ray fwd_, bwd_;
};

struct Projection {
  long long index = 0;
  long long dist = 0;
  Vertex vertex;
};

// nearest point of the geodesic: the distance profile d(at(i), v) is a strict
// V in i, so binary search on the first index where it increases
inline Projection project(const Geodesic& g, const Vertex& v) {
  long long d0 = distance(g.at(0), v);
  long long lo = -d0 - 1, hi = d0;  // first i with d(i+1) > d(i) lies in [lo, hi]
  auto rises = [&](long long i) { return distance(g.at(i + 1), v) > distance(g.at(i), v); };
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (rises(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  Projection p;
  p.index = lo;
  p.vertex = g.at(lo);
  p.dist = distance(p.vertex, v);
  return p;
}

}  // namespace schottky::trees
