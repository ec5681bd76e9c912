// Automorphisms of the 3-regular tree, closed under inverse and composition.
// The concrete generator is a translation along an eventually periodic axis;
// everything off the axis is carried branch by branch.  At each vertex off
// the axis the two descending edges of source and image are matched in
// alphabetical order, except at the vertices listed in the twist set, where
// the matching is transposed.  Finitely many twists, so every automorphism
// here is finitely described and evaluation is exact in both directions.
#pragma once

#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "schottky/tree.hpp"
#include "schottky/words.hpp"

namespace schottky::trees {

class TreeAuto {
 public:
  TreeAuto() : node_(std::make_shared<IdentityNode>()) {}

  static TreeAuto identity() { return TreeAuto(); }

  static TreeAuto axis_translation(Geodesic axis, long long shift,
                                   std::set<Vertex> twist = {}) {
    if (shift == 0)
      throw std::domain_error("axis_translation: shift must be nonzero");
    return TreeAuto(std::make_shared<AxisNode>(std::move(axis), shift, std::move(twist)));
  }

  TreeAuto inverse() const {
    return TreeAuto(std::make_shared<InverseNode>(node_));
  }

  // f * g applies g first
  friend TreeAuto operator*(const TreeAuto& f, const TreeAuto& g) {
    return TreeAuto(std::make_shared<ComposeNode>(f.node_, g.node_));
  }

  TreeAuto pow(long long n) const {
    if (n < 0) return inverse().pow(-n);
    TreeAuto out;
    for (long long i = 0; i < n; ++i) out = out * *this;
    return out;
  }

  Vertex operator()(const Vertex& v) const { return node_->eval(v, false); }

 private:
  struct Node {
    virtual ~Node() = default;
    virtual Vertex eval(const Vertex& v, bool inv) const = 0;
  };

  struct IdentityNode final : Node {
    Vertex eval(const Vertex& v, bool) const override { return v; }
  };

  struct InverseNode final : Node {
    explicit InverseNode(std::shared_ptr<const Node> n) : inner(std::move(n)) {}
    Vertex eval(const Vertex& v, bool inv) const override {
      return inner->eval(v, !inv);
    }
    std::shared_ptr<const Node> inner;
  };

  struct ComposeNode final : Node {
    ComposeNode(std::shared_ptr<const Node> f_, std::shared_ptr<const Node> g_)
        : f(std::move(f_)), g(std::move(g_)) {}
    Vertex eval(const Vertex& v, bool inv) const override {
      if (inv) return g->eval(f->eval(v, true), true);
      return f->eval(g->eval(v, false), false);
    }
    std::shared_ptr<const Node> f, g;
  };

  struct AxisNode final : Node {
    AxisNode(Geodesic axis_, long long shift_, std::set<Vertex> twist_)
        : axis(std::move(axis_)), shift(shift_), twist(std::move(twist_)) {}

    Vertex eval(const Vertex& v, bool inv) const override {
      auto& cache = inv ? bwd_ : fwd_;
      {
        std::lock_guard<std::mutex> lock(mtx_);
        auto it = cache.find(v);
        if (it != cache.end()) return it->second;
      }
      Vertex out = inv ? carry(v, -shift) : carry(v, shift);
      {
        std::lock_guard<std::mutex> lock(mtx_);
        cache.emplace(v, out);
      }
      return out;
    }

    // translate v by `by` along the axis, mapping its branch across
    Vertex carry(const Vertex& v, long long by) const {
      Projection pr = project(axis, v);
      std::vector<Label> branch = path_labels(pr.vertex, v);
      // u walks the branch of v, w builds its counterpart.  Forward, v is
      // the source and w the image; backward the roles trade places, and the
      // twist set is always consulted at the source-side vertex.
      Vertex u = pr.vertex;
      Vertex w = axis.at(pr.index + by);
      Label in_v = 0, in_w = 0;
      for (std::size_t k = 0; k < branch.size(); ++k) {
        Label lab = branch[k];
        Label out;
        if (k == 0) {
          if (lab != leaving_label(pr.index))
            throw std::logic_error("axis carry: projection inconsistent");
          out = leaving_label(pr.index + by);
        } else {
          auto [xv, yv] = descend_pair(in_v);
          auto [xw, yw] = descend_pair(in_w);
          if (by >= 0) {
            bool flip = twist.count(u) != 0;
            out = lab == xv ? (flip ? yw : xw) : (flip ? xw : yw);
          } else {
            bool flip = twist.count(w) != 0;
            Label image_of_xw = flip ? yv : xv;
            out = lab == image_of_xw ? xw : yw;
          }
        }
        u = u.step(lab);
        w = w.step(out);
        in_v = lab;
        in_w = out;
      }
      return w;
    }

    // label of the unique edge at axis index i that leaves the axis
    Label leaving_label(long long i) const {
      Label up = axis.label_between(i, i + 1);
      Label down = axis.label_between(i - 1, i);
      return static_cast<Label>(3 - up - down);
    }

    static std::pair<Label, Label> descend_pair(Label t) {
      switch (t) {
        case 0: return {1, 2};
        case 1: return {0, 2};
        case 2: return {0, 1};
      }
      throw std::logic_error("bad label");
    }

    Geodesic axis;
    long long shift;
    std::set<Vertex> twist;
    mutable std::mutex mtx_;
    mutable std::unordered_map<Vertex, Vertex, VertexHash> fwd_, bwd_;
  };

  explicit TreeAuto(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// words in two concrete generators act by composition, rightmost run first
inline TreeAuto apply_word(const words::Word& w, const TreeAuto& g1,
                           const TreeAuto& g2) {
  TreeAuto out;
  for (const words::Run& r : w.runs()) {
    const TreeAuto& base = r.gen == 1 ? g1 : g2;
    out = out * base.pow(r.exp);
  }
  return out;
}

enum class IsomType { Elliptic, Hyperbolic, Inversion };

struct TypeReport {
  IsomType type = IsomType::Elliptic;
  long long translation_length = 0;  // 0 unless hyperbolic
  long long d1 = 0;                  // d(probe, g.probe)
  long long d2 = 0;                  // d(probe, g^2.probe)
};

// Serre's alternative, decided from two displacements: hyperbolic exactly
// when d(v, g^2 v) > d(v, g v); otherwise the displacement parity separates
// fixed vertex from inverted edge, because every automorphism either
// preserves or swaps the bipartition classes.
inline TypeReport type_of(const TreeAuto& g, const Vertex& probe = Vertex()) {
  TypeReport t;
  Vertex v1 = g(probe);
  t.d1 = distance(probe, v1);
  if (t.d1 == 0) {
    t.type = IsomType::Elliptic;
    return t;
  }
  Vertex v2 = g(v1);
  t.d2 = distance(probe, v2);
  if (t.d2 > t.d1) {
    t.type = IsomType::Hyperbolic;
    t.translation_length = t.d2 - t.d1;
  } else {
    t.type = t.d1 % 2 == 1 ? IsomType::Inversion : IsomType::Elliptic;
  }
  return t;
}

inline long long translation_length(const TreeAuto& g, const Vertex& probe = Vertex()) {
  return type_of(g, probe).translation_length;
}

// a vertex on the axis of a hyperbolic element: the segment [v, g.v] meets
// the axis after d(v, axis) = (d1 - m)/2 steps
inline Vertex axis_seed(const TreeAuto& g, const Vertex& probe = Vertex()) {
  TypeReport t = type_of(g, probe);
  if (t.type != IsomType::Hyperbolic)
    throw std::domain_error("axis_seed: element is not hyperbolic");
  std::vector<Label> path = path_labels(probe, g(probe));
  long long h = (t.d1 - t.translation_length) / 2;
  Vertex cur = probe;
  for (long long k = 0; k < h; ++k) cur = cur.step(path[static_cast<std::size_t>(k)]);
  return cur;
}

struct AxisWindow {
  long long lo = 0;
  std::vector<Vertex> verts;  // verts[k] sits at axis index lo + k

  const Vertex& at(long long i) const {
    return verts.at(static_cast<std::size_t>(i - lo));
  }
  long long hi() const { return lo + static_cast<long long>(verts.size()) - 1; }
};

// axis vertices of g at indices lo..hi, index 0 at the seed, positive
// direction the direction of translation
inline AxisWindow axis_window(const TreeAuto& g, long long lo, long long hi,
                              const Vertex& probe = Vertex()) {
  if (lo > hi) throw std::domain_error("axis_window: empty window");
  Vertex seed = axis_seed(g, probe);
  std::vector<Vertex> plus{seed};
  {
    Vertex cur = seed;
    while (static_cast<long long>(plus.size()) <= hi) {
      Vertex nxt = g(cur);
      Vertex walkv = cur;
      for (Label lab : path_labels(cur, nxt)) {
        walkv = walkv.step(lab);
        plus.push_back(walkv);
      }
      cur = nxt;
    }
  }
  std::vector<Vertex> minus;  // index -1, -2, ...
  {
    TreeAuto gi = g.inverse();
    Vertex cur = seed;
    while (static_cast<long long>(minus.size()) < -lo) {
      Vertex nxt = gi(cur);
      Vertex walkv = cur;
      for (Label lab : path_labels(cur, nxt)) {
        walkv = walkv.step(lab);
        minus.push_back(walkv);
      }
      cur = nxt;
    }
  }
  AxisWindow w;
  w.lo = lo;
  for (long long i = lo; i <= hi; ++i) {
    if (i < 0)
      w.verts.push_back(minus.at(static_cast<std::size_t>(-i) - 1));
    else
      w.verts.push_back(plus.at(static_cast<std::size_t>(i)));
  }
  return w;
}

struct FixedLocus {
  bool inversion = false;
  bool truncated = false;      // hit the radius or count limit
  std::vector<Vertex> vertices;  // fixed vertices, or the two swapped endpoints
};

// sample of the invariant locus of a non-hyperbolic element: the fixed
// subtree collected by search from the midpoint of [v, g.v], or the two
// endpoints of the inverted edge
inline FixedLocus fixed_locus(const TreeAuto& g, long long radius = 64,
                              std::size_t max_count = 4096,
                              const Vertex& probe = Vertex()) {
  TypeReport t = type_of(g, probe);
  if (t.type == IsomType::Hyperbolic)
    throw std::domain_error("fixed_locus: element is hyperbolic");
  FixedLocus out;
  std::vector<Label> path = path_labels(probe, g(probe));
  if (t.type == IsomType::Inversion) {
    out.inversion = true;
    Vertex cur = probe;
    long long half = (t.d1 - 1) / 2;
    for (long long k = 0; k < half; ++k) cur = cur.step(path[static_cast<std::size_t>(k)]);
    Vertex other = cur.step(path[static_cast<std::size_t>(half)]);
    if (g(cur) != other || g(other) != cur)
      throw std::logic_error("fixed_locus: inverted edge not where expected");
    out.vertices = {cur, other};
    return out;
  }
  Vertex f0 = probe;
  for (long long k = 0; k < t.d1 / 2; ++k) f0 = f0.step(path[static_cast<std::size_t>(k)]);
  if (g(f0) != f0) throw std::logic_error("fixed_locus: midpoint not fixed");
  std::set<Vertex> seen{f0};
  std::vector<Vertex> queue{f0};
  std::size_t qi = 0;
  while (qi < queue.size()) {
    Vertex cur = queue[qi++];
    if (distance(f0, cur) >= radius) {
      out.truncated = true;
      continue;
    }
    for (Label x = 0; x < 3; ++x) {
      Vertex nb = cur.step(x);
      if (seen.count(nb)) continue;
      if (g(nb) != nb) continue;
      if (seen.size() >= max_count) {
        out.truncated = true;
        break;
      }
      seen.insert(nb);
      queue.push_back(nb);
    }
  }
  out.vertices.assign(queue.begin(), queue.end());
  return out;
}

}  // namespace schottky::trees
