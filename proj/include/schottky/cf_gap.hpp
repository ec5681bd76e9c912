// Gap lengths of the orbit {0, a, 2a, ..., Na} mod 1 and their closed form.
// With a_1 = a and a_{j+1} = frac(1/a_j), q_j = floor(1/a_j), the lengths
// that ever occur as gaps are exactly
//
//   (1 - q*a_j) * a_1*a_2*...*a_{j-1},   j >= 1,  0 <= q <= q_j - 1,
//
// and these are the images of the exceptional overlap lengths of a pair of
// translation lengths (m1, m2) with a = m2/m1 under l |-> (m1 + m2 - l)/m1.
// Everything here is exact; no floating point.
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "schottky/exactnum.hpp"
#include "schottky/triple.hpp"

namespace schottky::gaps {

using num::Int;
using triples::trace_exhausted;

template <class L>
struct AlphaOrbit {
  std::vector<L> alpha;  // alpha[0] is the input
  std::vector<Int> q;    // q[j-1] = floor(1/alpha[j-1])
  bool terminated = false;

  const L& alpha_(std::size_t j) const { return alpha.at(j - 1); }
  const Int& q_(std::size_t j) const { return q.at(j - 1); }
  std::size_t levels() const { return q.size(); }
};

template <class L>
AlphaOrbit<L> alpha_orbit(const L& alpha, std::size_t j_max) {
  if (num::sign_of(alpha) <= 0 || !(alpha < L(1)))
    throw std::domain_error("alpha_orbit: wants 0 < alpha < 1");
  AlphaOrbit<L> orbit;
  L cur = alpha;
  while (orbit.levels() < j_max) {
    L inv = L(1) / cur;
    Int q = num::floor_of(inv);
    orbit.alpha.push_back(cur);
    orbit.q.push_back(q);
    cur = inv - L(q);
    if (num::sign_of(cur) == 0) {
      orbit.terminated = true;
      break;
    }
  }
  return orbit;
}

// All formula values >= min_value over the levels of the orbit, ascending and
// deduplicated.  An infinite tail (orbit not terminated) needs a positive
// min_value to stay finite.
template <class L>
std::vector<L> gap_formula_set(const AlphaOrbit<L>& orbit, const L& min_value) {
  if (!orbit.terminated && num::sign_of(min_value) <= 0)
    throw std::domain_error("gap_formula_set: infinite orbit needs min_value > 0");
  std::vector<L> vals;
  L prefix(1);
  for (std::size_t j = 1; j <= orbit.levels(); ++j) {
    if (prefix < min_value) break;
    const L step = orbit.alpha_(j) * prefix;  // next prefix
    L v = prefix;
    for (Int q = 0; q <= orbit.q_(j) - 1; ++q) {
      if (v < min_value) break;
      vals.push_back(v);
      v = v - step;
    }
    prefix = step;
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

// Exact membership test against the (possibly infinite) formula set, walking
// levels until the prefix product drops below g.
template <class L>
bool formula_contains(const L& alpha, const L& g, std::size_t level_cap = 256) {
  if (num::sign_of(alpha) <= 0 || !(alpha < L(1)))
    throw std::domain_error("formula_contains: wants 0 < alpha < 1");
  if (num::sign_of(g) <= 0) throw std::domain_error("formula_contains: wants g > 0");
  if (L(1) < g) return false;
  L cur = alpha;
  L prefix(1);
  for (std::size_t level = 0; level < level_cap; ++level) {
    if (prefix < g) return false;
    if (num::sign_of(cur) == 0) return false;  // rational orbit ended
    L inv = L(1) / cur;
    Int qj = num::floor_of(inv);
    // solve prefix - q*(cur*prefix) = g for integral q in [0, qj)
    L diff = prefix - g;
    auto fd = num::floor_div(diff, cur * prefix);
    if (num::sign_of(fd.r) == 0 && fd.q <= qj - 1) return true;
    prefix = cur * prefix;
    cur = inv - L(qj);
  }
  throw trace_exhausted("formula_contains: level cap too small for this g");
}

// Incremental gap bookkeeping for the orbit of 0 under rotation by alpha.
// Each advance inserts the next multiple and patches the two gaps it splits.
template <class L>
class ThreeGapScan {
 public:
  explicit ThreeGapScan(L alpha) : alpha_(std::move(alpha)), cur_(0) {
    if (num::sign_of(alpha_) <= 0 || !(alpha_ < L(1)))
      throw std::domain_error("ThreeGapScan: wants 0 < alpha < 1");
    points_.insert(L(0));
    gaps_[L(1)] = 1;
  }

  // false when the new point already existed (rational alpha has wrapped)
  bool advance() {
    cur_ = cur_ + alpha_;
    if (!(cur_ < L(1))) cur_ = cur_ - L(1);
    auto [it, fresh] = points_.insert(cur_);
    if (!fresh) return false;
    auto nxt = std::next(it);
    if (nxt == points_.end()) nxt = points_.begin();
    auto prv = it == points_.begin() ? std::prev(points_.end()) : std::prev(it);
    gap_remove(circ(*prv, *nxt));
    gap_add(circ(*prv, *it));
    gap_add(circ(*it, *nxt));
    return true;
  }

  std::size_t point_count() const { return points_.size(); }
  std::size_t distinct_gaps() const { return gaps_.size(); }
  const std::map<L, int>& gap_multiset() const { return gaps_; }

  std::vector<L> gaps() const {
    std::vector<L> out;
    out.reserve(gaps_.size());
    for (const auto& [len, cnt] : gaps_) out.push_back(len);
    return out;
  }

 private:
  // forward circular distance; a == b means the full circle
  L circ(const L& a, const L& b) const {
    L d = b - a;
    if (num::sign_of(d) <= 0) d = d + L(1);
    return d;
  }

  void gap_add(const L& len) { ++gaps_[len]; }

  void gap_remove(const L& len) {
    auto it = gaps_.find(len);
    if (it == gaps_.end()) throw std::logic_error("ThreeGapScan: gap list out of sync");
    if (--it->second == 0) gaps_.erase(it);
  }

  L alpha_;
  L cur_;
  std::set<L> points_;
  std::map<L, int> gaps_;
};

template <class L>
std::vector<L> three_gap_bruteforce(const L& alpha, unsigned long long n) {
  ThreeGapScan<L> scan(alpha);
  for (unsigned long long i = 0; i < n; ++i) scan.advance();
  return scan.gaps();
}

template <class L>
struct CorrespondenceReport {
  std::size_t levels = 0;
  unsigned long long steps = 0;
  std::size_t max_distinct_gaps = 0;
  bool quotients_match = true;
  bool exceptional_values_match = true;
  bool at_most_three_gaps = true;
  bool observed_gaps_in_formula = true;
  bool formula_gaps_realized = true;

  bool ok() const {
    return quotients_match && exceptional_values_match && at_most_three_gaps &&
           observed_gaps_in_formula && formula_gaps_realized;
  }
};

// Cross-checks the two sides of the correspondence for a concrete pair:
//  - the Gauss orbit of m2/m1 reproduces the quotients of the remainder
//    sequence of (m1, m2);
//  - each exceptional overlap length maps onto its formula gap exactly;
//  - a scan of n_max rotation steps never shows more than three distinct
//    gaps, every observed gap is a formula value, and every formula value
//    down to the smallest observed gap was realized at some step.
template <class L>
CorrespondenceReport<L> verify_correspondence(const L& m1, const L& m2,
                                              std::size_t j_max = 8,
                                              unsigned long long n_max = 200) {
  if (num::sign_of(m2) <= 0 || !(m2 < m1))
    throw std::domain_error("verify_correspondence: wants m1 > m2 > 0");
  const L alpha = m2 / m1;
  auto orbit = alpha_orbit(alpha, j_max);
  auto trace = triples::euclid_sequences(m1, m2, j_max + 2);

  CorrespondenceReport<L> rep;
  rep.levels = orbit.levels();
  rep.steps = n_max;

  std::size_t shared = std::min(orbit.levels(), trace.q.size());
  for (std::size_t j = 1; j <= shared; ++j)
    if (orbit.q_(j) != trace.q_(j)) rep.quotients_match = false;
  if (orbit.terminated && trace.terminated && orbit.levels() != trace.q.size())
    rep.quotients_match = false;

  const std::size_t j_top =
      trace.terminated ? std::min(shared, trace.k - 1) : shared;
  L prefix(1);
  for (std::size_t j = 1; j <= j_top; ++j) {
    std::vector<Int> sample;
    const Int& qj = trace.q_(j);
    if (qj <= 32) {
      for (Int q = 0; q < qj; ++q) sample.push_back(q);
    } else {
      sample = {Int(0), Int(1), Int(qj / 2), Int(qj - 1)};
    }
    for (const Int& q : sample) {
      L lhs = (trace.m_(j) - L(q) * trace.m_(j + 1)) / m1;
      L rhs = (L(1) - L(q) * orbit.alpha_(j)) * prefix;
      if (!(lhs == rhs)) rep.exceptional_values_match = false;
    }
    prefix = prefix * orbit.alpha_(j);
  }

  ThreeGapScan<L> scan(alpha);
  std::set<L> observed;
  for (const L& g : scan.gaps()) observed.insert(g);
  rep.max_distinct_gaps = scan.distinct_gaps();
  for (unsigned long long n = 1; n <= n_max; ++n) {
    scan.advance();
    rep.max_distinct_gaps = std::max(rep.max_distinct_gaps, scan.distinct_gaps());
    if (scan.distinct_gaps() > 3) rep.at_most_three_gaps = false;
    for (const L& g : scan.gaps()) observed.insert(g);
  }
  for (const L& g : observed)
    if (!formula_contains(alpha, g)) rep.observed_gaps_in_formula = false;

  const L& min_obs = *observed.begin();
  auto deep = alpha_orbit(alpha, 256);
  for (const L& v : gap_formula_set(deep, min_obs))
    if (observed.find(v) == observed.end()) rep.formula_gaps_realized = false;

  return rep;
}

}  // namespace schottky::gaps
