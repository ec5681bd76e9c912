// Concrete pairs of tree automorphisms realizing a triple (l, m1, m2): axis
// of the first generator through the root, axes overlapping in l edges (or
// disjoint at a chosen bridge distance when l = 0), translation lengths m1
// and m2.  Also the measurement side: recover the triple from the pair by
// evaluation only, measure secondary overlaps, and certify freeness by an
// exact ping-pong argument on half-trees.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schottky/tree_auto.hpp"
#include "schottky/triple.hpp"

namespace schottky::trees {

struct TwistSpec {
  enum class Kind { Default, Target, Ports };
  Kind kind = Kind::Default;
  long long target_l0 = 0;
  std::vector<std::pair<int, Vertex>> ports;

  static TwistSpec defaults() { return {}; }

  static TwistSpec target(long long l0) {
    TwistSpec s;
    s.kind = Kind::Target;
    s.target_l0 = l0;
    return s;
  }

  static TwistSpec with_ports(std::vector<std::pair<int, Vertex>> ports) {
    TwistSpec s;
    s.kind = Kind::Ports;
    s.ports = std::move(ports);
    return s;
  }
};

struct ActionPair {
  TreeAuto g1, g2;
  Geodesic axis1, axis2;
  long long l = 0, m1 = 0, m2 = 0;
  long long bridge = 0;  // meaningful when l == 0
  Vertex v_minus, v_plus;  // overlap ends, or the two bridge feet when l == 0
  std::set<Vertex> twist1, twist2;
};

namespace detail {

inline Ray alternating(Label first, Label second) { return Ray{{}, {first, second}}; }

inline std::vector<Label> overlap_labels(long long l) {
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(l));
  for (long long k = 0; k < l; ++k) out.push_back(static_cast<Label>(k % 2));
  return out;
}

}  // namespace detail

// The standard configuration.  Axis 1 is the alternating a/b line through the
// root; for l >= 1 axis 2 runs along it from the root for l edges and leaves
// through c at both ends; for l = 0 axis 2 sits at the requested bridge
// distance behind a c-a-alternating bridge path.
inline ActionPair realize_plain(long long l, long long m1, long long m2,
                                std::set<Vertex> twist1 = {},
                                std::set<Vertex> twist2 = {},
                                long long bridge = 1) {
  if (l < 0 || m1 < 1 || m2 < 1)
    throw std::domain_error("realize: wants l >= 0 and m1, m2 >= 1");
  if (l == 0 && bridge < 1)
    throw std::domain_error("realize: disjoint axes need bridge >= 1");

  Geodesic axis1(Vertex(), detail::alternating(0, 1), detail::alternating(1, 0));

  ActionPair out{TreeAuto(), TreeAuto(), axis1, axis1};
  out.l = l;
  out.m1 = m1;
  out.m2 = m2;
  out.twist1 = twist1;
  out.twist2 = twist2;

  if (l >= 1) {
    Ray fwd;
    fwd.head = detail::overlap_labels(l);
    fwd.head.push_back(2);
    fwd.cycle = {0, 2};
    Ray bwd;
    bwd.head = {2};
    bwd.cycle = {0, 2};
    out.axis2 = Geodesic(Vertex(), fwd, bwd);
    out.v_minus = Vertex();
    out.v_plus = walk(Vertex(), detail::overlap_labels(l));
    out.bridge = 0;
  } else {
    std::vector<Label> path;
    for (long long k = 0; k < bridge; ++k) path.push_back(k % 2 == 0 ? 2 : 0);
    Vertex anchor = walk(Vertex(), path);
    Label t = path.back();
    Label x = t == 0 ? 1 : 0;
    Label y = t == 2 ? 1 : 2;
    out.axis2 = Geodesic(anchor, detail::alternating(x, t), detail::alternating(y, t));
    out.v_minus = Vertex();
    out.v_plus = anchor;
    out.bridge = bridge;
  }

  out.g1 = TreeAuto::axis_translation(out.axis1, m1, std::move(twist1));
  out.g2 = TreeAuto::axis_translation(out.axis2, m2, std::move(twist2));
  return out;
}

// nearest vertex of a materialized axis window; interior means the minimum
// was attained away from the window ends, so convexity makes it the true
// distance to the whole axis
struct NearestResult {
  long long dist = 0;
  long long index = 0;
  bool interior = false;
};

inline NearestResult nearest_on_window(const AxisWindow& w, const Vertex& v) {
  NearestResult best;
  bool first = true;
  for (std::size_t k = 0; k < w.verts.size(); ++k) {
    long long d = distance(w.verts[k], v);
    if (first || d < best.dist) {
      best.dist = d;
      best.index = w.lo + static_cast<long long>(k);
      first = false;
    }
  }
  best.interior = best.index > w.lo && best.index < w.hi();
  return best;
}

// How the axes of two hyperbolic elements sit relative to each other,
// computed from evaluation alone.  Connectedness of the intersection makes
// the shared vertices one contiguous index run.
struct AxisRelation {
  bool meeting = false;
  long long overlap = 0;  // edges shared, when meeting
  long long bridge = 0;   // distance between the axes, when disjoint
  bool exact = true;      // false when a window end clipped the answer
  long long a_lo = 0, a_hi = 0;  // overlap run on the first axis
  long long b_lo = 0, b_hi = 0;  // matching run on the second axis
  Vertex meet_lo, meet_hi;       // run ends (a-index order), when meeting
  Vertex foot_a, foot_b;         // nearest pair, when disjoint
  bool orientation_agreed = true;  // translation directions agree on the run
};

inline AxisRelation axis_relation(const TreeAuto& ga, const TreeAuto& gb,
                                  long long radius,
                                  const Vertex& probe = Vertex()) {
  AxisWindow wa = axis_window(ga, -radius, radius, probe);
  AxisWindow wb = axis_window(gb, -radius, radius, probe);
  std::map<Vertex, long long> on_b;
  for (std::size_t k = 0; k < wb.verts.size(); ++k)
    on_b.emplace(wb.verts[k], wb.lo + static_cast<long long>(k));

  AxisRelation rel;
  long long run_lo = 0, run_hi = -1;
  bool in_run = false;
  for (std::size_t k = 0; k < wa.verts.size(); ++k) {
    long long i = wa.lo + static_cast<long long>(k);
    if (on_b.count(wa.verts[k])) {
      if (!in_run) {
        run_lo = i;
        in_run = true;
      }
      run_hi = i;
    } else if (in_run) {
      break;  // the intersection is connected
    }
  }

  if (in_run) {
    rel.meeting = true;
    rel.a_lo = run_lo;
    rel.a_hi = run_hi;
    rel.overlap = run_hi - run_lo;
    rel.meet_lo = wa.at(run_lo);
    rel.meet_hi = wa.at(run_hi);
    rel.b_lo = on_b.at(rel.meet_lo);
    rel.b_hi = on_b.at(rel.meet_hi);
    rel.exact = run_lo > wa.lo && run_hi < wa.hi() && rel.b_lo > wb.lo &&
                rel.b_lo < wb.hi() && rel.b_hi > wb.lo && rel.b_hi < wb.hi();
    if (rel.overlap >= 1) {
      long long bn = on_b.at(wa.at(run_lo + 1));
      rel.orientation_agreed = bn == rel.b_lo + 1;
    }
    return rel;
  }

  // disjoint within the windows: nearest pair, V-shaped in the a-index
  NearestResult best;
  long long best_ai = 0;
  bool first = true;
  for (std::size_t k = 0; k < wa.verts.size(); ++k) {
    NearestResult nr = nearest_on_window(wb, wa.verts[k]);
    if (first || nr.dist < best.dist) {
      best = nr;
      best_ai = wa.lo + static_cast<long long>(k);
      first = false;
    }
  }
  rel.meeting = false;
  rel.bridge = best.dist;
  rel.foot_a = wa.at(best_ai);
  rel.foot_b = wb.at(best.index);
  rel.exact = best.interior && best_ai > wa.lo && best_ai < wa.hi();
  return rel;
}

struct PairMeasurement {
  long long m1 = 0, m2 = 0;
  AxisRelation rel;
};

// recover the triple data from the pair by evaluation only
inline PairMeasurement measure_pair(const ActionPair& pair, long long radius = 0) {
  PairMeasurement m;
  m.m1 = translation_length(pair.g1);
  m.m2 = translation_length(pair.g2);
  if (radius <= 0) radius = pair.l + pair.m1 + pair.m2 + pair.bridge + 16;
  m.rel = axis_relation(pair.g1, pair.g2, radius);
  return m;
}

struct OverlapMeasurement {
  long long length = 0;
  bool exact = true;
};

// length of axis(w) meet a.axis(w): the image axis is the axis of the
// conjugate a w a^-1
inline OverlapMeasurement measure_l0(const TreeAuto& w, const TreeAuto& a,
                                     long long radius,
                                     const Vertex& probe = Vertex()) {
  TreeAuto conj = a * w * a.inverse();
  AxisRelation rel = axis_relation(w, conj, radius, probe);
  OverlapMeasurement out;
  if (rel.meeting) {
    out.length = rel.overlap;
    out.exact = rel.exact;
  } else {
    out.length = 0;
    out.exact = rel.exact;
  }
  return out;
}

// one side of the tree after deleting the edge {x, y}: the component of y
struct HalfTree {
  Vertex x, y;
};

inline bool half_contains(const HalfTree& h, const Vertex& v) {
  return distance(v, h.y) < distance(v, h.x);
}

inline bool halves_disjoint(const HalfTree& p, const HalfTree& q) {
  return !half_contains(q, p.y) && !half_contains(p, q.y);
}

struct PingPongReport {
  bool applicable = false;
  bool certified = false;
  std::string failure;
  HalfTree a_minus, a_plus, b_minus, b_plus;
  Vertex witness;
  std::size_t sampled = 0;

  bool ok() const { return applicable && certified; }
};

// Exact freeness certificate for two hyperbolic elements.  The minus edges
// sit on the axes just outside the interaction zone, the plus half-trees are
// the images of the complements, so each generator maps the complement of
// its minus half-tree onto its plus half-tree by construction; pairwise
// disjointness of the four (checked by edge algebra) then gives ping-pong.
// A ball around the witness vertex is re-checked by raw evaluation.
inline PingPongReport ping_pong_check(const TreeAuto& a, const TreeAuto& b,
                                      long long radius = 96, long long ball = 3,
                                      const Vertex& probe = Vertex()) {
  PingPongReport rep;
  if (type_of(a, probe).type != IsomType::Hyperbolic ||
      type_of(b, probe).type != IsomType::Hyperbolic) {
    rep.failure = "both elements must be hyperbolic";
    return rep;
  }
  rep.applicable = true;

  AxisRelation rel = axis_relation(a, b, radius, probe);
  if (!rel.exact) {
    rep.failure = "axis relation not resolved within the window";
    return rep;
  }

  AxisWindow wa = axis_window(a, -radius, radius, probe);
  AxisWindow wb = axis_window(b, -radius, radius, probe);

  long long ea, eb;  // minus-edge positions on the two axes
  if (rel.meeting) {
    ea = rel.a_lo;
    eb = std::min(rel.b_lo, rel.b_hi);
    rep.witness = rel.meet_lo;
  } else {
    ea = nearest_on_window(wa, rel.foot_a).index;
    eb = nearest_on_window(wb, rel.foot_b).index;
    rep.witness = rel.foot_a;
  }
  rep.a_minus = HalfTree{wa.at(ea), wa.at(ea - 1)};
  rep.a_plus = HalfTree{a(wa.at(ea - 1)), a(wa.at(ea))};
  rep.b_minus = HalfTree{wb.at(eb), wb.at(eb - 1)};
  rep.b_plus = HalfTree{b(wb.at(eb - 1)), b(wb.at(eb))};

  const HalfTree* hs[4] = {&rep.a_minus, &rep.a_plus, &rep.b_minus, &rep.b_plus};
  const char* names[4] = {"a-", "a+", "b-", "b+"};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!halves_disjoint(*hs[i], *hs[j])) {
        rep.failure = std::string("half-trees ") + names[i] + " and " + names[j] +
                      " intersect";
        return rep;
      }
  for (int i = 0; i < 4; ++i)
    if (half_contains(*hs[i], rep.witness)) {
      rep.failure = std::string("witness vertex inside ") + names[i];
      return rep;
    }

  // dynamical re-check on a ball: raw evaluations must respect the scheme
  TreeAuto ai = a.inverse(), bi = b.inverse();
  std::vector<Vertex> sphere{rep.witness};
  std::set<Vertex> seen{rep.witness};
  for (std::size_t qi = 0; qi < sphere.size(); ++qi) {
    Vertex cur = sphere[qi];
    if (distance(rep.witness, cur) < ball)
      for (Label x = 0; x < 3; ++x)
        if (Vertex nb = cur.step(x); seen.insert(nb).second) sphere.push_back(nb);
  }
  for (const Vertex& v : sphere) {
    if (!half_contains(rep.a_minus, v) && !half_contains(rep.a_plus, a(v))) {
      rep.failure = "evaluation of a left its target half-tree";
      return rep;
    }
    if (!half_contains(rep.a_plus, v) && !half_contains(rep.a_minus, ai(v))) {
      rep.failure = "evaluation of a^-1 left its target half-tree";
      return rep;
    }
    if (!half_contains(rep.b_minus, v) && !half_contains(rep.b_plus, b(v))) {
      rep.failure = "evaluation of b left its target half-tree";
      return rep;
    }
    if (!half_contains(rep.b_plus, v) && !half_contains(rep.b_minus, bi(v))) {
      rep.failure = "evaluation of b^-1 left its target half-tree";
      return rep;
    }
  }
  rep.sampled = sphere.size();
  rep.certified = true;
  return rep;
}

// Realize with a twist request.  Default and explicit port lists are direct;
// a target overlap request searches single ports near the interaction zone
// and keeps the first configuration whose measured secondary overlap hits
// the target exactly.  The search is a bounded best effort: some targets are
// geometrically unreachable (a zone where three would-be axes squeeze
// through one vertex of valence three forces overlap, for instance), and
// then this throws rather than misreport.
inline ActionPair realize(long long l, long long m1, long long m2,
                          const TwistSpec& spec = {}, long long bridge = 1) {
  std::set<Vertex> t1, t2;
  if (spec.kind == TwistSpec::Kind::Ports) {
    for (const auto& [gen, v] : spec.ports) {
      if (gen == 1)
        t1.insert(v);
      else if (gen == 2)
        t2.insert(v);
      else
        throw std::domain_error("realize: port generator must be 1 or 2");
    }
    return realize_plain(l, m1, m2, std::move(t1), std::move(t2), bridge);
  }
  if (spec.kind == TwistSpec::Kind::Default)
    return realize_plain(l, m1, m2, {}, {}, bridge);

  // target search
  using num::Int;
  if (spec.target_l0 < 0) throw std::domain_error("realize: target overlap < 0");
  auto cls = triples::classify(
      triples::GeometricTriple<Int>{Int(l), Int(m1), Int(m2)});
  if (cls.tag != triples::CaseTag::Case2aConditional)
    throw std::domain_error(
        "realize: a target overlap only applies where the verdict depends on one");
  const words::Word wa = *cls.generator_a;
  const words::Word ww = *cls.generator_b;
  const long long radius = spec.target_l0 + l + m1 + m2 + 24;

  auto attempt = [&](std::set<Vertex> tw1, std::set<Vertex> tw2)
      -> std::optional<ActionPair> {
    ActionPair pair = realize_plain(l, m1, m2, std::move(tw1), std::move(tw2), bridge);
    TreeAuto aw = apply_word(wa, pair.g1, pair.g2);
    TreeAuto www = apply_word(ww, pair.g1, pair.g2);
    OverlapMeasurement om = measure_l0(www, aw, radius);
    if (om.exact && om.length == spec.target_l0) return pair;
    return std::nullopt;
  };

  if (auto hit = attempt({}, {})) return *hit;
  const long long reach = spec.target_l0 + 12;
  std::vector<std::pair<int, Vertex>> pool;
  ActionPair base = realize_plain(l, m1, m2, {}, {}, bridge);
  for (long long k = 1; k <= reach; ++k) {
    pool.emplace_back(2, base.axis1.at(-k));
    pool.emplace_back(2, base.axis1.at(l + k));
    pool.emplace_back(1, base.axis2.at(-k));
    pool.emplace_back(1, base.axis2.at(l + k));
  }
  for (const auto& [gen, v] : pool) {
    std::set<Vertex> tw1, tw2;
    (gen == 1 ? tw1 : tw2).insert(v);
    if (auto hit = attempt(std::move(tw1), std::move(tw2))) return *hit;
  }
  throw std::runtime_error(
      "realize: no single twist port reached the requested overlap within the "
      "search budget");
}

}  // namespace schottky::trees
