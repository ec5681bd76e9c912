// Classification of the group generated by two hyperbolic tree automorphisms
// from the triple (l, m1, m2): l the length of the axis overlap (or minus the
// bridge distance is never needed here, disjoint axes are out of range), m1
// and m2 the translation lengths.  The continued-fraction data of m1/m2
// drives both the unit-step reduction and the closed-form location of l
// among the exceptional values (m1+m2) - m_j + q*m_{j+1}.
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schottky/exactnum.hpp"
#include "schottky/words.hpp"

namespace schottky::triples {

using num::Int;
using words::Word;

// l >= 0, m1 > 0, m2 > 0 except in terminal states, where m2 = 0 is allowed.
template <class L>
struct GeometricTriple {
  L l{};
  L m1{};
  L m2{};
  friend bool operator==(const GeometricTriple&, const GeometricTriple&) = default;
};

template <class L>
GeometricTriple<L> make_triple(L l, L m1, L m2) {
  if (num::sign_of(l) < 0) throw std::domain_error("triple: l must be >= 0");
  if (num::sign_of(m1) <= 0 || num::sign_of(m2) <= 0)
    throw std::domain_error("triple: translation lengths must be > 0");
  return {std::move(l), std::move(m1), std::move(m2)};
}

// Remainder sequence of (m1, m2): m_{i+2} = m_i - q_i*m_{i+1} with
// q_i = floor(m_i/m_{i+1}).  Indices are 1-based through m_(i)/q_(i) to match
// the formulas; terminated means some m_{k+1} = 0 was reached, and then
// m_(k) = gcd(m1, m2).  For an irrational ratio the sequence is infinite and
// gets cut off at the cap.
template <class L>
struct EuclidTrace {
  std::vector<L> m;     // m[0] = m1
  std::vector<Int> q;   // q[0] = q_1
  bool terminated = false;
  std::size_t k = 0;    // 1-based index of the last nonzero term, if terminated

  const L& m_(std::size_t i) const { return m.at(i - 1); }
  const Int& q_(std::size_t i) const { return q.at(i - 1); }
  std::size_t terms() const { return m.size(); }
};

class trace_exhausted : public std::runtime_error {
 public:
  explicit trace_exhausted(const std::string& what) : std::runtime_error(what) {}
};

template <class L>
EuclidTrace<L> euclid_sequences(const L& m1, const L& m2, std::size_t cap = 64) {
  if (num::sign_of(m1) <= 0 || num::sign_of(m2) <= 0)
    throw std::domain_error("euclid_sequences: arguments must be > 0");
  if (m1 < m2) throw std::domain_error("euclid_sequences: wants m1 >= m2");
  EuclidTrace<L> t;
  t.m.push_back(m1);
  t.m.push_back(m2);
  while (t.m.size() < cap) {
    const L& a = t.m[t.m.size() - 2];
    const L& b = t.m.back();
    auto [q, r] = num::floor_div(a, b);
    t.q.push_back(q);
    t.m.push_back(r);
    if (num::sign_of(t.m.back()) == 0) {
      t.terminated = true;
      t.k = t.m.size() - 1;  // m_(k+1) is the trailing zero
      return t;
    }
  }
  return t;
}

enum class TripleCase { I, II, III, IV };

// Which rule applies to a normalized state (m1 >= m2).
template <class L>
TripleCase case_of(const GeometricTriple<L>& t) {
  if (num::sign_of(t.m2) == 0) return TripleCase::IV;
  if (t.l >= t.m2) return TripleCase::I;
  if (num::sign_of(t.l) > 0) return TripleCase::II;
  return TripleCase::III;
}

// One unit step: (l, m1, m2) -> (l - m2, m1 - m2, m2), generator pair
// (w1, w2) -> (w1*w2^-1, w2).  The result is not re-normalized here.
template <class L>
GeometricTriple<L> reduce_step(const GeometricTriple<L>& t) {
  if (case_of(t) != TripleCase::I)
    throw std::domain_error("reduce_step: state is not reducible");
  return {t.l - t.m2, t.m1 - t.m2, t.m2};
}

template <class L>
struct ReductionState {
  GeometricTriple<L> triple;
  Word w1, w2;
};

template <class L>
struct ReductionTrace {
  std::vector<ReductionState<L>> states;  // normalized after every step
  TripleCase terminal = TripleCase::II;
  bool swapped_input = false;
};

class irrational_impossible : public std::runtime_error {
 public:
  irrational_impossible()
      : std::runtime_error(
            "no tree action exists: m1/m2 is irrational and l >= m1 + m2") {}
};

// Run the reduction to a terminal state, carrying the generator pair along.
// Words are in the caller's labels: if the input had m1 < m2 the initial
// normalization swaps the pair, so states[0].w1 may be g2.
template <class L>
ReductionTrace<L> reduce_trace(const GeometricTriple<L>& input,
                               std::size_t max_states = 1u << 20) {
  ReductionTrace<L> out;
  GeometricTriple<L> t = input;
  Word w1 = Word::generator(1);
  Word w2 = Word::generator(2);
  if (num::sign_of(t.l) < 0 || num::sign_of(t.m1) <= 0 || num::sign_of(t.m2) <= 0)
    throw std::domain_error("reduce_trace: wants l >= 0 and m1, m2 > 0");
  if (t.m1 < t.m2) {
    std::swap(t.m1, t.m2);
    std::swap(w1, w2);
    out.swapped_input = true;
  }
  if (!num::ratio_is_rational(t.m1, t.m2) && t.l >= t.m1 + t.m2)
    throw irrational_impossible();
  out.states.push_back({t, w1, w2});
  while (true) {
    TripleCase c = case_of(t);
    if (c != TripleCase::I) {
      out.terminal = c;
      return out;
    }
    t = reduce_step(t);
    w1 = w1 * w2.inverse();
    if (t.m1 < t.m2) {
      std::swap(t.m1, t.m2);
      std::swap(w1, w2);
    }
    out.states.push_back({t, w1, w2});
    if (out.states.size() > max_states)
      throw std::runtime_error("reduce_trace: state budget exceeded");
  }
}

// Position of l among the half-open intervals
//   ((m1+m2) - m_j + (q-1)*m_{j+1}, (m1+m2) - m_j + q*m_{j+1}],
// 1 <= j, 0 <= q <= q_j - 1.  `exceptional` flags the right endpoint.
struct LocateResult {
  std::size_t j = 0;
  Int q;
  bool exceptional = false;
};

template <class L>
LocateResult locate_jq(const GeometricTriple<L>& t, const EuclidTrace<L>& trace) {
  if (num::sign_of(t.l) <= 0)
    throw std::domain_error("locate_jq: wants l > 0");
  const L sum = t.m1 + t.m2;
  const std::size_t j_max = trace.terminated ? trace.k - 1 : trace.q.size();
  for (std::size_t j = 1; j <= j_max; ++j) {
    // smallest q with l <= (m1+m2) - m_j + q*m_{j+1}
    L num_l = t.l - sum + trace.m_(j);
    Int q = 0;
    if (num::sign_of(num_l) > 0) {
      auto fd = num::floor_div(num_l, trace.m_(j + 1));
      q = fd.q;
      if (num::sign_of(fd.r) > 0) ++q;
    }
    if (q <= trace.q_(j) - 1) {
      LocateResult res;
      res.j = j;
      res.q = q;
      L bound = sum - trace.m_(j) + L(res.q) * trace.m_(j + 1);
      res.exceptional = (t.l == bound);
      return res;
    }
  }
  if (trace.terminated)
    throw std::domain_error("locate_jq: l exceeds (m1+m2) - gcd(m1,m2)");
  throw trace_exhausted("locate_jq: remainder sequence cap too small for this l");
}

// gamma_1 = g1, gamma_2 = g2, gamma_{i+2} = gamma_i * gamma_{i+1}^{-q_i}.
// Returns words for gamma_1 .. gamma_upto.  Word sizes can grow like the
// product of the quotients, hence the letter budget.
template <class L>
std::vector<Word> generator_words(const EuclidTrace<L>& trace, std::size_t upto,
                                  unsigned long long letter_budget = 1u << 20) {
  if (upto < 2 || upto > trace.terms())
    throw std::domain_error("generator_words: upto out of range");
  std::vector<Word> g;
  g.reserve(upto);
  g.push_back(Word::generator(1));
  g.push_back(Word::generator(2));
  for (std::size_t i = 1; i + 1 < upto; ++i) {
    const Int& q = trace.q_(i);
    if (q > std::numeric_limits<long long>::max())
      throw std::runtime_error("generator_words: quotient exceeds word exponent range");
    Word next = g[i - 1] * g[i].pow(-q.convert_to<long long>());
    if (next.letter_length() > letter_budget)
      throw std::runtime_error("generator_words: letter budget exceeded");
    g.push_back(std::move(next));
  }
  return g;
}

enum class CaseTag {
  Case1,
  Case2aElliptic,
  Case2aHyperbolic,
  Case2aConditional,
  Case2b,
  Case3,
  IrrationalImpossible,
};

enum class Relation {
  DisjointAxisAxis,
  DisjointAxisTree,
  MeetingAxisAxis,
  MeetingAxisTree,
};

// Outcome of the classification.  generator_a is always hyperbolic with
// translation length m_a.  When b_elliptic is set, generator_b has an
// invariant subtree at distance `measure` from the axis of generator_a and
// the group is not free; otherwise <generator_a, generator_b> is free of rank
// two and `measure` describes the configuration of the two axes (overlap
// length, or distance between them).  Case2aConditional means the verdict
// still depends on an overlap length l0 that the triple alone does not
// determine: generator_b is then the word w whose axis has to be measured
// against its translate by generator_a, and l0_threshold is the cut.
template <class L>
struct Classification {
  CaseTag tag = CaseTag::Case1;
  std::optional<Word> generator_a;
  std::optional<Word> generator_b;
  std::optional<L> m_a;
  std::optional<L> m_b;
  bool b_elliptic = false;
  std::optional<Relation> relation;
  std::optional<num::half_t<L>> measure;
  std::optional<std::size_t> j;
  std::optional<Int> q;
  std::optional<num::half_t<L>> l0_threshold;
  bool v_plus_endpoint = false;
};

template <class L>
bool is_free_verdict(const Classification<L>& c) {
  return c.tag == CaseTag::Case1 || c.tag == CaseTag::Case2aHyperbolic ||
         c.tag == CaseTag::Case2b;
}

// True when l < min(m1, m2): free by the shortness criterion alone.  The
// classification must then land in Case1 or Case2b.
template <class L>
bool shimizu_precheck(const GeometricTriple<L>& t) {
  return t.l < t.m1 && t.l < t.m2;
}

namespace detail {

inline Word relabel(const Word& w, bool swapped) {
  return swapped ? w.swapped_generators() : w;
}

}  // namespace detail

// Classify the pair from the triple.  l0, when given, is the measured overlap
// length between the axis of w = gamma_j*gamma_{j+1}^-q and its translate by
// gamma_{j+1}; it is only consulted on the exceptional values of l where the
// verdict depends on it.  Words in the result use the caller's generator
// labels even when m1 < m2 forces an internal swap.
template <class L>
Classification<L> classify(const GeometricTriple<L>& input,
                           std::optional<L> l0 = std::nullopt,
                           std::size_t cap = 64) {
  using Half = num::half_t<L>;
  if (num::sign_of(input.l) < 0 || num::sign_of(input.m1) <= 0 ||
      num::sign_of(input.m2) <= 0)
    throw std::domain_error("classify: wants l >= 0 and m1, m2 > 0");

  GeometricTriple<L> t = input;
  const bool swapped = t.m1 < t.m2;
  if (swapped) std::swap(t.m1, t.m2);

  Classification<L> out;
  const bool rational = num::ratio_is_rational(t.m1, t.m2);
  if (!rational && t.l >= t.m1 + t.m2) {
    out.tag = CaseTag::IrrationalImpossible;
    return out;
  }

  if (num::sign_of(t.l) == 0) {
    out.tag = CaseTag::Case1;
    out.generator_a = detail::relabel(Word::generator(1), swapped);
    out.generator_b = detail::relabel(Word::generator(2), swapped);
    out.m_a = t.m1;
    out.m_b = t.m2;
    out.relation = Relation::DisjointAxisAxis;
    out.measure = Half(0);
    return out;
  }

  EuclidTrace<L> trace = euclid_sequences(t.m1, t.m2, cap);

  if (trace.terminated) {
    const L& g = trace.m_(trace.k);
    if (t.l > t.m1 + t.m2 - g) {
      std::vector<Word> gamma = generator_words(trace, trace.k + 1);
      out.tag = CaseTag::Case3;
      out.generator_a = detail::relabel(gamma[trace.k - 1], swapped);
      out.generator_b = detail::relabel(gamma[trace.k], swapped);
      out.m_a = g;
      out.b_elliptic = true;
      out.relation = Relation::MeetingAxisTree;
      L depth = t.l - (t.m1 + t.m2) + g;
      out.measure = num::widen_measure(depth);
      out.v_plus_endpoint = true;
      return out;
    }
  }

  LocateResult loc = locate_jq(t, trace);
  out.j = loc.j;
  out.q = loc.q;
  if (loc.q > std::numeric_limits<long long>::max())
    throw std::runtime_error("classify: quotient exceeds word exponent range");
  std::vector<Word> gamma = generator_words(trace, loc.j + 1);
  const Word& a = gamma[loc.j];  // gamma_{j+1}
  const long long qll = loc.q.convert_to<long long>();
  if (a.letter_length() * static_cast<unsigned long long>(qll + 2) > (1u << 20))
    throw std::runtime_error("classify: letter budget exceeded");
  out.generator_a = detail::relabel(a, swapped);
  out.m_a = trace.m_(loc.j + 1);

  if (!loc.exceptional) {
    out.tag = CaseTag::Case2b;
    Word b = gamma[loc.j - 1] * a.pow(-qll);
    out.generator_b = detail::relabel(b, swapped);
    out.m_b = trace.m_(loc.j) - L(loc.q) * trace.m_(loc.j + 1);
    out.relation = Relation::MeetingAxisAxis;
    L overlap =
        t.l - (t.m1 + t.m2) + trace.m_(loc.j) - L(Int(loc.q - 1)) * trace.m_(loc.j + 1);
    out.measure = num::widen_measure(overlap);
    out.v_plus_endpoint = true;
    return out;
  }

  // l sits exactly on an exceptional value: the verdict depends on the
  // overlap l0 = length(axis(w) meet gamma_{j+1}.axis(w)), w = gamma_j * a^-q,
  // against the threshold (m_j - (q+1) m_{j+1})/2.
  const L margin = trace.m_(loc.j) - L(Int(loc.q + 1)) * trace.m_(loc.j + 1);
  if (num::sign_of(margin) < 0)
    throw std::logic_error("classify: negative elliptic threshold");
  const Half threshold = num::half_of(margin);
  out.l0_threshold = threshold;

  const Word b_elliptic_word = gamma[loc.j - 1] * a.pow(-(qll + 1));
  const bool forced_elliptic = num::sign_of(margin) == 0;
  if (!forced_elliptic && !l0) {
    out.tag = CaseTag::Case2aConditional;
    out.generator_b = detail::relabel(gamma[loc.j - 1] * a.pow(-qll), swapped);
    return out;
  }
  if (!forced_elliptic && num::sign_of(*l0) < 0)
    throw std::domain_error("classify: l0 must be >= 0");

  if (forced_elliptic || num::widen_measure(*l0) >= threshold) {
    out.tag = CaseTag::Case2aElliptic;
    out.generator_b = detail::relabel(b_elliptic_word, swapped);
    out.b_elliptic = true;
    out.relation = Relation::DisjointAxisTree;
    out.measure = threshold;
  } else {
    out.tag = CaseTag::Case2aHyperbolic;
    out.generator_b = detail::relabel(b_elliptic_word, swapped);
    out.m_b = margin - (*l0 + *l0);
    out.relation = Relation::DisjointAxisAxis;
    out.measure = num::widen_measure(*l0);
  }
  return out;
}

template <class L>
Classification<L> classify(const GeometricTriple<L>& input, const L& l0,
                           std::size_t cap = 64) {
  return classify(input, std::optional<L>(l0), cap);
}

inline std::string to_text(CaseTag c) {
  switch (c) {
    case CaseTag::Case1: return "case_1";
    case CaseTag::Case2aElliptic: return "case_2a_elliptic";
    case CaseTag::Case2aHyperbolic: return "case_2a_hyperbolic";
    case CaseTag::Case2aConditional: return "case_2a_conditional";
    case CaseTag::Case2b: return "case_2b";
    case CaseTag::Case3: return "case_3";
    case CaseTag::IrrationalImpossible: return "irrational_impossible";
  }
  throw std::logic_error("unreachable");
}

inline std::string to_text(Relation r) {
  switch (r) {
    case Relation::DisjointAxisAxis: return "disjoint_axis_axis";
    case Relation::DisjointAxisTree: return "disjoint_axis_tree";
    case Relation::MeetingAxisAxis: return "meeting_axis_axis";
    case Relation::MeetingAxisTree: return "meeting_axis_tree";
  }
  throw std::logic_error("unreachable");
}

}  // namespace schottky::triples
