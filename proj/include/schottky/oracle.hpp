// Independent verification of classifier verdicts.  A triple is realized as a
// concrete pair of tree automorphisms, the predicted certificate words are
// evaluated through that action, and everything the classification asserts
// (element types, translation lengths, contact measures, endpoints, freeness)
// is re-derived from evaluation alone.  Short-word surveys brute-force all
// freely reduced words up to a cutoff so a wrong free verdict would surface
// as an explicit elliptic witness.
#pragma once

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "schottky/action_pair.hpp"
#include "schottky/triple.hpp"

namespace schottky::oracle {

using num::Int;
using num::Rat;
using words::Word;

namespace detail {

inline long long to_ll(const Int& v) { return v.convert_to<long long>(); }

// letters 0 = g1, 1 = g1^-1, 2 = g2, 3 = g2^-1; the inverse flips the low bit
inline std::vector<int> inverse_seq(const std::vector<int>& seq) {
  std::vector<int> out(seq.rbegin(), seq.rend());
  for (int& x : out) x ^= 1;
  return out;
}

inline Word word_of_seq(const std::vector<int>& seq) {
  Word w;
  for (int x : seq) w = w * Word::generator(x / 2 + 1, x % 2 == 0 ? 1 : -1);
  return w;
}

}  // namespace detail

// all freely reduced nonempty words in two generators up to a length; with
// dedup_inverses only the lexicographically smaller of w, w^-1 is kept
inline std::vector<Word> enumerate_words(int max_len, bool dedup_inverses = true) {
  if (max_len < 0) throw std::domain_error("enumerate_words: negative length");
  std::vector<Word> out;
  std::vector<int> seq;
  auto emit = [&] {
    if (dedup_inverses) {
      auto inv = detail::inverse_seq(seq);
      if (inv < seq) return;
    }
    out.push_back(detail::word_of_seq(seq));
  };
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(seq.size()) == max_len) return;
    for (int x = 0; x < 4; ++x) {
      if (!seq.empty() && seq.back() == (x ^ 1)) continue;
      seq.push_back(x);
      emit();
      self(self);
      seq.pop_back();
    }
  };
  dfs(dfs);
  return out;
}

// every freely reduced word up to the cutoff, typed through the action; a
// free group of rank two leaves all three witness buckets empty
struct WordTypeSurvey {
  int max_len = 0;
  std::size_t checked = 0;
  std::vector<Word> elliptics;
  std::vector<Word> inversions;
  std::vector<Word> identities;  // act as the identity on the probe set

  bool clean() const {
    return elliptics.empty() && inversions.empty() && identities.empty();
  }
};

inline WordTypeSurvey survey_word_types(const trees::TreeAuto& a,
                                        const trees::TreeAuto& b, int max_len,
                                        std::size_t witness_cap = 8) {
  WordTypeSurvey rep;
  rep.max_len = max_len;
  const trees::TreeAuto base[4] = {a, a.inverse(), b, b.inverse()};
  const trees::Vertex probes[3] = {trees::Vertex(),
                                   trees::Vertex::parse("abab"),
                                   trees::Vertex::parse("caca")};
  std::vector<int> seq;
  std::vector<trees::TreeAuto> stack{trees::TreeAuto()};

  auto note = [&](std::vector<Word>& bucket) {
    if (bucket.size() < witness_cap) bucket.push_back(detail::word_of_seq(seq));
  };
  auto visit = [&] {
    auto inv = detail::inverse_seq(seq);
    if (inv < seq) return;  // the inverse has the same type
    ++rep.checked;
    const trees::TreeAuto& g = stack.back();
    trees::TypeReport t = type_of(g);
    if (t.type == trees::IsomType::Hyperbolic) return;
    if (t.type == trees::IsomType::Inversion) {
      note(rep.inversions);
      return;
    }
    bool ident = true;
    for (const auto& p : probes)
      if (g(p) != p) {
        ident = false;
        break;
      }
    note(ident ? rep.identities : rep.elliptics);
  };
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(seq.size()) == max_len) return;
    for (int x = 0; x < 4; ++x) {
      if (!seq.empty() && seq.back() == (x ^ 1)) continue;
      seq.push_back(x);
      stack.push_back(stack.back() * base[x]);
      visit();
      self(self);
      stack.pop_back();
      seq.pop_back();
    }
  };
  dfs(dfs);
  return rep;
}

struct SweepOptions {
  int survey_max_len = 6;
  long long window_slack = 16;
  bool run_survey = true;
  bool run_ping_pong = true;
};

// everything re-derived from the realized action for one triple
struct SweepReport {
  triples::Classification<Int> verdict;
  long long measured_l0 = -1;  // secondary overlap, when one was taken
  bool l0_exact = true;
  bool triple_ok = false;   // pair measurement returns the input triple
  bool types_ok = false;    // certificate words have the predicted types
  bool measure_ok = false;  // contact measure and endpoints agree
  bool ping_pong_ok = true;
  bool survey_ok = true;
  std::size_t words_surveyed = 0;
  std::string detail;  // first discrepancy

  bool ok() const {
    return triple_ok && types_ok && measure_ok && ping_pong_ok && survey_ok;
  }
};

inline SweepReport sweep_triple(long long l, long long m1, long long m2,
                                const trees::TwistSpec& spec = {},
                                const SweepOptions& opts = {}) {
  using trees::IsomType;
  using triples::CaseTag;
  SweepReport rep;
  auto fail = [&](const std::string& what) {
    if (rep.detail.empty()) rep.detail = what;
  };

  auto t = triples::make_triple(Int(l), Int(m1), Int(m2));
  auto cls = triples::classify(t);
  trees::ActionPair pair = trees::realize(l, m1, m2, spec);
  const long long R = l + m1 + m2 + opts.window_slack;

  // resolve an overlap-dependent verdict by measuring the overlap
  if (cls.tag == CaseTag::Case2aConditional) {
    trees::TreeAuto conj = apply_word(*cls.generator_a, pair.g1, pair.g2);
    trees::TreeAuto ww = apply_word(*cls.generator_b, pair.g1, pair.g2);
    Rat two_t = Rat(2) * *cls.l0_threshold;
    long long margin = detail::to_ll(boost::multiprecision::numerator(two_t));
    trees::OverlapMeasurement om = trees::measure_l0(ww, conj, margin + R);
    rep.measured_l0 = om.length;
    rep.l0_exact = om.exact;
    // a clipped run is still a sound lower bound and the window exceeds the
    // threshold, so the elliptic side of the comparison is unaffected
    cls = triples::classify(t, Int(om.length));
  }
  rep.verdict = cls;

  // the pair itself must measure back to the input triple
  trees::PairMeasurement meas = trees::measure_pair(pair, R);
  rep.triple_ok = meas.m1 == m1 && meas.m2 == m2;
  if (l >= 1) {
    rep.triple_ok = rep.triple_ok && meas.rel.meeting && meas.rel.exact &&
                    meas.rel.overlap == l && meas.rel.orientation_agreed &&
                    meas.rel.meet_lo == pair.v_minus &&
                    meas.rel.meet_hi == pair.v_plus;
  } else {
    rep.triple_ok = rep.triple_ok && !meas.rel.meeting && meas.rel.exact &&
                    meas.rel.bridge == pair.bridge;
  }
  if (!rep.triple_ok) fail("pair measurement does not return the input triple");

  trees::TreeAuto A = apply_word(*cls.generator_a, pair.g1, pair.g2);
  trees::TreeAuto B = apply_word(*cls.generator_b, pair.g1, pair.g2);
  trees::TypeReport ta = type_of(A);
  trees::TypeReport tb = type_of(B);

  rep.types_ok = ta.type == IsomType::Hyperbolic &&
                 Int(ta.translation_length) == *cls.m_a;
  if (!rep.types_ok) fail("certificate a is not hyperbolic of the stated length");
  if (cls.b_elliptic) {
    if (tb.type == IsomType::Hyperbolic) {
      rep.types_ok = false;
      fail("certificate b was predicted elliptic but translates");
    }
  } else {
    if (tb.type != IsomType::Hyperbolic || Int(tb.translation_length) != *cls.m_b) {
      rep.types_ok = false;
      fail("certificate b is not hyperbolic of the stated length");
    }
  }

  // contact measure, re-derived geometrically
  switch (cls.tag) {
    case CaseTag::Case1: {
      trees::AxisRelation rel = trees::axis_relation(A, B, R);
      rep.measure_ok = rel.exact && (!rel.meeting || rel.overlap == 0);
      if (!rep.measure_ok) fail("axes of a disjoint verdict share an edge");
      break;
    }
    case CaseTag::Case2aHyperbolic: {
      trees::AxisRelation rel = trees::axis_relation(A, B, R + rep.measured_l0);
      rep.measure_ok = rel.exact && !rel.meeting &&
                       Rat(rel.bridge) == *cls.measure;
      if (!rep.measure_ok) fail("axis distance disagrees with the stated measure");
      break;
    }
    case CaseTag::Case2aElliptic: {
      // distance from the a-axis to the fixed locus of b is half the minimal
      // displacement along the axis; parity decides elliptic against inversion
      Rat two_t = Rat(2) * *cls.measure;
      Int margin_i = boost::multiprecision::numerator(two_t);
      long long margin = detail::to_ll(margin_i);
      long long window = margin + R;
      trees::AxisWindow wa = trees::axis_window(A, -window, window);
      long long dmin = -1;
      long long arg = 0;
      for (long long i = -window; i <= window; ++i) {
        long long d = trees::distance(wa.at(i), B(wa.at(i)));
        if (dmin < 0 || d < dmin) {
          dmin = d;
          arg = i;
        }
      }
      bool interior = arg > -window && arg < window;
      bool parity_ok = margin % 2 == 0 ? tb.type == IsomType::Elliptic
                                       : tb.type == IsomType::Inversion;
      rep.measure_ok = interior && dmin == margin && parity_ok;
      if (!rep.measure_ok) fail("axis-to-fixed-locus distance disagrees");
      break;
    }
    case CaseTag::Case2b: {
      trees::AxisRelation rel = trees::axis_relation(A, B, R);
      rep.measure_ok = rel.exact && rel.meeting &&
                       Rat(rel.overlap) == *cls.measure &&
                       (rel.meet_lo == pair.v_plus || rel.meet_hi == pair.v_plus);
      if (!rep.measure_ok) fail("axis overlap or its endpoint disagrees");
      break;
    }
    case CaseTag::Case3: {
      // run of fixed vertices of b along the a-axis; a midpoint tree cannot
      // meet a line in more than a point, so a run of positive length means
      // b is a true elliptic
      if (tb.type != IsomType::Elliptic) {
        rep.measure_ok = false;
        fail("meeting axis-tree certificate is not a true elliptic");
        break;
      }
      long long window = R;
      trees::AxisWindow wa = trees::axis_window(A, -window, window);
      long long lo = 0, hi = -1;
      bool in_run = false, contiguous = true;
      for (long long i = -window; i <= window; ++i) {
        bool fixed = B(wa.at(i)) == wa.at(i);
        if (fixed && !in_run) {
          lo = i;
          hi = i;
          in_run = true;
        } else if (fixed && in_run) {
          if (hi != i - 1) contiguous = false;
          hi = i;
        }
      }
      bool interior = in_run && lo > -window && hi < window;
      rep.measure_ok = in_run && contiguous && interior &&
                       Rat(hi - lo) == *cls.measure &&
                       (wa.at(hi) == pair.v_plus || wa.at(lo) == pair.v_plus);
      if (!rep.measure_ok) fail("fixed run along the axis disagrees");
      break;
    }
    default:
      rep.measure_ok = false;
      fail("unexpected verdict tag after resolution");
  }

  if (triples::is_free_verdict(cls)) {
    if (opts.run_ping_pong) {
      trees::PingPongReport pp = trees::ping_pong_check(A, B, R + rep.measured_l0 + 8);
      rep.ping_pong_ok = pp.ok();
      if (!rep.ping_pong_ok) fail("ping pong failed: " + pp.failure);
    }
    if (opts.run_survey) {
      WordTypeSurvey sv =
          survey_word_types(pair.g1, pair.g2, opts.survey_max_len);
      rep.words_surveyed = sv.checked;
      rep.survey_ok = sv.clean();
      if (!rep.survey_ok) {
        std::string witness =
            !sv.identities.empty() ? sv.identities.front().text()
            : !sv.elliptics.empty() ? sv.elliptics.front().text()
                                    : sv.inversions.front().text();
        fail("free verdict contradicted by short word " + witness);
      }
    }
  }
  return rep;
}

inline unsigned thread_budget() {
  if (const char* env = std::getenv("SCHOTTKY_TREES_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

struct GridCell {
  long long l, m1, m2;
  long long target_l0;  // -1 runs the default branch choice
};

struct GridReport {
  std::size_t cells = 0, passed = 0, skipped_targets = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty() && passed + skipped_targets == cells; }
};

// every triple with m2 <= m1 <= max_m and l <= m1 + m2, checked against its
// realized action; overlap-dependent rows are re-run with branch twists
// steering the overlap to both sides of the threshold where reachable
inline GridReport cross_validate_grid(long long max_m,
                                      const SweepOptions& opts = {},
                                      unsigned threads = 0) {
  std::vector<GridCell> cells;
  for (long long m1 = 1; m1 <= max_m; ++m1)
    for (long long m2 = 1; m2 <= m1; ++m2)
      for (long long l = 0; l <= m1 + m2; ++l) {
        cells.push_back({l, m1, m2, -1});
        auto cls = triples::classify(
            triples::GeometricTriple<Int>{Int(l), Int(m1), Int(m2)});
        if (cls.tag == triples::CaseTag::Case2aConditional) {
          Rat two_t = Rat(2) * *cls.l0_threshold;
          long long margin =
              detail::to_ll(boost::multiprecision::numerator(two_t));
          long long ceil_t = (margin + 1) / 2;
          cells.push_back({l, m1, m2, ceil_t});  // elliptic side
          if (ceil_t - 1 >= 1) cells.push_back({l, m1, m2, ceil_t - 1});
          if (ceil_t > 1) cells.push_back({l, m1, m2, 1});
        }
      }

  GridReport rep;
  rep.cells = cells.size();
  std::vector<int> outcome(cells.size(), 0);  // 1 pass, 2 skip, 3 fail
  std::vector<std::string> details(cells.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      const GridCell& c = cells[i];
      try {
        trees::TwistSpec spec = c.target_l0 < 0
                                    ? trees::TwistSpec::defaults()
                                    : trees::TwistSpec::target(c.target_l0);
        SweepReport sr = sweep_triple(c.l, c.m1, c.m2, spec, opts);
        if (sr.ok()) {
          outcome[i] = 1;
        } else {
          outcome[i] = 3;
          details[i] = sr.detail;
        }
      } catch (const std::runtime_error& e) {
        if (c.target_l0 >= 0) {
          outcome[i] = 2;  // unreachable target, not a contradiction
        } else {
          outcome[i] = 3;
          details[i] = e.what();
        }
      }
    }
  };

  unsigned n = threads ? threads : thread_budget();
  n = std::min<unsigned>(n, cells.empty() ? 1 : cells.size());
  std::vector<std::thread> pool;
  for (unsigned k = 0; k + 1 < n; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (outcome[i] == 1) ++rep.passed;
    if (outcome[i] == 2) ++rep.skipped_targets;
    if (outcome[i] == 3) {
      std::ostringstream os;
      os << "(" << cells[i].l << "," << cells[i].m1 << "," << cells[i].m2 << ")";
      if (cells[i].target_l0 >= 0) os << " overlap " << cells[i].target_l0;
      os << ": " << details[i];
      if (rep.failures.size() < 32) rep.failures.push_back(os.str());
    }
  }
  return rep;
}

}  // namespace schottky::oracle
