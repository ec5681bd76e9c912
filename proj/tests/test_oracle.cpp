#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "schottky/oracle.hpp"

using namespace schottky;
using namespace schottky::oracle;
using schottky::words::Word;

TEST_CASE("word enumeration counts and free reduction") {
  // 4 * 3^(k-1) freely reduced words of length exactly k
  auto all3 = enumerate_words(3, false);
  CHECK(all3.size() == 4 + 12 + 36);
  auto half3 = enumerate_words(3, true);
  CHECK(half3.size() == 2 + 6 + 18);

  std::set<std::string> seen;
  for (const Word& w : all3) {
    CHECK_FALSE(w.is_identity());
    CHECK(w.letter_length() <= 3);
    CHECK(seen.insert(w.text()).second);  // pairwise distinct
  }
  // with inverse dedup, w and w^-1 never both appear
  std::set<std::string> texts;
  for (const Word& w : half3) texts.insert(w.text());
  for (const Word& w : half3) CHECK(texts.count(w.inverse().text()) == 0);
}

TEST_CASE("short word survey is clean over a free action") {
  trees::ActionPair pair = trees::realize(3, 5, 2);
  WordTypeSurvey sv = survey_word_types(pair.g1, pair.g2, 6);
  CHECK(sv.checked == 2 + 6 + 18 + 54 + 162 + 486);
  CHECK(sv.clean());
}

TEST_CASE("short word survey exposes the torsion of (1,1,1)") {
  trees::ActionPair pair = trees::realize(1, 1, 1);
  WordTypeSurvey sv = survey_word_types(pair.g1, pair.g2, 6);
  CHECK_FALSE(sv.clean());
  REQUIRE_FALSE(sv.elliptics.empty());
  // every recorded witness really has the reported type
  for (const Word& w : sv.elliptics) {
    trees::TreeAuto g = apply_word(w, pair.g1, pair.g2);
    CHECK(type_of(g).type == trees::IsomType::Elliptic);
  }
  for (const Word& w : sv.inversions) {
    trees::TreeAuto g = apply_word(w, pair.g1, pair.g2);
    CHECK(type_of(g).type == trees::IsomType::Inversion);
  }

  // the rotation has order three at its center
  trees::TreeAuto h = apply_word(Word::parse("g1*g2^-1*g1*g2^-1*g1*g2^-1"),
                                 pair.g1, pair.g2);
  CHECK(h(trees::Vertex()) == trees::Vertex());
  CHECK(h(trees::Vertex::parse("a")) == trees::Vertex::parse("a"));
}

TEST_CASE("sweep confirms a strict meeting verdict") {
  SweepReport rep = sweep_triple(3, 5, 2);
  CHECK(rep.ok());
  CHECK(rep.verdict.tag == triples::CaseTag::Case2b);
  CHECK(rep.measured_l0 == -1);  // no secondary overlap involved
  CHECK(rep.words_surveyed > 0);
}

TEST_CASE("sweep confirms disjoint-axis verdicts") {
  SweepReport rep = sweep_triple(0, 4, 3);
  CHECK(rep.ok());
  CHECK(rep.verdict.tag == triples::CaseTag::Case1);

  // generator labels survive the internal normalization swap
  SweepReport swapped = sweep_triple(0, 2, 5);
  CHECK(swapped.ok());
  CHECK(swapped.verdict.tag == triples::CaseTag::Case1);
  CHECK(*swapped.verdict.m_a == num::Int(5));
}

TEST_CASE("a triple reducing to the disjoint terminal is still overlap bound") {
  // (2,3,1) drains l to zero exactly, which is the delicate configuration:
  // margin 1 forces the elliptic side, through an inversion
  SweepReport red = sweep_triple(2, 3, 1);
  CHECK(red.ok());
  CHECK(red.verdict.tag == triples::CaseTag::Case2aElliptic);
  CHECK(*red.verdict.measure == num::Rat(1, 2));
}

TEST_CASE("sweep confirms meeting axis-tree verdicts") {
  SweepReport rep = sweep_triple(3, 2, 2);
  CHECK(rep.ok());
  CHECK(rep.verdict.tag == triples::CaseTag::Case3);
  CHECK(rep.verdict.b_elliptic);

  SweepReport deep = sweep_triple(5, 2, 2);
  CHECK(deep.ok());
  CHECK(deep.verdict.tag == triples::CaseTag::Case3);
  CHECK(*deep.verdict.measure == num::Rat(3));
}

TEST_CASE("sweep resolves overlap-dependent rows through the action") {
  // with the default branch choice the secondary overlap at (2,6,2) is
  // unbounded, which lands on the elliptic side of the threshold
  SweepReport def = sweep_triple(2, 6, 2);
  CHECK(def.ok());
  CHECK(def.verdict.tag == triples::CaseTag::Case2aElliptic);
  CHECK_FALSE(def.l0_exact);
  CHECK(def.measured_l0 > 4);

  // steering the overlap to one edge lands on the free side
  SweepReport one = sweep_triple(2, 6, 2, trees::TwistSpec::target(1));
  CHECK(one.ok());
  CHECK(one.verdict.tag == triples::CaseTag::Case2aHyperbolic);
  CHECK(one.measured_l0 == 1);
  CHECK(one.l0_exact);
  CHECK(*one.verdict.m_b == num::Int(2));

  // at the threshold itself the verdict flips back
  SweepReport two = sweep_triple(2, 6, 2, trees::TwistSpec::target(2));
  CHECK(two.ok());
  CHECK(two.verdict.tag == triples::CaseTag::Case2aElliptic);
  CHECK(two.measured_l0 == 2);
}

TEST_CASE("sweep handles a half-integral threshold through an inversion") {
  // margin 1 at (2,3,2): the overlap is always at least one, the verdict is
  // elliptic with measure 1/2, and parity makes the certificate an inversion
  SweepReport rep = sweep_triple(2, 3, 2);
  CHECK(rep.ok());
  CHECK(rep.verdict.tag == triples::CaseTag::Case2aElliptic);
  CHECK(*rep.verdict.measure == num::Rat(1, 2));

  SweepReport wide = sweep_triple(2, 7, 2, trees::TwistSpec::target(1));
  CHECK(wide.ok());
  CHECK(wide.verdict.tag == triples::CaseTag::Case2aHyperbolic);
  CHECK(*wide.verdict.m_b == num::Int(3));
}

TEST_CASE("sweep confirms a forced boundary elliptic") {
  SweepReport rep = sweep_triple(7, 5, 3);
  CHECK(rep.ok());
  CHECK(rep.verdict.tag == triples::CaseTag::Case2aElliptic);
  CHECK(*rep.verdict.measure == num::Rat(0));
  CHECK(rep.verdict.b_elliptic);
}

TEST_CASE("grid cross validation stays contradiction free") {
  SweepOptions opts;
  opts.survey_max_len = 5;
  GridReport rep = cross_validate_grid(3, opts);
  INFO((rep.failures.empty() ? std::string("no failures")
                             : rep.failures.front()));
  CHECK(rep.ok());
  CHECK(rep.passed >= 30);
  CHECK(rep.cells == rep.passed + rep.skipped_targets);
}

TEST_CASE("thread budget is sane") { CHECK(thread_budget() >= 1); }
