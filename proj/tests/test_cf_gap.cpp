#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "schottky/cf_gap.hpp"

using namespace schottky;
using namespace schottky::gaps;
using num::Int;
using num::Quad;
using num::Rat;

namespace {

const Quad kGolden(Rat(-1, 2), Rat(1, 2), 5);   // (sqrt5 - 1)/2
const Quad kSqrt2m1(Rat(-1), Rat(1), 2);        // sqrt2 - 1
const Quad kSqrt3m1(Rat(-1), Rat(1), 3);        // sqrt3 - 1

// independent recomputation: sort the first n+1 points and diff them
template <class L>
std::vector<L> gaps_from_scratch(const L& alpha, unsigned long long n) {
  std::set<L> pts;
  L cur(0);
  pts.insert(cur);
  for (unsigned long long i = 0; i < n; ++i) {
    cur = cur + alpha;
    if (!(cur < L(1))) cur = cur - L(1);
    pts.insert(cur);
  }
  std::vector<L> sorted(pts.begin(), pts.end());
  std::set<L> gaps;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    gaps.insert(sorted[i + 1] - sorted[i]);
  gaps.insert(sorted.front() - sorted.back() + L(1));
  return {gaps.begin(), gaps.end()};
}

}  // namespace

TEST_CASE("gauss orbit of a rational terminates with the division quotients") {
  auto orbit = alpha_orbit(Rat(2, 5), 16);
  CHECK(orbit.terminated);
  REQUIRE(orbit.levels() == 2);
  CHECK(orbit.alpha == std::vector<Rat>{Rat(2, 5), Rat(1, 2)});
  CHECK(orbit.q == std::vector<Int>{2, 2});

  auto trace = triples::euclid_sequences(Int(5), Int(2));
  REQUIRE(orbit.q.size() == trace.q.size());
  for (std::size_t i = 0; i < orbit.q.size(); ++i) CHECK(orbit.q[i] == trace.q[i]);
}

TEST_CASE("gauss orbit fixed points and cycles of the quadratic examples") {
  auto gold = alpha_orbit(kGolden, 6);
  CHECK_FALSE(gold.terminated);
  REQUIRE(gold.levels() == 6);
  for (std::size_t j = 1; j <= 6; ++j) {
    CHECK(gold.q_(j) == 1);
    CHECK(gold.alpha_(j) == kGolden);
  }

  auto s2 = alpha_orbit(kSqrt2m1, 5);
  for (std::size_t j = 1; j <= 5; ++j) {
    CHECK(s2.q_(j) == 2);
    CHECK(s2.alpha_(j) == kSqrt2m1);
  }

  auto s3 = alpha_orbit(kSqrt3m1, 6);
  for (std::size_t j = 1; j <= 6; ++j) {
    if (j % 2 == 1) {
      CHECK(s3.q_(j) == 1);
      CHECK(s3.alpha_(j) == kSqrt3m1);
    } else {
      CHECK(s3.q_(j) == 2);
      CHECK(s3.alpha_(j) == kSqrt3m1 / Quad(2));
    }
  }
}

TEST_CASE("gauss orbit input validation") {
  CHECK_THROWS_AS(alpha_orbit(Rat(3, 2), 4), std::domain_error);
  CHECK_THROWS_AS(alpha_orbit(Rat(0), 4), std::domain_error);
  CHECK_THROWS_AS(alpha_orbit(Rat(1), 4), std::domain_error);
}

TEST_CASE("formula set of a rational rotation") {
  auto orbit = alpha_orbit(Rat(2, 5), 16);
  auto vals = gap_formula_set(orbit, Rat(0));
  CHECK(vals == std::vector<Rat>{Rat(1, 5), Rat(2, 5), Rat(3, 5), Rat(1)});
}

TEST_CASE("formula set of the golden rotation is the powers") {
  auto orbit = alpha_orbit(kGolden, 8);
  Quad a3 = kGolden * kGolden * kGolden;
  auto vals = gap_formula_set(orbit, a3);
  REQUIRE(vals.size() == 4);
  CHECK(vals[0] == a3);
  CHECK(vals[1] == kGolden * kGolden);
  CHECK(vals[2] == kGolden);
  CHECK(vals[3] == Quad(1));
  CHECK_THROWS_AS(gap_formula_set(orbit, Quad(0)), std::domain_error);
}

TEST_CASE("formula membership is decided exactly") {
  Quad a5 = kGolden * kGolden * kGolden * kGolden * kGolden;
  CHECK(formula_contains(kGolden, a5));
  CHECK_FALSE(formula_contains(kGolden, a5 + Quad(Rat(1, 1000))));
  CHECK(formula_contains(kGolden, Quad(1)));
  CHECK_FALSE(formula_contains(kGolden, Quad(2)));
  CHECK(formula_contains(Rat(2, 5), Rat(3, 5)));
  CHECK(formula_contains(Rat(2, 5), Rat(1, 5)));
  CHECK_FALSE(formula_contains(Rat(2, 5), Rat(1, 2)));
  CHECK_FALSE(formula_contains(Rat(2, 5), Rat(1, 10)));
  // sqrt2 - 1: level j carries (sqrt2-1)^{j-1} and (2-sqrt2)*(sqrt2-1)^{j-1}
  CHECK(formula_contains(kSqrt2m1, (Quad(2) - Quad(Rat(0), Rat(1), 2)) * kSqrt2m1));
  CHECK_THROWS_AS(formula_contains(kGolden, Quad(Rat(1, 100)), 3), trace_exhausted);
}

TEST_CASE("scan of a rational rotation saturates") {
  ThreeGapScan<Rat> scan(Rat(2, 5));
  CHECK(scan.gaps() == std::vector<Rat>{Rat(1)});
  REQUIRE(scan.advance());
  CHECK(scan.gaps() == std::vector<Rat>{Rat(2, 5), Rat(3, 5)});
  REQUIRE(scan.advance());
  CHECK(scan.gaps() == std::vector<Rat>{Rat(1, 5), Rat(2, 5)});
  REQUIRE(scan.advance());
  CHECK(scan.gaps() == std::vector<Rat>{Rat(1, 5), Rat(2, 5)});
  REQUIRE(scan.advance());
  CHECK(scan.gaps() == std::vector<Rat>{Rat(1, 5)});
  CHECK_FALSE(scan.advance());  // period 5 reached, nothing new
  CHECK(scan.point_count() == 5);
}

TEST_CASE("incremental scan matches recomputation from scratch") {
  std::mt19937_64 rng(46);
  for (int it = 0; it < 40; ++it) {
    unsigned long long den = 7 + rng() % 50;
    unsigned long long nmr = 1 + rng() % (den - 1);
    Rat alpha{Int(nmr), Int(den)};
    ThreeGapScan<Rat> scan(alpha);
    for (unsigned long long n = 1; n <= 60; ++n) {
      scan.advance();
      CHECK(scan.gaps() == gaps_from_scratch(alpha, n));
      CHECK(scan.distinct_gaps() <= 3);
      Rat total(0);
      std::size_t cnt = 0;
      for (const auto& [len, c] : scan.gap_multiset()) {
        total += len * c;
        cnt += static_cast<std::size_t>(c);
      }
      CHECK(total == 1);
      CHECK(cnt == scan.point_count());
    }
  }
  for (const Quad& alpha : {kGolden, kSqrt2m1, kSqrt3m1}) {
    ThreeGapScan<Quad> scan(alpha);
    for (unsigned long long n = 1; n <= 40; ++n) {
      scan.advance();
      CHECK(scan.distinct_gaps() <= 3);
    }
    CHECK(scan.gaps() == gaps_from_scratch(alpha, 40));
    CHECK(three_gap_bruteforce(alpha, 40) == scan.gaps());
  }
}

TEST_CASE("correspondence holds for small integer pairs") {
  auto rep = verify_correspondence(Rat(5), Rat(2), 8, 60);
  CHECK(rep.ok());
  CHECK(rep.levels == 2);
  CHECK(rep.max_distinct_gaps <= 3);

  auto fib = verify_correspondence(Rat(13), Rat(8), 8, 120);
  CHECK(fib.ok());

  CHECK_THROWS_AS(verify_correspondence(Rat(4), Rat(4)), std::domain_error);
}

TEST_CASE("correspondence holds for quadratic pairs") {
  Quad r2(Rat(0), Rat(1), 2);
  auto rep = verify_correspondence(Quad(1) + r2, Quad(1), 6, 120);
  CHECK(rep.ok());

  Quad phi(Rat(1, 2), Rat(1, 2), 5);
  auto gold = verify_correspondence(phi, Quad(1), 6, 120);
  CHECK(gold.ok());
}

TEST_CASE("correspondence holds for random coprime pairs") {
  std::mt19937_64 rng(47);
  int done = 0;
  while (done < 25) {
    Int m2 = Int(1 + rng() % 59);
    Int m1 = m2 + Int(1 + rng() % 59);
    if (boost::multiprecision::gcd(m1, m2) != 1) continue;
    auto rep = verify_correspondence(Rat(m1), Rat(m2), 8, 120);
    CHECK(rep.ok());
    ++done;
  }
}
