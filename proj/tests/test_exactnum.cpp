#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "schottky/exactnum.hpp"

using namespace schottky::num;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

Big approx(const Rat& x) {
  return Big(rat_num(x)) / Big(rat_den(x));
}

Big approx(const Quad& x) {
  if (x.is_rational()) return approx(x.a());
  return approx(x.a()) + approx(x.b()) * sqrt(Big(x.d()));
}

Rat random_rat(std::mt19937_64& rng, int num_lim = 30, int den_lim = 30) {
  std::uniform_int_distribution<int> num(-num_lim, num_lim);
  std::uniform_int_distribution<int> den(1, den_lim);
  return Rat(num(rng), den(rng));
}

Quad random_quad(std::mt19937_64& rng) {
  static const int ds[] = {2, 3, 5, 7, 10};
  std::uniform_int_distribution<int> pick(0, 4);
  return Quad(random_rat(rng), random_rat(rng), ds[pick(rng)]);
}

Quad sqrt_of(int d) { return Quad(Rat(0), Rat(1), d); }

}  // namespace

TEST_CASE("cpp_rational keeps the reduced positive-denominator form") {
  Rat r(Int(-4), Int(6));
  CHECK(rat_num(r) == -2);
  CHECK(rat_den(r) == 3);
  CHECK(to_text(r) == "-2/3");
  CHECK(to_text(Rat(8, 4)) == "2");
  // arithmetic keeps the sign in the numerator
  Rat t = Rat(1) / Rat(-3);
  CHECK(rat_den(t) == 3);
  CHECK(rat_num(t) == -1);
}

TEST_CASE("Quad construction and validation") {
  CHECK_THROWS_AS(Quad(Rat(0), Rat(1), 4), std::domain_error);   // square
  CHECK_THROWS_AS(Quad(Rat(0), Rat(1), 12), std::domain_error);  // 4 | 12
  CHECK_THROWS_AS(Quad(Rat(0), Rat(1), 1), std::domain_error);
  CHECK(Quad(Rat(3), Rat(0), 4).is_rational());  // b = 0 ignores d
  CHECK(sqrt_of(2) * sqrt_of(2) == Quad(Rat(2)));
  CHECK_THROWS_AS(sqrt_of(2) + sqrt_of(3), mixed_field_error);
  CHECK(sqrt_of(5) + Quad(Rat(1)) == Quad(Rat(1), Rat(1), 5));
}

TEST_CASE("Quad exact sign agrees with 50-digit evaluation") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 10000; ++i) {
    Quad x = random_quad(rng);
    Big v = approx(x);
    if (abs(v) > Big("1e-30")) {
      CHECK(sign_of(x) == (v > 0 ? 1 : -1));
    } else {
      // coefficients this small force the exact value to be zero
      CHECK(x.a().sign() == 0);
      CHECK(x.b().sign() == 0);
      CHECK(sign_of(x) == 0);
    }
  }
}

TEST_CASE("Quad floor by bracketing") {
  CHECK(floor_quad(sqrt_of(2)) == 1);
  CHECK(floor_quad(-sqrt_of(2)) == -2);
  CHECK(floor_quad(Quad(Rat(1), Rat(1), 5) / Quad(Rat(2)))== 1);  // (1+sqrt5)/2
  CHECK(floor_quad(Quad(Rat(-7, 2))) == -4);
  std::mt19937_64 rng(77);
  for (int i = 0; i < 2000; ++i) {
    Quad x = random_quad(rng);
    Int f = floor_quad(x);
    CHECK(sign_of(x - Quad(Rat(f))) >= 0);
    CHECK(sign_of(x - Quad(Rat(f + 1))) < 0);
  }
}

TEST_CASE("floor_div worked values") {
  // floor_div(sqrt2, 1) = (1, sqrt2 - 1)
  auto [q1, r1] = floor_div(sqrt_of(2), Quad(Rat(1)));
  CHECK(q1 == 1);
  CHECK(r1 == sqrt_of(2) - Quad(Rat(1)));

  // floor_div(7/3, 2/3) = (3, 1/3)
  auto [q2, r2] = floor_div(Rat(7, 3), Rat(2, 3));
  CHECK(q2 == 3);
  CHECK(r2 == Rat(1, 3));

  // floor_div(3/2, 5/4) = (1, 1/4)
  auto [q3, r3] = floor_div(Rat(3, 2), Rat(5, 4));
  CHECK(q3 == 1);
  CHECK(r3 == Rat(1, 4));

  CHECK_THROWS_AS(floor_div(Rat(1), Rat(0)), std::domain_error);
  CHECK_THROWS_AS(floor_div(Rat(-1), Rat(2)), std::domain_error);
}

TEST_CASE("floor_div contract on random input") {
  std::mt19937_64 rng(1312);
  for (int i = 0; i < 2000; ++i) {
    Rat x = random_rat(rng);
    if (x.sign() < 0) x = -x;
    Rat y = random_rat(rng);
    if (y.sign() <= 0) y = Rat(1, 3) - y;
    auto [q, r] = floor_div(x, y);
    CHECK(x == Rat(q) * y + r);
    CHECK(r.sign() >= 0);
    CHECK(r < y);
  }
  for (int i = 0; i < 500; ++i) {
    Quad x = random_quad(rng);
    if (sign_of(x) < 0) x = -x;
    Int d = x.d() == 0 ? Int(2) : x.d();
    Quad y(random_rat(rng), random_rat(rng), d);
    if (sign_of(y) <= 0) y = Quad(Rat(1, 7)) - y;
    auto [q, r] = floor_div(x, y);
    CHECK(x == y * Quad(Rat(q)) + r);
    CHECK(sign_of(r) >= 0);
    CHECK(r < y);
  }
}

TEST_CASE("gcd_commensurable") {
  CHECK(*gcd_commensurable(Int(6), Int(4)) == 2);
  CHECK(*gcd_commensurable(Rat(3, 2), Rat(5, 4)) == Rat(1, 4));
  CHECK(*gcd_commensurable(sqrt_of(2), sqrt_of(2) * Quad(Rat(3))) == sqrt_of(2));
  CHECK(!gcd_commensurable(Quad(Rat(1)), sqrt_of(2)).has_value());

  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Rat x = random_rat(rng), y = random_rat(rng);
    if (x.sign() <= 0) x = Rat(1) - x;
    if (y.sign() <= 0) y = Rat(1) - y;
    Rat g = *gcd_commensurable(x, y);
    Rat p = x / g, q = y / g;
    CHECK(rat_den(p) == 1);
    CHECK(rat_den(q) == 1);
    CHECK(boost::multiprecision::gcd(rat_num(p), rat_num(q)) == 1);
  }
}

TEST_CASE("cf_expand of rationals matches the Euclid quotient list") {
  auto cf = cf_expand(Rat(5, 3));
  REQUIRE(cf.terminated);
  CHECK(cf.terms == std::vector<Int>{1, 1, 2});

  cf = cf_expand(Rat(10, 7));
  REQUIRE(cf.terminated);
  CHECK(cf.terms == std::vector<Int>{1, 2, 3});

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(1, 400);
  for (int i = 0; i < 1000; ++i) {
    Int p = pick(rng), q = pick(rng);
    auto e = cf_expand(Rat(p, q), 256);
    REQUIRE(e.terminated);
    // reference: plain integer Euclid on (p, q)
    std::vector<Int> quots;
    Int a = p, b = q;
    while (b != 0) {
      quots.push_back(a / b);
      Int r = a % b;
      a = b;
      b = r;
    }
    // canonical CF may differ in the final "1" only if the remainder hit zero
    // exactly; the direct quotient list is the canonical one here.
    CHECK(e.terms == quots);
  }
}

TEST_CASE("cf_expand of quadratic irrationals finds the period") {
  // sqrt(2) - 1 = [0; 2, 2, 2, ...]
  auto cf = cf_expand(sqrt_of(2) - Quad(Rat(1)));
  REQUIRE(cf.period.has_value());
  CHECK(cf.terms == std::vector<Int>{0, 2});
  CHECK(cf.period->first == 0);
  CHECK(cf.period->second == std::vector<Int>{2});

  // golden ratio = [1; 1, 1, ...]
  auto golden = (Quad(Rat(1)) + sqrt_of(5)) / Quad(Rat(2));
  cf = cf_expand(golden);
  REQUIRE(cf.period.has_value());
  CHECK(cf.terms == std::vector<Int>{1, 1});
  CHECK(cf.period->first == 0);
  CHECK(cf.period->second == std::vector<Int>{1});

  // sqrt(3) = [1; 1, 2, 1, 2, ...]
  cf = cf_expand(sqrt_of(3));
  REQUIRE(cf.period.has_value());
  CHECK(cf.terms == std::vector<Int>{1, 1, 2});
  CHECK(cf.period->first == 0);
  CHECK(cf.period->second == std::vector<Int>{1, 2});

  // sqrt(14) = [3; 1, 2, 1, 6, ...]
  cf = cf_expand(sqrt_of(14));
  REQUIRE(cf.period.has_value());
  CHECK(cf.period->second == std::vector<Int>{1, 2, 1, 6});

  // truncation is explicit, never silent
  auto t = cf_expand(sqrt_of(2), 1);
  CHECK(t.truncated);
  CHECK(!t.terminated);
  CHECK(!t.period.has_value());
}

TEST_CASE("cf period reconstructs the value") {
  // spot-check: the periodic tail of sqrt(7) = [2; 1,1,1,4, ...] repeats
  auto cf = cf_expand(sqrt_of(7), 64);
  REQUIRE(cf.period.has_value());
  CHECK(cf.period->second == std::vector<Int>{1, 1, 1, 4});
  // a truncation shorter than the detection point must agree with the
  // reconstruction from (preperiod, cycle)
  auto shorter = cf_expand(sqrt_of(7), 4);
  REQUIRE(shorter.truncated);
  const auto& [pre, cyc] = *cf.period;
  for (std::size_t i = 0; i < shorter.terms.size(); ++i) {
    Int expect = i < 1 + pre ? cf.terms[i]
                             : cyc[(i - 1 - pre) % cyc.size()];
    CHECK(shorter.terms[i] == expect);
  }
}

TEST_CASE("field algebra sampled") {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 1000; ++i) {
    Quad x = random_quad(rng), y = random_quad(rng), z = random_quad(rng);
    // constrain to one field
    y = Quad(y.a(), y.b().sign() == 0 ? Rat(0) : y.b(), x.d() == 0 ? 2 : x.d());
    z = Quad(z.a(), Rat(0), 0);
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK((x + y) + z == x + (y + z));
    CHECK(x * (y + z) == x * y + x * z);
    if (sign_of(y) != 0) CHECK((x / y) * y == x);
    // order respects arithmetic
    if (sign_of(z) > 0 && x < y) CHECK(x * z < y * z);
  }
}

TEST_CASE("number grammar round trip") {
  CHECK(to_text(parse_quad("1+1*sqrt(2)")) == "1+1*sqrt(2)");
  CHECK(to_text(parse_quad("0+1*sqrt(2)")) == "0+1*sqrt(2)");
  CHECK(to_text(parse_quad("3/2-5/4*sqrt(7)")) == "3/2-5/4*sqrt(7)");
  CHECK(to_text(parse_quad("-1/2+1/2*sqrt(5)")) == "-1/2+1/2*sqrt(5)");
  CHECK(parse_quad("(-1+1*sqrt(5))/2") == parse_quad("-1/2+1/2*sqrt(5)"));
  CHECK(parse_quad("1*sqrt(2)") == sqrt_of(2));
  CHECK(parse_quad("7/3").is_rational());
  CHECK(parse_rat("-6/4") == Rat(-3, 2));
  CHECK(parse_int("-17") == -17);

  CHECK_THROWS_AS(parse_quad("1+1*sqrt(2", std::nullopt), parse_error);
  CHECK_THROWS_AS(parse_quad("", std::nullopt), parse_error);
  CHECK_THROWS_AS(parse_rat("3/0"), parse_error);
  CHECK_THROWS_AS(parse_int("2x"), parse_error);
  CHECK_THROWS_AS(parse_quad("1+1*sqrt(3)", Int(2)), mixed_field_error);
  CHECK(parse_quad("5/3", Int(2)).is_rational());

  std::mt19937_64 rng(31337);
  for (int i = 0; i < 500; ++i) {
    Quad x = random_quad(rng);
    CHECK(parse_quad(to_text(x)) == x);
  }
}

TEST_CASE("halved measures widen exactly") {
  CHECK(half_of(Int(5)) == Rat(5, 2));
  CHECK(half_of(Rat(1, 3)) == Rat(1, 6));
  CHECK(half_of(sqrt_of(2)) * Quad(Rat(2)) == sqrt_of(2));
  CHECK(widen_measure(Int(7)) == Rat(7));
}
