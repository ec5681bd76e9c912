// Exact number tower used throughout: arbitrary-precision integers and
// rationals (Boost.Multiprecision) plus quadratic irrationals a + b*sqrt(d).
// All comparisons and floors are exact; nothing here touches floating point.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace schottky::num {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct mixed_field_error : std::domain_error {
  explicit mixed_field_error(const std::string& what) : std::domain_error(what) {}
};

inline int sign_of(const Int& x) { return x.sign(); }
inline int sign_of(const Rat& x) { return x.sign(); }

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

// floor for rationals; cpp_int division truncates toward zero, so adjust
// negative non-exact quotients down by one.
inline Int floor_rat(const Rat& x) {
  Int n = rat_num(x), d = rat_den(x);
  Int q = n / d;
  if (n % d != 0 && n.sign() < 0) --q;
  return q;
}

inline Int isqrt(const Int& x) {
  if (x.sign() < 0) throw std::domain_error("isqrt: negative argument");
  return boost::multiprecision::sqrt(x);
}

inline bool is_square_free(const Int& d) {
  if (d <= 0) return false;
  Int n = d;
  for (Int k = 2; k * k <= n; ++k) {
    if (n % (k * k) == 0) return false;
    while (n % k == 0) n /= k;
  }
  return true;
}

// Quadratic irrational a + b*sqrt(d) with rational a, b and square-free d >= 2.
// d == 0 marks a purely rational value (b must be 0 then); it combines with any
// field, which lets plain integers/rationals participate in a sqrt(d) context.
class Quad {
 public:
  Quad() = default;
  Quad(Rat a) : a_(std::move(a)) {}  // rational embedding, d = 0
  Quad(Int a) : a_(Rat(std::move(a))) {}
  Quad(long long a) : a_(Rat(a)) {}
  Quad(Rat a, Rat b, Int d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
    if (b_.sign() == 0) {
      d_ = 0;
    } else {
      if (d_ < 2 || !is_square_free(d_))
        throw std::domain_error("Quad: d must be square-free and >= 2");
    }
  }

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  const Int& d() const { return d_; }
  bool is_rational() const { return b_.sign() == 0; }

  friend Int common_field(const Quad& x, const Quad& y) {
    if (x.d_ == 0) return y.d_;
    if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
    throw mixed_field_error("Quad: mixing sqrt(" + x.d_.str() + ") with sqrt(" +
                            y.d_.str() + ")");
  }

  friend Quad operator+(const Quad& x, const Quad& y) {
    Int d = common_field(x, y);
    return make(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  friend Quad operator-(const Quad& x, const Quad& y) {
    Int d = common_field(x, y);
    return make(x.a_ - y.a_, x.b_ - y.b_, d);
  }
  Quad operator-() const { return make(-a_, -b_, d_); }
  friend Quad operator*(const Quad& x, const Quad& y) {
    Int d = common_field(x, y);
    return make(x.a_ * y.a_ + x.b_ * y.b_ * Rat(d), x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  friend Quad operator/(const Quad& x, const Quad& y) {
    Int d = common_field(x, y);
    Rat n = y.a_ * y.a_ - y.b_ * y.b_ * Rat(d);
    if (n.sign() == 0) throw std::domain_error("Quad: division by zero");
    // 1/(a+b*sqrt(d)) = (a-b*sqrt(d))/(a^2-b^2 d)
    return x * make(y.a_ / n, -y.b_ / n, d);
  }

  friend bool operator==(const Quad& x, const Quad& y) {
    common_field(x, y);
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Quad& x, const Quad& y) { return !(x == y); }

  // Total order for use as a map key within one field.
  friend bool key_less(const Quad& x, const Quad& y) {
    if (x.a_ != y.a_) return x.a_ < y.a_;
    return x.b_ < y.b_;
  }

 private:
  static Quad make(Rat a, Rat b, Int d) {
    Quad q;
    q.a_ = std::move(a);
    q.b_ = std::move(b);
    q.d_ = q.b_.sign() == 0 ? Int(0) : std::move(d);
    return q;
  }

  Rat a_{0};
  Rat b_{0};
  Int d_{0};
};

// Exact sign by case analysis on the signs of a and b; the mixed case compares
// a^2 against b^2 d, which can never tie because sqrt(d) is irrational.
inline int sign_of(const Quad& x) {
  int sa = x.a().sign(), sb = x.b().sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  Rat lhs = x.a() * x.a();
  Rat rhs = x.b() * x.b() * Rat(x.d());
  if (lhs == rhs)
    throw std::logic_error("Quad: a^2 == b^2 d with square-free d");
  bool a_dominates = lhs > rhs;
  return sa > 0 ? (a_dominates ? 1 : -1) : (a_dominates ? -1 : 1);
}

inline bool operator<(const Quad& x, const Quad& y) { return sign_of(x - y) < 0; }
inline bool operator>(const Quad& x, const Quad& y) { return sign_of(x - y) > 0; }
inline bool operator<=(const Quad& x, const Quad& y) { return sign_of(x - y) <= 0; }
inline bool operator>=(const Quad& x, const Quad& y) { return sign_of(x - y) >= 0; }

// floor by integer bracketing: a coarse magnitude bound, then binary search
// with exact sign tests.
inline Int floor_quad(const Quad& x) {
  if (x.is_rational()) return floor_rat(x.a());
  Rat abs_a = x.a().sign() < 0 ? -x.a() : x.a();
  Rat abs_b = x.b().sign() < 0 ? -x.b() : x.b();
  Int hi = (floor_rat(abs_a) + 1) + (floor_rat(abs_b) + 1) * (isqrt(x.d()) + 1) + 1;
  Int lo = -hi;
  // invariant: lo <= floor(x) <= hi
  while (lo < hi) {
    Int mid = lo + (hi - lo + 1) / 2;
    if (sign_of(x - Quad(Rat(mid))) >= 0)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

inline Int floor_of(const Int& x) { return x; }
inline Int floor_of(const Rat& x) { return floor_rat(x); }
inline Int floor_of(const Quad& x) { return floor_quad(x); }

template <class L>
struct FloorDiv {
  Int q;
  L r;
};

// q = floor(x/y), r = x - q*y with 0 <= r < y.  Requires y > 0 and x >= 0.
inline FloorDiv<Int> floor_div(const Int& x, const Int& y) {
  if (y.sign() <= 0) throw std::domain_error("floor_div: divisor must be positive");
  if (x.sign() < 0) throw std::domain_error("floor_div: dividend must be >= 0");
  Int q = x / y;
  return {q, x - q * y};
}

inline FloorDiv<Rat> floor_div(const Rat& x, const Rat& y) {
  if (y.sign() <= 0) throw std::domain_error("floor_div: divisor must be positive");
  if (x.sign() < 0) throw std::domain_error("floor_div: dividend must be >= 0");
  Int q = floor_rat(x / y);
  return {q, x - Rat(q) * y};
}

inline FloorDiv<Quad> floor_div(const Quad& x, const Quad& y) {
  if (sign_of(y) <= 0) throw std::domain_error("floor_div: divisor must be positive");
  if (sign_of(x) < 0) throw std::domain_error("floor_div: dividend must be >= 0");
  Int q = floor_quad(x / y);
  return {q, x - y * Quad(Rat(q))};
}

// Greatest common measure: the largest g with x = p*g, y = q*g for positive
// integers p, q.  Engages exactly when x/y is rational.
inline std::optional<Int> gcd_commensurable(const Int& x, const Int& y) {
  if (x.sign() <= 0 || y.sign() <= 0)
    throw std::domain_error("gcd_commensurable: arguments must be positive");
  return boost::multiprecision::gcd(x, y);
}

inline std::optional<Rat> gcd_commensurable(const Rat& x, const Rat& y) {
  if (x.sign() <= 0 || y.sign() <= 0)
    throw std::domain_error("gcd_commensurable: arguments must be positive");
  Int g = boost::multiprecision::gcd(rat_num(x) * rat_den(y), rat_num(y) * rat_den(x));
  return Rat(g, rat_den(x) * rat_den(y));
}

inline std::optional<Quad> gcd_commensurable(const Quad& x, const Quad& y) {
  if (sign_of(x) <= 0 || sign_of(y) <= 0)
    throw std::domain_error("gcd_commensurable: arguments must be positive");
  Quad ratio = x / y;
  if (!ratio.is_rational()) return std::nullopt;
  Rat lambda = ratio.a();  // x = lambda*y with lambda = p/q reduced
  Rat q(rat_den(lambda));
  return y / Quad(q);
}

inline bool ratio_is_rational(const Int&, const Int&) { return true; }
inline bool ratio_is_rational(const Rat&, const Rat&) { return true; }
inline bool ratio_is_rational(const Quad& x, const Quad& y) {
  return (x / y).is_rational();
}

// Continued fraction expansion [a0; a1, a2, ...] of x > 0.  Rational input
// terminates; a quadratic irrational becomes eventually periodic, detected by
// repetition of the complete quotient.  `period` = (preperiod, cycle) means
// terms[1 + preperiod ...] repeats with the given cycle.  If max_terms runs
// out first, `truncated` is set and nothing else is claimed.
struct CfExpansion {
  std::vector<Int> terms;
  bool terminated = false;
  bool truncated = false;
  std::optional<std::pair<std::size_t, std::vector<Int>>> period;
};

inline CfExpansion cf_expand(const Rat& x, std::size_t max_terms = 64) {
  if (x.sign() <= 0) throw std::domain_error("cf_expand: x must be positive");
  CfExpansion out;
  Rat cur = x;
  while (out.terms.size() < max_terms) {
    Int a = floor_rat(cur);
    out.terms.push_back(a);
    Rat frac = cur - Rat(a);
    if (frac.sign() == 0) {
      out.terminated = true;
      return out;
    }
    cur = Rat(1) / frac;
  }
  out.truncated = true;
  return out;
}

inline CfExpansion cf_expand(const Int& x, std::size_t max_terms = 64) {
  return cf_expand(Rat(x), max_terms);
}

inline CfExpansion cf_expand(const Quad& x, std::size_t max_terms = 64) {
  if (sign_of(x) <= 0) throw std::domain_error("cf_expand: x must be positive");
  if (x.is_rational()) return cf_expand(x.a(), max_terms);
  CfExpansion out;
  auto cmp = [](const Quad& p, const Quad& q) { return key_less(p, q); };
  std::map<Quad, std::size_t, decltype(cmp)> seen(cmp);
  Quad cur = x;
  while (out.terms.size() < max_terms) {
    Int a = floor_quad(cur);
    out.terms.push_back(a);
    Quad frac = cur - Quad(Rat(a));
    if (sign_of(frac) == 0) {
      out.terminated = true;  // value was rational after all
      return out;
    }
    cur = Quad(Rat(1)) / frac;
    std::size_t next_index = out.terms.size();  // cur yields terms[next_index]
    auto it = seen.find(cur);
    if (it != seen.end()) {
      std::size_t first = it->second;
      std::vector<Int> cycle(out.terms.begin() + static_cast<std::ptrdiff_t>(first),
                             out.terms.end());
      out.period = std::make_pair(first - 1, std::move(cycle));
      return out;
    }
    seen.emplace(cur, next_index);
  }
  out.truncated = true;
  return out;
}

// Halved measures: thresholds of the form n/2 need exact halves, which the
// integer length type cannot hold; it widens to Rat.
template <class L>
struct half_type;
template <>
struct half_type<Int> {
  using type = Rat;
};
template <>
struct half_type<Rat> {
  using type = Rat;
};
template <>
struct half_type<Quad> {
  using type = Quad;
};
template <class L>
using half_t = typename half_type<L>::type;

inline Rat widen_measure(const Int& x) { return Rat(x); }
inline Rat widen_measure(const Rat& x) { return x; }
inline Quad widen_measure(const Quad& x) { return x; }

inline Rat half_of(const Int& x) { return Rat(x, 2); }
inline Rat half_of(const Rat& x) { return x / 2; }
inline Quad half_of(const Quad& x) { return x / Quad(Rat(2)); }

// ---- text form ----------------------------------------------------------
// Integers "12", rationals "7/3", quadratic numbers "a+b*sqrt(d)" with
// rational a, b; a parenthesized form "(a+b*sqrt(d))/n" is accepted on input.

inline std::string to_text(const Int& x) { return x.str(); }

inline std::string to_text(const Rat& x) {
  Int d = rat_den(x);
  if (d == 1) return rat_num(x).str();
  return rat_num(x).str() + "/" + d.str();
}

inline std::string to_text(const Quad& x) {
  if (x.is_rational()) return to_text(x.a());
  Rat b = x.b();
  std::string sep = "+";
  if (b.sign() < 0) {
    sep = "-";
    b = -b;
  }
  return to_text(x.a()) + sep + to_text(b) + "*sqrt(" + x.d().str() + ")";
}

namespace detail {
inline std::string strip_space(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}
}  // namespace detail

inline Int parse_int(const std::string& raw) {
  std::string s = detail::strip_space(raw);
  if (s.empty()) throw parse_error("empty integer literal");
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw parse_error("bad integer literal: " + raw);
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') throw parse_error("bad integer literal: " + raw);
  return Int(s);
}

inline Rat parse_rat(const std::string& raw) {
  std::string s = detail::strip_space(raw);
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den.sign() <= 0) throw parse_error("denominator must be positive: " + raw);
  return Rat(num, den);
}

// Accepts "a+b*sqrt(d)", "b*sqrt(d)", "(expr)/n", or a plain rational.  When
// d_context is given, the parsed d must agree (a plain rational adopts it).
inline Quad parse_quad(const std::string& raw,
                       std::optional<Int> d_context = std::nullopt) {
  std::string s = detail::strip_space(raw);
  if (s.empty()) throw parse_error("empty number literal");

  if (s.front() == '(') {
    std::size_t close = std::string::npos;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string::npos) throw parse_error("unbalanced '(': " + raw);
    Quad inner = parse_quad(s.substr(1, close - 1), d_context);
    std::string rest = s.substr(close + 1);
    if (rest.empty()) return inner;
    if (rest[0] != '/') throw parse_error("expected '/denominator': " + raw);
    Int den = parse_int(rest.substr(1));
    if (den.sign() <= 0) throw parse_error("denominator must be positive: " + raw);
    return inner / Quad(Rat(den));
  }

  auto star = s.find("*sqrt(");
  if (star == std::string::npos) {
    Rat a = parse_rat(s);
    return Quad(a);
  }
  if (s.back() != ')') throw parse_error("malformed sqrt term: " + raw);
  Int d = parse_int(s.substr(star + 6, s.size() - star - 7));
  if (d_context && *d_context != d)
    throw mixed_field_error("number uses sqrt(" + d.str() +
                            ") in a sqrt(" + d_context->str() + ") context");

  // b is the maximal unsigned rational run ending right before "*sqrt(".
  std::size_t bstart = star;
  while (bstart > 0) {
    char c = s[bstart - 1];
    if ((c >= '0' && c <= '9') || c == '/')
      --bstart;
    else
      break;
  }
  if (bstart == star) throw parse_error("missing coefficient before sqrt: " + raw);
  Rat b = parse_rat(s.substr(bstart, star - bstart));
  Rat a(0);
  if (bstart > 0) {
    char sgn = s[bstart - 1];
    if (sgn == '-') b = -b;
    else if (sgn != '+') throw parse_error("expected '+' or '-' before sqrt term: " + raw);
    if (bstart >= 2) a = parse_rat(s.substr(0, bstart - 1));
  }
  return Quad(a, b, d);
}

}  // namespace schottky::num
