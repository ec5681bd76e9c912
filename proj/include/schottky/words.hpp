// Freely reduced words in two generators, kept in exponent-run form so that
// high powers stay compact.  Reduction is eager: no operation ever returns an
// unreduced word.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schottky::words {

struct Run {
  int gen;            // 1 or 2
  long long exp;      // never 0
  friend bool operator==(const Run&, const Run&) = default;
};

class Word {
 public:
  Word() = default;

  static Word generator(int gen, long long exp = 1) {
    if (gen != 1 && gen != 2) throw std::domain_error("Word: generator must be 1 or 2");
    Word w;
    if (exp != 0) w.runs_.push_back({gen, exp});
    return w;
  }

  bool is_identity() const { return runs_.empty(); }
  const std::vector<Run>& runs() const { return runs_; }

  unsigned long long letter_length() const {
    unsigned long long n = 0;
    for (const Run& r : runs_) n += static_cast<unsigned long long>(r.exp < 0 ? -r.exp : r.exp);
    return n;
  }

  friend Word operator*(const Word& x, const Word& y) {
    Word out = x;
    for (const Run& r : y.runs_) out.append(r);
    return out;
  }

  Word inverse() const {
    Word out;
    out.runs_.reserve(runs_.size());
    for (auto it = runs_.rbegin(); it != runs_.rend(); ++it)
      out.runs_.push_back({it->gen, -it->exp});
    return out;
  }

  Word pow(long long n) const {
    if (n < 0) return inverse().pow(-n);
    if (runs_.size() == 1) {
      // single-run powers stay a single run
      return generator(runs_[0].gen, runs_[0].exp * n);
    }
    Word out;
    for (long long i = 0; i < n; ++i) out = out * *this;
    return out;
  }

  Word swapped_generators() const {
    Word out = *this;
    for (Run& r : out.runs_) r.gen = 3 - r.gen;
    return out;
  }

  friend bool operator==(const Word&, const Word&) = default;

  // "g1*g2^-3"; the identity prints as "1"
  std::string text() const {
    if (runs_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      if (i) out += "*";
      out += "g" + std::to_string(runs_[i].gen);
      if (runs_[i].exp != 1) out += "^" + std::to_string(runs_[i].exp);
    }
    return out;
  }

  static Word parse(const std::string& s) {
    Word out;
    if (s == "1" || s.empty()) return out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      auto next = s.find('*', pos);
      std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
      pos = next == std::string::npos ? s.size() : next + 1;
      if (tok.size() < 2 || tok[0] != 'g' || (tok[1] != '1' && tok[1] != '2'))
        throw std::domain_error("bad word token: " + tok);
      int gen = tok[1] - '0';
      long long exp = 1;
      if (tok.size() > 2) {
        if (tok[2] != '^') throw std::domain_error("bad word token: " + tok);
        try {
          std::size_t used = 0;
          exp = std::stoll(tok.substr(3), &used);
          if (used != tok.size() - 3) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw std::domain_error("bad word exponent: " + tok);
        }
      }
      out.append({gen, exp});
    }
    return out;
  }

 private:
  void append(Run r) {
    if (r.exp == 0) return;
    if (!runs_.empty() && runs_.back().gen == r.gen) {
      runs_.back().exp += r.exp;
      if (runs_.back().exp == 0) runs_.pop_back();
      return;
    }
    runs_.push_back(r);
  }

  std::vector<Run> runs_;
};

enum class NielsenMove { Invert1, Swap, Multiply, InverseMultiply };

inline std::pair<Word, Word> nielsen_apply(NielsenMove move,
                                           const std::pair<Word, Word>& p) {
  switch (move) {
    case NielsenMove::Invert1:
      return {p.first.inverse(), p.second};
    case NielsenMove::Swap:
      return {p.second, p.first};
    case NielsenMove::Multiply:
      return {p.first * p.second, p.second};
    case NielsenMove::InverseMultiply:
      return {p.first * p.second.inverse(), p.second};
  }
  throw std::logic_error("unreachable");
}

}  // namespace schottky::words
