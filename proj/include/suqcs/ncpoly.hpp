// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "basis.hpp"

namespace suqcs {

// Generator alphabet {a, b, a*, b*} and ladder alphabet {a±, b±, adjoints}.
enum class Letter : std::uint8_t {
  a, b, as, bs,
  ap, am, bp, bm, aps, ams, bps, bms
};

inline constexpr int kLetterCount = 12;

inline Letter adjoint(Letter l) {
  switch (l) {
    case Letter::a: return Letter::as;
    case Letter::b: return Letter::bs;
    case Letter::as: return Letter::a;
    case Letter::bs: return Letter::b;
    case Letter::ap: return Letter::aps;
    case Letter::am: return Letter::ams;
    case Letter::bp: return Letter::bps;
    case Letter::bm: return Letter::bms;
    case Letter::aps: return Letter::ap;
    case Letter::ams: return Letter::am;
    case Letter::bps: return Letter::bp;
    case Letter::bms: return Letter::bm;
  }
  return l;
}

inline bool is_generator_letter(Letter l) { return static_cast<int>(l) < 4; }

inline const char* letter_name(Letter l) {
  static const char* names[] = {"a", "b", "a*", "b*", "a+", "a-", "b+", "b-", "a+*", "a-*", "b+*", "b-*"};
  return names[static_cast<int>(l)];
}

using Word = std::vector<Letter>;

inline Word adjoint(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& l : r) l = adjoint(l);
  return r;
}

inline Word concat(const Word& x, const Word& y) {
  Word r;
  r.reserve(x.size() + y.size());
  r.insert(r.end(), x.begin(), x.end());
  r.insert(r.end(), y.begin(), y.end());
  return r;
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += ' ';
    s += letter_name(w[k]);
  }
  return s;
}

inline bool word_is_generator(const Word& w) {
  return std::all_of(w.begin(), w.end(), is_generator_letter);
}

inline bool word_is_ladder(const Word& w) {
  return std::none_of(w.begin(), w.end(), is_generator_letter);
}

// Noncommutative polynomial: sparse map word -> coefficient, zeros removed.
class NCPoly {
 public:
  using Terms = std::map<Word, cplx>;

  NCPoly() = default;
  explicit NCPoly(cplx c) { add_term({}, c); }
  NCPoly(Word w, cplx c = 1.0) { add_term(std::move(w), c); }
  static NCPoly letter(Letter l) { return NCPoly(Word{l}); }
  static NCPoly one() { return NCPoly(cplx(1.0)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  cplx coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  // Coefficient of the empty word.
  cplx constant() const { return coeff({}); }

  std::size_t max_length() const {
    std::size_t L = 0;
    for (const auto& [w, c] : terms_) L = std::max(L, w.size());
    return L;
  }

  void add_term(Word w, cplx c) {
    if (c == cplx(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx(0.0)) terms_.erase(it);
    }
  }

  NCPoly& operator+=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NCPoly& operator-=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NCPoly& operator*=(cplx s) {
    if (s == cplx(0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend NCPoly operator+(NCPoly x, const NCPoly& y) { return x += y; }
  friend NCPoly operator-(NCPoly x, const NCPoly& y) { return x -= y; }
  friend NCPoly operator-(NCPoly x) { return x *= -1.0; }
  friend NCPoly operator*(NCPoly x, cplx s) { return x *= s; }
  friend NCPoly operator*(cplx s, NCPoly x) { return x *= s; }

  friend NCPoly operator*(const NCPoly& x, const NCPoly& y) {
    NCPoly r;
    for (const auto& [u, a] : x.terms_)
      for (const auto& [v, b] : y.terms_) r.add_term(concat(u, v), a * b);
    return r;
  }

  NCPoly adjoint() const {
    NCPoly r;
    for (const auto& [w, c] : terms_) r.add_term(suqcs::adjoint(w), std::conj(c));
    return r;
  }

  // Drop coefficients below tol in absolute value.
  NCPoly pruned(double tol) const {
    NCPoly r;
    for (const auto& [w, c] : terms_)
      if (std::abs(c) > tol) r.terms_.emplace(w, c);
    return r;
  }

  template <class F>
  NCPoly map_words(F&& f) const {
    NCPoly r;
    for (const auto& [w, c] : terms_) r += f(w) * c;
    return r;
  }

  friend bool operator==(const NCPoly&, const NCPoly&) = default;

 private:
  Terms terms_;
};

inline std::string to_string(const NCPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) s += " + ";
    first = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
    s += buf;
    s += "*";
    s += to_string(w);
  }
  return s;
}

// Rewrite a and b as a+ + a- and b+ + b- so the result is over the ladder alphabet.
inline NCPoly to_ladder(const NCPoly& x) {
  return x.map_words([](const Word& w) {
    NCPoly r = NCPoly::one();
    for (Letter l : w) {
      NCPoly f;
      switch (l) {
        case Letter::a: f = NCPoly::letter(Letter::ap) + NCPoly::letter(Letter::am); break;
        case Letter::b: f = NCPoly::letter(Letter::bp) + NCPoly::letter(Letter::bm); break;
        case Letter::as: f = NCPoly::letter(Letter::aps) + NCPoly::letter(Letter::ams); break;
        case Letter::bs: f = NCPoly::letter(Letter::bps) + NCPoly::letter(Letter::bms); break;
        default: f = NCPoly::letter(l);
      }
      r = r * f;
    }
    return r;
  });
}

inline NCPoly pow(const NCPoly& x, int n) {
  NCPoly r = NCPoly::one();
  for (int k = 0; k < n; ++k) r = r * x;
  return r;
}

inline NCPoly commutator(const NCPoly& x, const NCPoly& y) { return x * y - y * x; }

// alpha^k for k >= 0, alpha*^{|k|} for k < 0
inline Word alpha_power(int k) {
  return Word(static_cast<std::size_t>(std::abs(k)), k >= 0 ? Letter::a : Letter::as);
}

}  // namespace suqcs
