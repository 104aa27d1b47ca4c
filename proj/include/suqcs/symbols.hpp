// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <stdexcept>

#include "forms.hpp"
#include "fourier.hpp"
#include <nlohmann/json.hpp>
#include "ncpoly.hpp"
#include "shift_op.hpp"

namespace suqcs {

// Power of u carried by a letter under the symbol map, or nullopt if the letter is killed.
inline std::optional<int> symbol_power(Letter l) {
  switch (l) {
    case Letter::a: case Letter::am: return 1;
    case Letter::as: case Letter::ams: return -1;
    default: return std::nullopt;
  }
}

// sigma of a single word is 0 or u^k.
inline std::optional<int> sigma_word(const Word& w) {
  int k = 0;
  for (Letter l : w) {
    auto p = symbol_power(l);
    if (!p) return std::nullopt;
    k += *p;
  }
  return k;
}

inline FourierPoly sigma_q(const NCPoly& x) {
  FourierPoly f;
  for (const auto& [w, c] : x.terms())
    if (auto k = sigma_word(w)) f.add(*k, c);
  return f;
}

// Symbol of a matrix: N x N Fourier polynomials.
struct FourierMatrix {
  int N = 1;
  std::vector<FourierPoly> e;
  explicit FourierMatrix(int n = 1) : N(n), e(static_cast<std::size_t>(n) * n) {}
  FourierPoly& operator()(int r, int c) { return e[static_cast<std::size_t>(r) * N + c]; }
  const FourierPoly& operator()(int r, int c) const { return e[static_cast<std::size_t>(r) * N + c]; }
  friend FourierMatrix operator*(const FourierMatrix& x, const FourierMatrix& y) {
    FourierMatrix r(x.N);
    for (int a = 0; a < x.N; ++a)
      for (int b = 0; b < x.N; ++b)
        for (int c = 0; c < x.N; ++c) r(a, b) += x(a, c) * y(c, b);
    return r;
  }
  friend FourierMatrix operator+(FourierMatrix x, const FourierMatrix& y) {
    for (std::size_t k = 0; k < x.e.size(); ++k) x.e[k] += y.e[k];
    return x;
  }
  FourierPoly trace() const {
    FourierPoly s;
    for (int a = 0; a < N; ++a) s += (*this)(a, a);
    return s;
  }
  friend bool operator==(const FourierMatrix&, const FourierMatrix&) = default;
};

inline FourierMatrix sigma_q(const NCMatrix& x) {
  FourierMatrix r(x.N);
  for (std::size_t k = 0; k < x.e.size(); ++k) r.e[k] = sigma_q(x.e[k]);
  return r;
}

// del-grading: del = del_beta - del_alpha with del_alpha(a) = a.
inline int del_degree(Letter l) {
  switch (l) {
    case Letter::a: case Letter::ap: case Letter::am: return -1;
    case Letter::as: case Letter::aps: case Letter::ams: return 1;
    case Letter::b: case Letter::bp: case Letter::bm: return 1;
    case Letter::bs: case Letter::bps: case Letter::bms: return -1;
  }
  return 0;
}

inline int del_degree(const Word& w) {
  int d = 0;
  for (Letter l : w) d += del_degree(l);
  return d;
}

enum class Grading { gamma, del };

struct GradedWord {
  Word word;
  int gamma_degree = 0;  // only meaningful on the ladder alphabet
  int del_degree = 0;

  static GradedWord of(const Word& w) {
    GradedWord g{w, 0, suqcs::del_degree(w)};
    if (word_is_ladder(w)) g.gamma_degree = suqcs::gamma_degree(w);
    return g;
  }
};

inline NCPoly degree0(const NCPoly& x, Grading g) {
  NCPoly r;
  for (const auto& [w, c] : x.terms()) {
    const int d = g == Grading::gamma ? gamma_degree(w) : del_degree(w);
    if (d == 0) r.add_term(w, c);
  }
  return r;
}

inline NCPoly del_derivative(const NCPoly& x) {
  NCPoly r;
  for (const auto& [w, c] : x.terms()) r.add_term(w, c * static_cast<double>(del_degree(w)));
  return r;
}

// delta(x) = [|D|, x] on the ladder alphabet: gamma_degree(w) * w.
inline NCPoly delta_symbolic(const NCPoly& x) {
  const NCPoly y = to_ladder(x);
  NCPoly r;
  for (const auto& [w, c] : y.terms()) r.add_term(w, c * static_cast<double>(gamma_degree(w)));
  return r;
}

inline NCPoly lift(const FourierPoly& f) {
  NCPoly r;
  for (const auto& [k, c] : f.coeffs()) r.add_term(alpha_power(k), c);
  return r;
}

struct Decomposition {
  MatForm A1, A2;
};

// A_1 = sum lift(sigma(a)) d lift(sigma(b)) taken tuple-wise; A_2 = A - A_1.
inline Decomposition decompose(const MatForm& A) {
  if (A.degree() != 1) throw std::invalid_argument("decompose: degree-1 form expected");
  MatForm A1(1, A.N());
  for (const auto& [t, c] : A.terms()) {
    auto k0 = sigma_word(t[0].w);
    auto k1 = sigma_word(t[1].w);
    if (!k0 || !k1) continue;
    A1.add({Elem{t[0].r, t[0].c, alpha_power(*k0)}, Elem{t[1].r, t[1].c, alpha_power(*k1)}}, c);
  }
  return {A1, A - A1};
}

// Signed power if w is a^k or a*^k (k >= 0), else nullopt.
inline std::optional<int> pure_alpha_power(const Word& w) {
  if (w.empty()) return 0;
  const Letter l = w[0];
  if (l != Letter::a && l != Letter::as) return std::nullopt;
  for (Letter x : w)
    if (x != l) return std::nullopt;
  return l == Letter::a ? static_cast<int>(w.size()) : -static_cast<int>(w.size());
}

struct ActionCoefficients {
  std::map<std::pair<int, int>, cplx> re, im;
  int K = 0;

  static void bump(std::map<std::pair<int, int>, cplx>& m, int k, int l, cplx v) {
    if (v == cplx(0.0)) return;
    auto& x = m[{k, l}];
    x += v;
    if (x == cplx(0.0)) m.erase({k, l});
  }
  cplx Re(int k, int l) const {
    auto it = re.find({k, l});
    return it == re.end() ? cplx(0.0) : it->second;
  }
  cplx Im(int k, int l) const {
    auto it = im.find({k, l});
    return it == im.end() ? cplx(0.0) : it->second;
  }
  int support_cutoff() const {
    int k = 0;
    for (const auto& m : {re, im})
      for (const auto& [kl, v] : m) k = std::max({k, std::abs(kl.first), std::abs(kl.second)});
    return k;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"K", K}, {"re", nlohmann::json::array()}, {"im", nlohmann::json::array()}};
    for (const auto& [kl, v] : re) j["re"].push_back({kl.first, kl.second, v.real(), v.imag()});
    for (const auto& [kl, v] : im) j["im"].push_back({kl.first, kl.second, v.real(), v.imag()});
    return j;
  }
  static ActionCoefficients from_json(const nlohmann::json& j) {
    ActionCoefficients c;
    c.K = j.at("K").get<int>();
    for (const char* key : {"re", "im"})
      for (const auto& x : j.at(key)) {
        const int k = x.at(0).get<int>(), l = x.at(1).get<int>();
        if (std::abs(k) > c.K || std::abs(l) > c.K) throw std::invalid_argument("coefficient outside cutoff K");
        bump(std::string(key) == "re" ? c.re : c.im, k, l, cplx(x.at(2).get<double>(), x.at(3).get<double>()));
      }
    return c;
  }
};

// Re_{kl} = 1/2 sum_i Tr(lam_{-k} mu_l + mu*_{-l} lam*_k), Im_{kl} with a minus sign.
inline ActionCoefficients extract_coeffs(const MatForm& A1) {
  if (A1.degree() != 1) throw std::invalid_argument("extract_coeffs: degree-1 form expected");
  ActionCoefficients r;
  for (const auto& [t, c] : A1.terms()) {
    auto k0 = pure_alpha_power(t[0].w);
    auto l0 = pure_alpha_power(t[1].w);
    if (!k0 || !l0) throw std::invalid_argument("extract_coeffs: form is not in lifted normal form");
    if (t[0].c != t[1].r || t[1].c != t[0].r) continue;  // trace of the matrix-unit product vanishes
    ActionCoefficients::bump(r.re, -*k0, *l0, 0.5 * c);
    ActionCoefficients::bump(r.re, *k0, -*l0, 0.5 * std::conj(c));
    ActionCoefficients::bump(r.im, -*k0, *l0, 0.5 * c);
    ActionCoefficients::bump(r.im, *k0, -*l0, -0.5 * std::conj(c));
  }
  r.K = r.support_cutoff();
  return r;
}

}  // namespace suqcs
