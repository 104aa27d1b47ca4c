// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "fourier.hpp"
#include "ncpoly.hpp"

namespace suqcs {

// Elements of the q = 0 algebra written as
//   sum_{k,l,n} c_{kln} a*^k B(n) a^l  +  sum_l p_l a^l  +  sum_k p'_k a*^k,
// where B(n) = b^n (n > 0), e (n = 0), b*^{-n} (n < 0) and e = bb* = b*b.
// The pure part is keyed by signed power: l > 0 -> a^l, l < 0 -> a*^{-l}.
struct Q0Form {
  std::map<std::tuple<int, int, int>, cplx> blocks;
  std::map<int, cplx> pure;

  void add_block(int k, int l, int n, cplx c) {
    if (c == cplx(0.0)) return;
    auto& v = blocks[{k, l, n}];
    v += c;
    if (v == cplx(0.0)) blocks.erase({k, l, n});
  }
  void add_pure(int l, cplx c) {
    if (c == cplx(0.0)) return;
    auto& v = pure[l];
    v += c;
    if (v == cplx(0.0)) pure.erase(l);
  }

  Q0Form& operator+=(const Q0Form& o) {
    for (const auto& [key, c] : o.blocks) add_block(std::get<0>(key), std::get<1>(key), std::get<2>(key), c);
    for (const auto& [l, c] : o.pure) add_pure(l, c);
    return *this;
  }

  // f(beta) sandwiched between a*^k and a^l as a Fourier polynomial in the block index n.
  std::map<std::pair<int, int>, FourierPoly> sandwiches() const {
    std::map<std::pair<int, int>, FourierPoly> r;
    for (const auto& [key, c] : blocks) r[{std::get<0>(key), std::get<1>(key)}].add(std::get<2>(key), c);
    return r;
  }

  // Symbol: the blocks lie in the kernel, a^l -> u^l.
  FourierPoly symbol() const {
    FourierPoly f;
    for (const auto& [l, c] : pure) f.add(l, c);
    return f;
  }

  friend bool operator==(const Q0Form&, const Q0Form&) = default;
};

namespace detail {

// token: 0 = a, 1 = a*, 2 = beta block with exponent n
struct Q0Tok {
  int kind;
  int n;
  bool operator==(const Q0Tok&) const = default;
};

inline void q0_reduce(std::vector<Q0Tok> toks, cplx coef, Q0Form& out, int depth = 0) {
  if (depth > 100000) throw std::runtime_error("q0 rewriting did not terminate");
  for (std::size_t p = 0; p + 1 < toks.size(); ++p) {
    const Q0Tok x = toks[p], y = toks[p + 1];
    // a B -> 0 and B a* -> 0
    if ((x.kind == 0 && y.kind == 2) || (x.kind == 2 && y.kind == 1)) return;
    if (x.kind == 2 && y.kind == 2) {
      toks[p] = {2, x.n + y.n};
      toks.erase(toks.begin() + static_cast<std::ptrdiff_t>(p) + 1);
      return q0_reduce(std::move(toks), coef, out, depth + 1);
    }
    if (x.kind == 0 && y.kind == 1) {  // a a* -> 1
      toks.erase(toks.begin() + static_cast<std::ptrdiff_t>(p), toks.begin() + static_cast<std::ptrdiff_t>(p) + 2);
      return q0_reduce(std::move(toks), coef, out, depth + 1);
    }
    if (x.kind == 1 && y.kind == 0) {  // a* a -> 1 - e
      std::vector<Q0Tok> one = toks;
      one.erase(one.begin() + static_cast<std::ptrdiff_t>(p), one.begin() + static_cast<std::ptrdiff_t>(p) + 2);
      std::vector<Q0Tok> e = toks;
      e[p] = {2, 0};
      e.erase(e.begin() + static_cast<std::ptrdiff_t>(p) + 1);
      q0_reduce(std::move(one), coef, out, depth + 1);
      q0_reduce(std::move(e), -coef, out, depth + 1);
      return;
    }
  }
  // terminal: a*^k [B(n)] a^l
  int k = 0, l = 0;
  std::size_t p = 0;
  while (p < toks.size() && toks[p].kind == 1) ++k, ++p;
  if (p < toks.size() && toks[p].kind == 2) {
    const int n = toks[p].n;
    ++p;
    while (p < toks.size() && toks[p].kind == 0) ++l, ++p;
    out.add_block(k, l, n, coef);
    return;
  }
  while (p < toks.size() && toks[p].kind == 0) ++l, ++p;
  if (k && l) throw std::logic_error("q0 rewriting left a* a adjacency");
  out.add_pure(l - k, coef);
}

}  // namespace detail

inline Q0Form q0_canonical(const NCPoly& x) {
  Q0Form out;
  for (const auto& [w, c] : x.terms()) {
    std::vector<detail::Q0Tok> toks;
    for (Letter l : w) {
      switch (l) {
        case Letter::a: toks.push_back({0, 0}); break;
        case Letter::as: toks.push_back({1, 0}); break;
        case Letter::b: toks.push_back({2, 1}); break;
        case Letter::bs: toks.push_back({2, -1}); break;
        default: throw std::invalid_argument("q0_canonical: generator alphabet expected");
      }
    }
    detail::q0_reduce(std::move(toks), c, out);
  }
  return out;
}

// Back to a polynomial, with e written as b b*.
inline NCPoly to_ncpoly(const Q0Form& f) {
  NCPoly r;
  for (const auto& [key, c] : f.blocks) {
    const auto [k, l, n] = key;
    Word w(static_cast<std::size_t>(k), Letter::as);
    if (n > 0)
      w.insert(w.end(), static_cast<std::size_t>(n), Letter::b);
    else if (n < 0)
      w.insert(w.end(), static_cast<std::size_t>(-n), Letter::bs);
    else {
      w.push_back(Letter::b);
      w.push_back(Letter::bs);
    }
    w.insert(w.end(), static_cast<std::size_t>(l), Letter::a);
    r.add_term(w, c);
  }
  for (const auto& [l, c] : f.pure) r.add_term(alpha_power(l), c);
  return r;
}

// rho(j) = 2/3 - j - j^2 of the explicit q = 0 regularized trace.
inline double q0_rho(int j) { return 2.0 / 3.0 - j - static_cast<double>(j) * j; }

// Explicit q = 0 phi_0: a*^k f a^k -> rho(k) f_0; pure powers and off-diagonal blocks give 0.
inline cplx q0_phi0_explicit(const NCPoly& x) {
  const Q0Form f = q0_canonical(x);
  cplx s = 0.0;
  for (const auto& [key, c] : f.blocks) {
    const auto [k, l, n] = key;
    if (k == l && n == 0) s += q0_rho(k) * c;
  }
  return s;
}

// q = 0 tau_1: tau_1(a*^k f a^l, a*^l g a^k) = (1/pi i) \int f dg = 2 sum_n n f_{-n} g_n.
inline cplx q0_tau1(const NCPoly& x0, const NCPoly& x1) {
  const auto s0 = q0_canonical(x0).sandwiches();
  const auto s1 = q0_canonical(x1).sandwiches();
  cplx s = 0.0;
  for (const auto& [kl, f] : s0) {
    auto it = s1.find({kl.second, kl.first});
    if (it == s1.end()) continue;
    const FourierPoly& g = it->second;
    for (const auto& [n, gn] : g.coeffs()) s += 2.0 * static_cast<double>(n) * f[-n] * gn;
  }
  return s;
}

}  // namespace suqcs
