// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "ncpoly.hpp"

namespace suqcs {

// Operator on l^2(N) truncated to x <= x_max.
class SeqOp {
 public:
  using Column = std::vector<std::pair<int, cplx>>;

  SeqOp() = default;
  explicit SeqOp(int x_max) : x_max_(x_max), cols_(static_cast<std::size_t>(x_max) + 1) {}

  static SeqOp identity(int x_max) {
    SeqOp r(x_max);
    for (int x = 0; x <= x_max; ++x) r.cols_[x] = {{x, 1.0}};
    return r;
  }

  int x_max() const { return x_max_; }
  const Column& column(int x) const { return cols_.at(static_cast<std::size_t>(x)); }
  Column& column(int x) { return cols_.at(static_cast<std::size_t>(x)); }

  cplx entry(int y, int x) const {
    cplx v = 0.0;
    for (const auto& [r, a] : column(x))
      if (r == y) v += a;
    return v;
  }

  friend SeqOp operator*(const SeqOp& S, const SeqOp& T) {
    if (S.x_max_ != T.x_max_) throw std::invalid_argument("SeqOp size mismatch");
    SeqOp r(T.x_max_);
    for (int x = 0; x <= T.x_max_; ++x) {
      Column out;
      for (const auto& [y, a] : T.column(x))
        for (const auto& [z, b] : S.column(y)) {
          bool merged = false;
          for (auto& [zz, v] : out)
            if (zz == z) {
              v += a * b;
              merged = true;
              break;
            }
          if (!merged) out.emplace_back(z, a * b);
        }
      r.cols_[x] = std::move(out);
    }
    return r;
  }

  friend SeqOp axpy(cplx a, const SeqOp& X, cplx b, const SeqOp& Y) {
    SeqOp r = a * X;
    for (int x = 0; x <= Y.x_max_; ++x)
      for (const auto& [y, v] : Y.column(x)) {
        bool merged = false;
        for (auto& [yy, w] : r.cols_[x])
          if (yy == y) {
            w += b * v;
            merged = true;
            break;
          }
        if (!merged) r.cols_[x].emplace_back(y, b * v);
      }
    return r;
  }

  friend SeqOp operator*(cplx s, SeqOp X) {
    for (auto& c : X.cols_)
      for (auto& [y, v] : c) v *= s;
    return X;
  }

 private:
  int x_max_ = 0;
  std::vector<Column> cols_;
};

// The disk representations: pi_pm(a) e_x = sqrt(1 - q^{2x}) e_{x-1}, pi_pm(b) e_x = ±q^x e_x.
inline SeqOp pi_pm_letter(Letter l, int sign, double q, int x_max) {
  detail::check_q(q);
  SeqOp r(x_max);
  for (int x = 0; x <= x_max; ++x) {
    switch (l) {
      case Letter::a:
        if (x > 0) r.column(x).emplace_back(x - 1, std::sqrt(detail::omq(q, 2 * x)));
        break;
      case Letter::as:
        if (x < x_max) r.column(x).emplace_back(x + 1, std::sqrt(detail::omq(q, 2 * x + 2)));
        break;
      case Letter::b:
      case Letter::bs:
        // selfadjoint diagonal
        if (const double v = sign * detail::qpow(q, x); v != 0.0) r.column(x).emplace_back(x, v);
        break;
      default:
        throw std::invalid_argument("disk representations take the generator alphabet");
    }
  }
  return r;
}

inline SeqOp pi_pm(const NCPoly& x, int sign, double q, int x_max) {
  SeqOp r(x_max);
  for (const auto& [w, c] : x.terms()) {
    SeqOp t = SeqOp::identity(x_max);
    for (auto it = w.rbegin(); it != w.rend(); ++it) t = pi_pm_letter(*it, sign, q, x_max) * t;
    r = axpy(1.0, r, c, t);
  }
  return r;
}

// Diagonal element <e_x, pi(w) e_x> of a word, evaluated without building operators.
inline cplx pi_pm_diag(const Word& w, int sign, double q, int x) {
  cplx amp = 1.0;
  int pos = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    switch (*it) {
      case Letter::a:
        if (pos == 0) return 0.0;
        amp *= std::sqrt(detail::omq(q, 2 * pos));
        --pos;
        break;
      case Letter::as:
        amp *= std::sqrt(detail::omq(q, 2 * pos + 2));
        ++pos;
        break;
      case Letter::b:
      case Letter::bs:
        amp *= sign * detail::qpow(q, pos);
        break;
      default:
        throw std::invalid_argument("disk representations take the generator alphabet");
    }
    if (amp == cplx(0.0)) return 0.0;
  }
  return pos == x ? amp : cplx(0.0);
}

}  // namespace suqcs
