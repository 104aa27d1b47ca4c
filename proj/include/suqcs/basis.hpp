// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace suqcs {

using cplx = std::complex<double>;

// Basis label e^{(n)}_{ij} with every half-integer stored doubled.
struct BasisIndex {
  int m = 0;   // 2n
  int i2 = 0;  // 2i
  int j2 = 0;  // 2j

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;

  bool valid() const {
    return m >= 0 && std::abs(i2) <= m && std::abs(j2) <= m &&
           ((m - i2) & 1) == 0 && ((m - j2) & 1) == 0;
  }
};

inline std::string to_string(const BasisIndex& e) {
  return "(" + std::to_string(e.m) + "," + std::to_string(e.i2) + "," + std::to_string(e.j2) + ")";
}

// Number of basis vectors in shells 0..m-1.
inline std::size_t shell_offset(int m) {
  const auto mm = static_cast<std::size_t>(m);
  return mm * (mm + 1) * (2 * mm + 1) / 6;
}

inline std::size_t shell_size(int m) {
  return static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m + 1);
}

struct Truncation {
  int m_max = 40;
  int guard = 8;

  Truncation() = default;
  Truncation(int mm, int g) : m_max(mm), guard(g) {
    if (mm < 0 || g < 0 || g > mm)
      throw std::invalid_argument("truncation requires 0 <= guard <= m_max");
  }

  std::size_t dim() const { return shell_offset(m_max + 1); }

  std::size_t index(const BasisIndex& e) const {
    const int a = (e.m + e.i2) / 2;
    const int b = (e.m + e.j2) / 2;
    return shell_offset(e.m) + static_cast<std::size_t>(a) * static_cast<std::size_t>(e.m + 1) +
           static_cast<std::size_t>(b);
  }

  bool contains(const BasisIndex& e) const { return e.valid() && e.m <= m_max; }

  BasisIndex label(std::size_t k) const {
    int m = 0;
    while (shell_offset(m + 1) <= k) ++m;
    const std::size_t r = k - shell_offset(m);
    const int a = static_cast<int>(r / static_cast<std::size_t>(m + 1));
    const int b = static_cast<int>(r % static_cast<std::size_t>(m + 1));
    return {m, 2 * a - m, 2 * b - m};
  }

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

namespace detail {

// q^k with q^0 = 1 also at q = 0
inline double qpow(double q, double k) {
  if (k == 0.0) return 1.0;
  if (q == 0.0) return 0.0;
  return std::exp(k * std::log(q));
}

// 1 - q^k, accurate for q near 1
inline double omq(double q, int k) {
  if (k == 0) return 0.0;
  if (q == 0.0) return 1.0;
  return -std::expm1(static_cast<double>(k) * std::log(q));
}

inline void check_q(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("q must lie in [0,1)");
}

}  // namespace detail

enum class Ladder { a_plus, a_minus, b_plus, b_minus };

// Ladder amplitudes on doubled labels. The targets are
//   a±: (m±1, i2-1, j2-1),  b±: (m±1, i2+1, j2-1).
inline double ladder_coeff2(Ladder kind, int m, int i2, int j2, double q) {
  using detail::omq;
  using detail::qpow;
  detail::check_q(q);
  if (!BasisIndex{m, i2, j2}.valid()) throw std::domain_error("invalid basis label " + to_string({m, i2, j2}));
  switch (kind) {
    case Ladder::a_plus: {
      const double num = omq(q, m - j2 + 2) * omq(q, m - i2 + 2);
      const double den = omq(q, 2 * m + 2) * omq(q, 2 * m + 4);
      return qpow(q, m + (i2 + j2) / 2 + 1) * std::sqrt(num / den);
    }
    case Ladder::a_minus: {
      if (m == 0) return 0.0;
      const double num = omq(q, m + j2) * omq(q, m + i2);
      if (num == 0.0) return 0.0;
      return std::sqrt(num / (omq(q, 2 * m) * omq(q, 2 * m + 2)));
    }
    case Ladder::b_plus: {
      const double num = omq(q, m - j2 + 2) * omq(q, m + i2 + 2);
      const double den = omq(q, 2 * m + 2) * omq(q, 2 * m + 4);
      return -qpow(q, (m + j2) / 2) * std::sqrt(num / den);
    }
    case Ladder::b_minus: {
      if (m == 0) return 0.0;
      const double num = omq(q, m + j2) * omq(q, m - i2);
      if (num == 0.0) return 0.0;
      return qpow(q, (m + i2) / 2) * std::sqrt(num / (omq(q, 2 * m) * omq(q, 2 * m + 2)));
    }
  }
  return 0.0;
}

// Half-integer front end: n, i, j are spins (0, 1/2, 1, ...).
inline double ladder_coeff(Ladder kind, double n, double i, double j, double q) {
  const double m = 2 * n, ii = 2 * i, jj = 2 * j;
  if (m != std::round(m) || ii != std::round(ii) || jj != std::round(jj))
    throw std::domain_error("ladder_coeff: arguments must be half-integers");
  return ladder_coeff2(kind, static_cast<int>(m), static_cast<int>(ii), static_cast<int>(jj), q);
}

}  // namespace suqcs
