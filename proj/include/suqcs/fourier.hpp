// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <numbers>
#include <string>

#include "basis.hpp"
#include <nlohmann/json.hpp>

namespace suqcs {

// Finitely supported Fourier series sum_k c_k u^k, u = e^{i theta}.
class FourierPoly {
 public:
  using Coeffs = std::map<int, cplx>;

  FourierPoly() = default;
  explicit FourierPoly(cplx c) { add(0, c); }
  static FourierPoly mono(int k, cplx c = 1.0) {
    FourierPoly f;
    f.add(k, c);
    return f;
  }

  const Coeffs& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  cplx operator[](int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? cplx(0.0) : it->second;
  }

  void add(int k, cplx v) {
    if (v == cplx(0.0)) return;
    auto [it, ins] = c_.try_emplace(k, v);
    if (!ins) {
      it->second += v;
      if (it->second == cplx(0.0)) c_.erase(it);
    }
  }

  FourierPoly& operator+=(const FourierPoly& o) {
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
  }
  FourierPoly& operator-=(const FourierPoly& o) {
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
  }
  friend FourierPoly operator+(FourierPoly a, const FourierPoly& b) { return a += b; }
  friend FourierPoly operator-(FourierPoly a, const FourierPoly& b) { return a -= b; }
  friend FourierPoly operator*(cplx s, const FourierPoly& a) {
    FourierPoly r;
    for (const auto& [k, v] : a.c_) r.add(k, s * v);
    return r;
  }
  friend FourierPoly operator*(const FourierPoly& a, const FourierPoly& b) {
    FourierPoly r;
    for (const auto& [k, v] : a.c_)
      for (const auto& [l, w] : b.c_) r.add(k + l, v * w);
    return r;
  }

  // d/dtheta
  FourierPoly derivative(int order = 1) const {
    FourierPoly r;
    for (const auto& [k, v] : c_) {
      cplx f = v;
      for (int s = 0; s < order; ++s) f *= cplx(0.0, k);
      r.add(k, f);
    }
    return r;
  }

  FourierPoly star() const {
    FourierPoly r;
    for (const auto& [k, v] : c_) r.add(-k, std::conj(v));
    return r;
  }

  // (1/2pi) \int f dtheta
  cplx mean() const { return (*this)[0]; }

  // (1/2pi i) \int f dtheta
  cplx contour_integral() const { return mean() / cplx(0.0, 1.0); }

  cplx eval(double theta) const {
    cplx s = 0.0;
    for (const auto& [k, v] : c_) s += v * std::polar(1.0, k * theta);
    return s;
  }

  friend bool operator==(const FourierPoly&, const FourierPoly&) = default;

  nlohmann::json to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [k, v] : c_) a.push_back({k, v.real(), v.imag()});
    return a;
  }

 private:
  Coeffs c_;
};

inline double max_abs_diff(const FourierPoly& a, const FourierPoly& b) {
  double d = 0.0;
  const FourierPoly diff = a - b;
  for (const auto& [k, v] : diff.coeffs()) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace suqcs
