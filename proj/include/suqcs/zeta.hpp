// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "ncpoly.hpp"
#include "seq_op.hpp"
#include "shift_op.hpp"

namespace suqcs {

// Shell traces t(lambda) indexed by |D| eigenvalue; kernel shell excluded.
struct ShellSeries {
  std::vector<double> lambda;
  std::vector<cplx> t;
  std::vector<bool> boundary;

  std::size_t size() const { return t.size(); }

  std::size_t unflagged() const {
    std::size_t n = 0;
    for (bool b : boundary) n += !b;
    return n;
  }

  // Largest abscissa index that is not flagged, or npos.
  std::ptrdiff_t last_good() const {
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(size()) - 1; k >= 0; --k)
      if (!boundary[k]) return k;
    return -1;
  }

  std::string to_csv() const {
    std::string s = "lambda,re,im,boundary\n";
    char buf[128];
    for (std::size_t k = 0; k < size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", lambda[k], t[k].real(), t[k].imag(),
                    boundary[k] ? 1 : 0);
      s += buf;
    }
    return s;
  }
};

// t(m) = sum over shell m of <e, T e> for m = 1..m_max.
inline ShellSeries shell_traces(const ShiftOp& T) {
  const Truncation& tr = T.trunc();
  ShellSeries s;
  std::size_t c = shell_offset(1);
  for (int m = 1; m <= tr.m_max; ++m) {
    cplx acc = 0.0;
    const std::size_t end = shell_offset(m + 1);
    for (; c < end; ++c) acc += T.diag(c);
    s.lambda.push_back(m);
    s.t.push_back(acc);
    s.boundary.push_back(m > T.interior_shell());
  }
  return s;
}

struct PoleModel {
  int max_power = 2;
  int min_power = -2;
  int log_order = 0;                    // include m^j log^k m for k <= log_order
  std::optional<double> geometric;      // ratio r of an amplitude * r^m term
  int m_lo = 0, m_hi = 0;               // 0: default window [m_hi/2, last unflagged]
  double max_condition = 1e13;
};

struct PoleFit {
  std::map<int, cplx> c;                         // power -> coefficient
  std::map<std::pair<int, int>, cplx> logc;      // (power, log order >= 1) -> coefficient
  std::optional<cplx> geometric_amplitude;
  double geometric_ratio = 0.0;
  double window_lo = 0, window_hi = 0;
  double rms = 0.0;
  double condition = 0.0;
  std::size_t points = 0;

  cplx coeff(int j) const {
    auto it = c.find(j);
    return it == c.end() ? cplx(0.0) : it->second;
  }
  cplx log_coeff(int j, int k) const {
    if (k == 0) return coeff(j);
    auto it = logc.find({j, k});
    return it == logc.end() ? cplx(0.0) : it->second;
  }
  cplx c2() const { return coeff(2); }
  cplx c1() const { return coeff(1); }
  cplx c0() const { return coeff(0); }
  cplx c_neg1() const { return coeff(-1); }
  cplx c_neg2() const { return coeff(-2); }

  // Fitted Laurent part (without logs or geometric term).
  cplx polynomial(double x) const {
    cplx s = 0.0;
    for (const auto& [j, v] : c) s += v * std::pow(x, j);
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    for (const auto& [p, v] : c) j["c"][std::to_string(p)] = {v.real(), v.imag()};
    for (const auto& [pk, v] : logc)
      j["log"][std::to_string(pk.first) + "," + std::to_string(pk.second)] = {v.real(), v.imag()};
    if (geometric_amplitude) j["geometric"] = {geometric_ratio, geometric_amplitude->real(), geometric_amplitude->imag()};
    j["window"] = {window_lo, window_hi};
    j["rms"] = rms;
    j["condition"] = condition;
    j["points"] = points;
    return j;
  }
};

struct FitError : std::runtime_error {
  double condition;
  FitError(const std::string& what, double cond) : std::runtime_error(what), condition(cond) {}
};

inline PoleFit fit_poles(const ShellSeries& s, const PoleModel& model = {}) {
  const std::ptrdiff_t last = s.last_good();
  if (last < 0) throw FitError("fit_poles: no unflagged shells", 0.0);
  const double hi = model.m_hi > 0 ? model.m_hi : s.lambda[last];
  const double lo = model.m_lo > 0 ? model.m_lo : std::floor(hi / 2);

  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < s.size(); ++k)
    if (!s.boundary[k] && s.lambda[k] >= lo && s.lambda[k] <= hi) rows.push_back(k);

  struct Col {
    int power, log_k;
    bool geo;
  };
  std::vector<Col> cols;
  for (int j = model.max_power; j >= model.min_power; --j) {
    cols.push_back({j, 0, false});
    for (int k = 1; k <= model.log_order; ++k) cols.push_back({j, k, false});
  }
  double geo_scale = 1.0;
  if (model.geometric && *model.geometric > 0.0) {
    geo_scale = std::pow(*model.geometric, lo);
    if (geo_scale > 1e-14) cols.push_back({0, 0, true});
  }
  if (rows.size() < 12) throw FitError("fit_poles: fewer than 12 usable shells", 0.0);
  if (rows.size() < 2 * cols.size())
    throw FitError("fit_poles: window too short for the number of coefficients", 0.0);

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd A(n, p);
  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double lam = s.lambda[rows[r]];
    const double x = lam / hi;
    for (Eigen::Index k = 0; k < p; ++k) {
      const Col& c = cols[k];
      if (c.geo)
        A(r, k) = std::pow(*model.geometric, lam) / geo_scale;
      else
        A(r, k) = std::pow(x, c.power) * std::pow(std::log(lam), c.log_k);
    }
    y(r, 0) = s.t[rows[r]].real();
    y(r, 1) = s.t[rows[r]].imag();
  }
  Eigen::VectorXd scale = A.colwise().norm();
  for (Eigen::Index k = 0; k < p; ++k)
    if (scale(k) > 0) A.col(k) /= scale(k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(p - 1) > 0 ? sv(0) / sv(p - 1) : INFINITY;
  if (!(cond <= model.max_condition)) throw FitError("fit_poles: ill-conditioned window", cond);
  Eigen::MatrixXd sol = svd.solve(y);

  PoleFit f;
  f.window_lo = lo;
  f.window_hi = hi;
  f.points = rows.size();
  f.condition = cond;
  Eigen::MatrixXd res = A * sol - y;
  f.rms = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  for (Eigen::Index k = 0; k < p; ++k) {
    const Col& c = cols[k];
    cplx v(sol(k, 0), sol(k, 1));
    v /= scale(k);
    if (c.geo) {
      f.geometric_amplitude = v / geo_scale;
      f.geometric_ratio = *model.geometric;
    } else {
      v /= std::pow(hi, c.power);
      if (c.log_k == 0)
        f.c[c.power] = v;
      else
        f.logc[{c.power, c.log_k}] = v;
    }
  }
  return f;
}

// Residue data of T |D|^y read off the fit of T's shell traces.
// tau_k uses |D|^{y-2z}; the Wodzicki residue uses |D|^{-z}, so wres = 2 tau_0.
inline cplx tau_residue(const PoleFit& f, int y, int k) {
  const int j = -y - 1;
  double fact = 1.0;
  for (int s = 2; s <= k; ++s) fact *= s;
  return f.log_coeff(j, k) * fact / std::pow(2.0, k + 1);
}

inline cplx wres(const PoleFit& f, int y) { return f.coeff(-y - 1); }

struct ResidueReport {
  std::map<std::pair<int, int>, cplx> tau;  // (k, y)
  std::map<int, cplx> wres;                 // y
  std::optional<cplx> phi0;
  std::string convention_note =
      "tau_k(T|D|^y) = Res_{z=0} z^k Trace(T|D|^{y-2z}); wres(T|D|^y) = Res_{z=0} Trace(T|D|^{y-z}) = 2 tau_0";
  PoleFit fit;

  nlohmann::json to_json() const {
    nlohmann::json j;
    for (const auto& [ky, v] : tau)
      j["tau"].push_back({{"k", ky.first}, {"y", ky.second}, {"re", v.real()}, {"im", v.imag()}});
    for (const auto& [y, v] : wres) j["wres"].push_back({{"y", y}, {"re", v.real()}, {"im", v.imag()}});
    if (phi0) j["phi0"] = {phi0->real(), phi0->imag()};
    j["convention_note"] = convention_note;
    j["fit"] = fit.to_json();
    return j;
  }
};

inline ResidueReport residue_report(const PoleFit& f, const std::vector<int>& powers, int max_k) {
  ResidueReport r;
  r.fit = f;
  for (int y : powers) {
    r.wres[y] = wres(f, y);
    for (int k = 0; k <= max_k; ++k) r.tau[{k, y}] = tau_residue(f, y, k);
  }
  return r;
}

namespace detail {
// zeta(-j) for j >= 0
inline double zeta_neg(int j) {
  if (j == 0) return -0.5;
  if (j == 1) return -1.0 / 12.0;
  if (j % 2 == 0) return 0.0;
  // zeta(-j) = -B_{j+1}/(j+1)
  static const double bern[] = {1.0, -0.5, 1.0 / 6, 0, -1.0 / 30, 0, 1.0 / 42, 0, -1.0 / 30, 0, 5.0 / 66};
  if (j + 1 > 10) throw std::domain_error("zeta_neg: power too large");
  return -bern[j + 1] / (j + 1);
}

// sum_{m > M} m^{-s}, s >= 2
inline double zeta_tail(int s, int M) {
  double partial = 0.0;
  for (int m = M; m >= 1; --m) partial += std::pow(static_cast<double>(m), -s);
  return std::riemann_zeta(static_cast<double>(s)) - partial;
}
}  // namespace detail

struct RegularizedTrace {
  cplx value;
  cplx divergent_part;   // sum_j c_j zeta(-j)
  cplx remainder;        // sum_m (t(m) - polynomial)
  double tail_bound = 0.0;
};

// Trace(T|D|^{-s}) continued to s = 0 from the shell traces.
inline RegularizedTrace phi0_reg(const ShellSeries& s, const PoleFit& f, double decay_tol = 1e-8) {
  RegularizedTrace r;
  for (const auto& [j, v] : f.c) {
    if (j >= 0)
      r.divergent_part += v * detail::zeta_neg(j);
    else if (j == -1 && std::abs(v) > decay_tol)
      throw std::runtime_error("phi0_reg: 1/m term present, remainder does not converge");
  }
  const std::ptrdiff_t last = s.last_good();
  cplx prev = 0.0;
  for (std::ptrdiff_t k = 0; k <= last; ++k) {
    if (s.boundary[k]) continue;
    cplx poly = 0.0;
    for (const auto& [j, v] : f.c)
      if (j >= 0) poly += v * std::pow(s.lambda[k], j);
    prev = s.t[k] - poly;
    r.remainder += prev;
  }
  r.tail_bound = std::abs(prev) * 2.0;
  if (r.tail_bound > decay_tol * std::max(1.0, std::abs(r.remainder)) * 1e3)
    throw std::runtime_error("phi0_reg: remainder does not decay inside the window");
  r.value = r.divergent_part + r.remainder;
  return r;
}

// Convergent Trace(T|D|^y) with the tail beyond the last shell from the fitted polynomial.
inline cplx convergent_trace(const ShellSeries& s, const PoleFit& f, int y) {
  const std::ptrdiff_t last = s.last_good();
  cplx sum = 0.0;
  for (std::ptrdiff_t k = 0; k <= last; ++k) {
    if (s.boundary[k]) throw std::runtime_error("convergent_trace: flagged shell inside the summation range");
    sum += s.t[k] * std::pow(s.lambda[k], y);
  }
  const int M = static_cast<int>(s.lambda[last]);
  for (const auto& [j, v] : f.c) {
    const int e = -(j + y);
    if (v == cplx(0.0)) continue;
    if (e < 2) throw std::runtime_error("convergent_trace: divergent power in the fitted tail");
    sum += v * detail::zeta_tail(e, M);
  }
  return sum;
}

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};

// F_k(q) = sum_{x >= 0} (prod_{j=1}^k (1 - q^{2(j+x)}) - 1); every term is <= 0.
inline SeriesValue F_k(int k, double q, double tol = 1e-15) {
  detail::check_q(q);
  SeriesValue r;
  if (k <= 0 || q == 0.0) return r;
  double lead = 0.0;  // sum_j q^{2j}
  for (int j = 1; j <= k; ++j) lead += detail::qpow(q, 2 * j);
  for (int x = 0;; ++x) {
    double prod = 1.0;
    for (int j = 1; j <= k; ++j) prod *= detail::omq(q, 2 * (j + x));
    r.value += prod - 1.0;
    r.terms = x + 1;
    const double bound = lead * detail::qpow(q, 2 * (x + 1)) / detail::omq(q, 2);
    if (bound < tol || x > 2000000) {
      r.tail_bound = bound;
      break;
    }
  }
  return r;
}

// tau_1 on the disk: mean of the boundary symbol (sigma(a) = u, sigma(b) = 0).
inline double disk_tau1(const Word& w) {
  int bal = 0;
  for (Letter l : w) {
    if (l == Letter::b || l == Letter::bs) return 0.0;
    if (l == Letter::a) ++bal;
    else if (l == Letter::as) --bal;
    else throw std::invalid_argument("disk_tau1: generator alphabet expected");
  }
  return bal == 0 ? 1.0 : 0.0;
}

struct Tau0Result {
  cplx value;
  int terms = 0;
  bool converged = true;
};

// lim_N Trace_N(pi_-(x)) - tau_1(x) N with Trace_N = sum_{x=0}^N.
inline Tau0Result tau0_pi_minus(const NCPoly& x, double q, int first = 0, int max_terms = 4000000) {
  detail::check_q(q);
  Tau0Result r;
  for (const auto& [w, c] : x.terms()) {
    const double t1 = disk_tau1(w);
    cplx acc = t1;
    int quiet = 0;
    int xx = first;
    const int L = static_cast<int>(w.size());
    for (; xx < max_terms; ++xx) {
      const cplx d = pi_pm_diag(w, -1, q, xx) - t1;
      acc += d;
      if (std::abs(d) < 1e-18 && xx > L) {
        if (++quiet > 16) break;
      } else {
        quiet = 0;
      }
    }
    if (xx >= max_terms) r.converged = false;
    r.terms = std::max(r.terms, xx - first + 1);
    r.value += c * acc;
  }
  if (!r.converged) throw std::runtime_error("tau0_pi_minus: sequence did not converge");
  return r;
}

}  // namespace suqcs
