// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cocycles.hpp"
#include <nlohmann/json.hpp>
#include "symbols.hpp"

namespace suqcs {

enum class SearchMethod { gradient_descent, damped_newton };
inline const char* to_string(SearchMethod m) {
  return m == SearchMethod::gradient_descent ? "gradient-descent" : "damped-newton";
}

// The shifted action as a polynomial in the cells Re_{kl}, Im_{kl}, |k|,|l| <= K.
// Complex cell vector z: Re cells first, then Im cells, (k,l) lexicographic.
// Real coordinates interleave (real part, imaginary part) of each cell.
struct StationaryProblem {
  double q = 0.0;
  int level = 1;
  int K = 1;
  bool cubic = true;
  bool quadratic = true;
  double ridge = 0.0;                    // adds ridge/2 |x|^2
  std::vector<cplx> linear;              // phi_1 coefficients per cell, empty = no linear term
  std::string phi1_route = "none";
  std::vector<bool> mask;                // active cells, empty = all
  bool hermitian = false;                // impose Re_{-k,-l} = conj Re_{kl}, Im_{-k,-l} = -conj Im_{kl}

  int side() const { return 2 * K + 1; }
  int cells() const { return side() * side(); }
  int complex_dim() const { return 2 * cells(); }
  int full_real_dim() const { return 2 * complex_dim(); }
  int cell(int k, int l) const { return (k + K) * side() + (l + K); }
  std::pair<int, int> cell_kl(int c) const { return {c / side() - K, c % side() - K}; }
  bool active(int z) const { return mask.empty() || mask[static_cast<std::size_t>(z)]; }
};

// Linear phi_1 coefficients from the closed form (only diagonal cells carry weight).
inline std::vector<cplx> closed_form_linear(const StationaryProblem& p, const ClosedFormOptions& o,
                                            const CochainEngine* engine = nullptr) {
  std::vector<cplx> L(static_cast<std::size_t>(p.complex_dim()), 0.0);
  for (int k = -p.K; k <= p.K; ++k) {
    ActionCoefficients unit;
    unit.K = p.K;
    ActionCoefficients::bump(unit.re, k, k, 1.0);
    L[static_cast<std::size_t>(p.cell(k, k))] = closed_form_phi1(unit, o, engine).total();
    ActionCoefficients uim;
    uim.K = p.K;
    ActionCoefficients::bump(uim.im, k, k, 1.0);
    L[static_cast<std::size_t>(p.cells() + p.cell(k, k))] = closed_form_phi1(uim, o, engine).total();
  }
  return L;
}

struct ComplexEval {
  cplx value;
  Eigen::VectorXcd grad;  // dS/dz
  Eigen::MatrixXcd hess;  // d2S/dz dz
};

namespace detail {

struct ConvIndex {
  int K;
  int off(int n) const { return n + 4 * K; }
  int size() const { return 8 * K + 1; }
};

}  // namespace detail

// Holomorphic S(z) = level (6 pi phi3(z) - 2 pi phi1(z)), with gradient and optionally Hessian.
inline ComplexEval eval_complex(const StationaryProblem& p, const Eigen::VectorXcd& z, bool with_hess) {
  const int C = p.cells(), K = p.K;
  const detail::ConvIndex ix{K};
  std::vector<cplx> g(static_cast<std::size_t>(ix.size()), 0.0), h(g.size(), 0.0);
  for (int c = 0; c < C; ++c) {
    auto [k, l] = p.cell_kl(c);
    g[static_cast<std::size_t>(ix.off(l - k))] += static_cast<double>(l) * z(C + c);
    h[static_cast<std::size_t>(ix.off(l - k))] += static_cast<double>(k) * l * z(c);
  }
  auto G = [&](int n) { return (n < -4 * K || n > 4 * K) ? cplx(0.0) : g[static_cast<std::size_t>(ix.off(n))]; };
  auto Hh = [&](int n) { return (n < -4 * K || n > 4 * K) ? cplx(0.0) : h[static_cast<std::size_t>(ix.off(n))]; };
  std::vector<cplx> gg(g.size(), 0.0);  // (g*g)_m for |m| <= 4K
  for (int a = -2 * K; a <= 2 * K; ++a)
    for (int b = -2 * K; b <= 2 * K; ++b) gg[static_cast<std::size_t>(ix.off(a + b))] += G(a) * G(b);
  auto GG = [&](int n) { return (n < -4 * K || n > 4 * K) ? cplx(0.0) : gg[static_cast<std::size_t>(ix.off(n))]; };

  const double s3 = 6.0 * kPi * p.level, s1 = -2.0 * kPi * p.level;
  ComplexEval e;
  cplx quad = 0.0, cub = 0.0, lin = 0.0;
  for (int n = -2 * K; n <= 2 * K; ++n) {
    quad += G(n) * Hh(-n);
    cub += G(n) * GG(-n);
  }
  const double wq = p.quadratic ? 1.0 : 0.0, wc = p.cubic ? 1.0 : 0.0;
  e.grad = Eigen::VectorXcd::Zero(2 * C);
  for (int c = 0; c < C; ++c) {
    auto [k, l] = p.cell_kl(c);
    e.grad(c) += s3 * wq * (-1.0 / 12.0) * static_cast<double>(k) * l * G(k - l);
    e.grad(C + c) += s3 * (wq * (-1.0 / 12.0) * static_cast<double>(l) * Hh(k - l) +
                           wc * (1.0 / 6.0) * static_cast<double>(l) * GG(k - l));
  }
  if (!p.linear.empty()) {
    for (int j = 0; j < 2 * C; ++j) {
      lin += p.linear[static_cast<std::size_t>(j)] * z(j);
      e.grad(j) += s1 * p.linear[static_cast<std::size_t>(j)];
    }
  }
  e.value = s3 * (wq * (-quad / 12.0) + wc * (cub / 18.0)) + s1 * lin;
  if (with_hess) {
    e.hess = Eigen::MatrixXcd::Zero(2 * C, 2 * C);
    for (int c = 0; c < C; ++c) {
      auto [k, l] = p.cell_kl(c);
      for (int d = 0; d < C; ++d) {
        auto [k2, l2] = p.cell_kl(d);
        if (wq != 0.0 && l2 - k2 == k - l) {
          const cplx v = s3 * (-1.0 / 12.0) * static_cast<double>(l) * k2 * l2;
          e.hess(C + c, d) += v;
          e.hess(d, C + c) += v;
        }
        if (wc != 0.0) e.hess(C + c, C + d) += s3 * (1.0 / 3.0) * static_cast<double>(l) * l2 * G(k - l + k2 - l2);
      }
    }
  }
  return e;
}

// Real parametrization x -> z: z = B x with B a real (2 * complex_dim) x free matrix acting on
// interleaved (re, im) parts of z.
inline Eigen::MatrixXd parametrization(const StationaryProblem& p) {
  const int Z = p.complex_dim(), C = p.cells();
  std::vector<Eigen::VectorXd> cols;
  auto unit = [&](std::initializer_list<std::pair<int, double>> ent) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * Z);
    for (auto [i, s] : ent) v(i) = s;
    cols.push_back(v);
  };
  for (int z = 0; z < Z; ++z) {
    if (!p.active(z)) continue;
    if (!p.hermitian) {
      unit({{2 * z, 1.0}});
      unit({{2 * z + 1, 1.0}});
      continue;
    }
    const bool im_block = z >= C;
    const auto [k, l] = p.cell_kl(z % C);
    const int partner = (im_block ? C : 0) + p.cell(-k, -l);
    if (partner < z) continue;
    if (!p.active(partner)) continue;
    if (partner == z) {
      if (im_block) unit({{2 * z + 1, 1.0}});
      else unit({{2 * z, 1.0}});
      continue;
    }
    // Re: (u + iv, u - iv); Im: (u + iv, -u + iv)
    unit({{2 * z, 1.0}, {2 * partner, im_block ? -1.0 : 1.0}});
    unit({{2 * z + 1, 1.0}, {2 * partner + 1, im_block ? 1.0 : -1.0}});
  }
  Eigen::MatrixXd B(2 * Z, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) B.col(static_cast<Eigen::Index>(j)) = cols[j];
  return B;
}

struct RealEval {
  double value;          // Re S + ridge/2 |x|^2
  cplx complex_value;    // S
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;  // empty unless requested
};

class StationaryObjective {
 public:
  explicit StationaryObjective(StationaryProblem p) : p_(std::move(p)), B_(parametrization(p_)) {}

  const StationaryProblem& problem() const { return p_; }
  Eigen::Index dim() const { return B_.cols(); }
  const Eigen::MatrixXd& basis() const { return B_; }

  Eigen::VectorXcd cells(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd r = B_ * x;
    Eigen::VectorXcd z(p_.complex_dim());
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = cplx(r(2 * j), r(2 * j + 1));
    return z;
  }

  RealEval eval(const Eigen::VectorXd& x, bool with_hess = false) const {
    const ComplexEval ce = eval_complex(p_, cells(x), with_hess);
    const Eigen::Index Z = p_.complex_dim();
    Eigen::VectorXd gfull(2 * Z);
    for (Eigen::Index j = 0; j < Z; ++j) {
      gfull(2 * j) = ce.grad(j).real();
      gfull(2 * j + 1) = -ce.grad(j).imag();
    }
    RealEval r;
    r.complex_value = ce.value;
    r.value = ce.value.real() + 0.5 * p_.ridge * x.squaredNorm();
    r.grad = B_.transpose() * gfull + p_.ridge * x;
    if (with_hess) {
      Eigen::MatrixXd Hf(2 * Z, 2 * Z);
      for (Eigen::Index i = 0; i < Z; ++i)
        for (Eigen::Index j = 0; j < Z; ++j) {
          const cplx h = ce.hess(i, j);
          Hf(2 * i, 2 * j) = h.real();
          Hf(2 * i, 2 * j + 1) = -h.imag();
          Hf(2 * i + 1, 2 * j) = -h.imag();
          Hf(2 * i + 1, 2 * j + 1) = -h.real();
        }
      r.hess = B_.transpose() * Hf * B_;
      r.hess.diagonal().array() += p_.ridge;
    }
    return r;
  }

  ActionCoefficients coefficients(const Eigen::VectorXd& x) const {
    const Eigen::VectorXcd z = cells(x);
    ActionCoefficients c;
    c.K = p_.K;
    for (int j = 0; j < p_.cells(); ++j) {
      auto [k, l] = p_.cell_kl(j);
      ActionCoefficients::bump(c.re, k, l, z(j));
      ActionCoefficients::bump(c.im, k, l, z(p_.cells() + j));
    }
    return c;
  }

  // Least-squares projection of given coefficients onto the parametrization.
  Eigen::VectorXd point(const ActionCoefficients& c) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * p_.complex_dim());
    for (int j = 0; j < p_.cells(); ++j) {
      auto [k, l] = p_.cell_kl(j);
      const cplx a = c.Re(k, l), b = c.Im(k, l);
      r(2 * j) = a.real();
      r(2 * j + 1) = a.imag();
      r(2 * (p_.cells() + j)) = b.real();
      r(2 * (p_.cells() + j) + 1) = b.imag();
    }
    return B_.completeOrthogonalDecomposition().solve(r);
  }

 private:
  StationaryProblem p_;
  Eigen::MatrixXd B_;
};

inline Eigen::VectorXd central_difference_gradient(const StationaryObjective& f, const Eigen::VectorXd& x,
                                                   double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f.eval(xp).value - f.eval(xm).value) / (2.0 * h);
  }
  return g;
}

struct CurvatureSummary {
  double min_eig = 0.0, max_eig = 0.0, min_abs_eig = 0.0;
  int negative = 0, positive = 0, zero = 0;
  std::string kind;  // minimum, maximum, saddle, degenerate
};

inline CurvatureSummary curvature(const Eigen::MatrixXd& H, double tol = 1e-9) {
  CurvatureSummary c;
  if (H.size() == 0) {
    c.kind = "degenerate";
    return c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  c.min_eig = ev.minCoeff();
  c.max_eig = ev.maxCoeff();
  c.min_abs_eig = ev.cwiseAbs().minCoeff();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol * scale) ++c.positive;
    else if (ev(i) < -tol * scale) ++c.negative;
    else ++c.zero;
  }
  if (c.negative > 0 && c.positive > 0) c.kind = "saddle";
  else if (c.zero > 0) c.kind = "degenerate";
  else c.kind = c.positive > 0 ? "minimum" : "maximum";
  return c;
}

struct TrajectoryPoint {
  int iter;
  double value, grad_norm, step;
};

struct StationaryReport {
  ActionCoefficients solution;
  Eigen::VectorXd x;
  cplx action;
  double objective = 0.0;
  double grad_norm = 0.0;  // infinity norm
  CurvatureSummary curv;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  bool complex_phi1 = false;
  std::string method, phi1_route;
  std::vector<TrajectoryPoint> trajectory;

  nlohmann::json to_json() const {
    nlohmann::json j{{"method", method},
                     {"phi1_route", phi1_route},
                     {"stationarity_of", "real part"},
                     {"complex_phi1", complex_phi1},
                     {"converged", converged},
                     {"diverged", diverged},
                     {"iterations", iterations},
                     {"grad_norm_inf", grad_norm},
                     {"objective", objective},
                     {"action", {action.real(), action.imag()}},
                     {"curvature",
                      {{"min_eig", curv.min_eig},
                       {"max_eig", curv.max_eig},
                       {"min_abs_eig", curv.min_abs_eig},
                       {"negative", curv.negative},
                       {"positive", curv.positive},
                       {"zero", curv.zero},
                       {"kind", curv.kind}}},
                     {"solution", solution.to_json()}};
    if (!trajectory.empty()) {
      const auto& t = trajectory.back();
      j["trajectory_summary"] = {{"points", trajectory.size()}, {"final_value", t.value}, {"final_grad", t.grad_norm}};
    }
    return j;
  }

  std::string trajectory_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "iter,value,grad_norm,step\n";
    for (const auto& t : trajectory) os << t.iter << ',' << t.value << ',' << t.grad_norm << ',' << t.step << '\n';
    return os.str();
  }
};

struct SearchOptions {
  SearchMethod method = SearchMethod::damped_newton;
  double tol = 1e-10;
  int max_iter = 500;
  double divergence = 1e12;
};

inline StationaryReport find_stationary(const StationaryObjective& f, Eigen::VectorXd x, const SearchOptions& o) {
  if (x.size() != f.dim()) throw std::invalid_argument("find_stationary: init has wrong dimension");
  if (!x.allFinite()) throw std::invalid_argument("find_stationary: init not finite");
  StationaryReport r;
  r.method = to_string(o.method);
  r.phi1_route = f.problem().phi1_route;
  for (const cplx& c : f.problem().linear)
    if (c.imag() != 0.0) r.complex_phi1 = true;

  auto merit = [&](const Eigen::VectorXd& y) { return 0.5 * f.eval(y).grad.squaredNorm(); };
  RealEval e = f.eval(x, true);
  int it = 0;
  for (; it < o.max_iter; ++it) {
    const double gn = e.grad.size() ? e.grad.cwiseAbs().maxCoeff() : 0.0;
    r.trajectory.push_back({it, e.value, gn, 0.0});
    if (gn <= o.tol) break;
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > o.divergence) {
      r.diverged = true;
      break;
    }
    Eigen::VectorXd dir;
    if (o.method == SearchMethod::damped_newton) {
      dir = -e.hess.completeOrthogonalDecomposition().solve(e.grad);
    } else {
      dir = -(e.hess.transpose() * e.grad);  // descent direction of |grad|^2 / 2
    }
    const double m0 = 0.5 * e.grad.squaredNorm();
    const double slope = (e.hess.transpose() * e.grad).dot(dir);  // d/dt merit(x + t dir) at 0
    double t = 1.0;
    if (o.method == SearchMethod::gradient_descent) {
      const double hn = (e.hess * dir).norm();
      if (hn > 0) t = std::min(1.0, -e.grad.dot(e.hess * dir) / (hn * hn));
      if (!(t > 0)) t = 1.0;
    }
    Eigen::VectorXd xn = x + t * dir;
    double mn = merit(xn);
    int bt = 0;
    while (!(mn <= m0 + 1e-4 * t * std::min(slope, 0.0)) && bt < 60) {
      t *= 0.5;
      xn = x + t * dir;
      mn = merit(xn);
      ++bt;
    }
    if (bt == 60) break;
    r.trajectory.back().step = t * dir.norm();
    x = xn;
    e = f.eval(x, true);
  }
  r.iterations = it;
  r.x = x;
  r.grad_norm = e.grad.size() ? e.grad.cwiseAbs().maxCoeff() : 0.0;
  r.converged = !r.diverged && r.grad_norm <= o.tol;
  r.objective = e.value;
  r.action = e.complex_value;
  r.curv = curvature(e.hess);
  r.solution = f.coefficients(x);
  return r;
}

// Deterministic random start in [-scale, scale]^dim.
inline Eigen::VectorXd random_start(Eigen::Index dim, std::uint64_t seed, double scale = 0.1) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    x(i) = scale * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
  return x;
}

}  // namespace suqcs
