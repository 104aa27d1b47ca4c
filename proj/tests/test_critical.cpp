// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "suqcs/critical.hpp"

using namespace suqcs;

namespace {

StationaryProblem base(int K, bool with_linear) {
  StationaryProblem p;
  p.K = K;
  p.level = 2;
  if (with_linear) {
    ClosedFormOptions o;
    p.linear = closed_form_linear(p, o);
  }
  return p;
}

}  // namespace

TEST(Stationary, ZeroIsStationaryWithoutLinearTerm) {
  const StationaryObjective f(base(2, false));
  const RealEval e = f.eval(Eigen::VectorXd::Zero(f.dim()));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.grad.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Stationary, GradientAtZeroIsTheLinearTerm) {
  const StationaryObjective f(base(1, true));
  const RealEval e = f.eval(Eigen::VectorXd::Zero(f.dim()));
  EXPECT_GT(e.grad.norm(), 0.0);
  EXPECT_LT((e.grad - central_difference_gradient(f, Eigen::VectorXd::Zero(f.dim()))).norm(), 1e-8);
}

TEST(Stationary, GradientMatchesFiniteDifferences) {
  for (bool herm : {false, true}) {
    StationaryProblem p = base(2, true);
    p.hermitian = herm;
    const StationaryObjective f(p);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Eigen::VectorXd x = random_start(f.dim(), 100 + s, 0.5);
      const Eigen::VectorXd g = f.eval(x).grad;
      EXPECT_LT((g - central_difference_gradient(f, x)).norm(), 1e-6 * std::max(1.0, g.norm())) << herm;
    }
  }
}

TEST(Stationary, HessianMatchesFiniteDifferences) {
  StationaryProblem p = base(1, true);
  p.ridge = 0.2;
  const StationaryObjective f(p);
  const Eigen::VectorXd x = random_start(f.dim(), 7, 0.5);
  const Eigen::MatrixXd H = f.eval(x, true).hess;
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < f.dim(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const Eigen::VectorXd col = (f.eval(xp).grad - f.eval(xm).grad) / (2 * h);
    EXPECT_LT((H.col(i) - col).norm(), 1e-6 * std::max(1.0, col.norm()));
  }
  EXPECT_LT((H - H.transpose()).norm(), 1e-12);
}

TEST(Stationary, HermitianParametrizationHasRealAction) {
  StationaryProblem p = base(2, false);
  p.hermitian = true;
  const StationaryObjective f(p);
  EXPECT_EQ(f.dim(), p.full_real_dim() / 2);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const RealEval e = f.eval(random_start(f.dim(), s, 0.5));
    EXPECT_NEAR(e.complex_value.imag(), 0.0, 1e-12 * std::max(1.0, std::abs(e.complex_value)));
  }
}

TEST(Stationary, CoefficientRoundTrip) {
  const StationaryObjective f(base(2, false));
  const Eigen::VectorXd x = random_start(f.dim(), 3, 1.0);
  EXPECT_LT((f.point(f.coefficients(x)) - x).norm(), 1e-12);
}

TEST(Stationary, QuadraticOracleBothMethods) {
  StationaryProblem p = base(1, true);
  p.cubic = false;
  p.ridge = 0.7;
  const StationaryObjective f(p);
  const RealEval e0 = f.eval(Eigen::VectorXd::Zero(f.dim()), true);
  const Eigen::VectorXd oracle = e0.hess.fullPivLu().solve(-e0.grad);
  for (SearchMethod m : {SearchMethod::damped_newton, SearchMethod::gradient_descent}) {
    SearchOptions o;
    o.method = m;
    o.max_iter = 20000;
    o.tol = 1e-11;
    const StationaryReport r = find_stationary(f, random_start(f.dim(), 11, 0.2), o);
    EXPECT_TRUE(r.converged) << to_string(m);
    EXPECT_LT((r.x - oracle).cwiseAbs().maxCoeff(), 1e-6) << to_string(m);
  }
}

// One active diagonal cell: the action is a one-variable polynomial, fitted from four samples.
TEST(Stationary, SingleModeMatchesPolynomialRoots) {
  for (int k : {1, 2}) {
    StationaryProblem p = base(2, true);
    p.mask.assign(static_cast<std::size_t>(p.complex_dim()), false);
    const int z = p.cells() + p.cell(k, k);
    p.mask[static_cast<std::size_t>(z)] = true;
    const StationaryObjective f(p);
    ASSERT_EQ(f.dim(), 2);
    auto S = [&](cplx w) {
      ActionCoefficients c;
      c.K = p.K;
      ActionCoefficients::bump(c.im, k, k, w);
      return f.eval(f.point(c)).complex_value;
    };
    Eigen::Matrix4cd V;
    Eigen::Vector4cd y;
    const cplx pts[4] = {0.0, 1.0, -1.0, 2.0};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) V(i, j) = std::pow(pts[i], j);
      y(i) = S(pts[i]);
    }
    const Eigen::Vector4cd c = V.fullPivLu().solve(y);
    ASSERT_GT(std::abs(c(3)), 1e-9);
    const cplx disc = std::sqrt(c(2) * c(2) - 3.0 * c(3) * c(1));
    const cplx r1 = (-c(2) + disc) / (3.0 * c(3)), r2 = (-c(2) - disc) / (3.0 * c(3));
    SearchOptions o;
    o.tol = 1e-12;
    const StationaryReport r = find_stationary(f, random_start(f.dim(), 5, 0.3), o);
    ASSERT_TRUE(r.converged);
    const cplx w = f.cells(r.x)(z);
    EXPECT_LT(std::min(std::abs(w - r1), std::abs(w - r2)), 1e-8) << k;
  }
}

TEST(Stationary, Deterministic) {
  const StationaryObjective f(base(1, true));
  SearchOptions o;
  const std::string a = find_stationary(f, random_start(f.dim(), 9, 0.3), o).to_json().dump();
  const std::string b = find_stationary(f, random_start(f.dim(), 9, 0.3), o).to_json().dump();
  EXPECT_EQ(a, b);
}

TEST(Curvature, ClassifiesDefiniteness) {
  EXPECT_EQ(curvature(Eigen::Matrix2d::Identity()).kind, "minimum");
  EXPECT_EQ(curvature(-Eigen::Matrix2d::Identity()).kind, "maximum");
  EXPECT_EQ(curvature(Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix()).kind, "saddle");
  EXPECT_EQ(curvature(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()).kind, "degenerate");
}
