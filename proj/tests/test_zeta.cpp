// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "suqcs/shift_op.hpp"
#include "suqcs/zeta.hpp"

using namespace suqcs;

namespace {
ShellSeries synthetic(int M, const std::function<double(double)>& f) {
  ShellSeries s;
  for (int m = 1; m <= M; ++m) {
    s.lambda.push_back(m);
    s.t.push_back(f(m));
    s.boundary.push_back(false);
  }
  return s;
}
}  // namespace

TEST(PoleFit, RecoversLaurentCoefficients) {
  const ShellSeries s = synthetic(80, [](double m) { return 3 * m * m - 2 * m + 5 + 0.7 / m - 0.2 / (m * m); });
  const PoleFit f = fit_poles(s);
  EXPECT_NEAR(f.c2().real(), 3.0, 1e-9);
  EXPECT_NEAR(f.c1().real(), -2.0, 1e-8);
  EXPECT_NEAR(f.c0().real(), 5.0, 1e-7);
  EXPECT_NEAR(f.c_neg1().real(), 0.7, 1e-5);
}

TEST(PoleFit, GeometricTermIsAbsorbed) {
  const double q = 0.6;
  const ShellSeries s = synthetic(60, [&](double m) { return m * m + 4.0 * std::pow(q, m); });
  PoleModel model;
  model.min_power = 0;
  model.geometric = q;
  model.m_lo = 8;
  const PoleFit f = fit_poles(s, model);
  EXPECT_NEAR(f.c2().real(), 1.0, 1e-10);
  EXPECT_NEAR(f.c0().real(), 0.0, 1e-8);
}

TEST(PoleFit, LogCoefficientGivesTau1) {
  const ShellSeries s = synthetic(80, [](double m) { return 2 * m * m * std::log(m) + m * m; });
  PoleModel model;
  model.log_order = 1;
  model.min_power = 0;
  const PoleFit f = fit_poles(s, model);
  // tau_k = k!/2^{k+1} times the coefficient of m^{-y-1} log^k m
  EXPECT_NEAR(tau_residue(f, -3, 1).real(), 0.5, 1e-7);
  EXPECT_NEAR(tau_residue(f, -3, 0).real(), 0.5, 1e-7);
  EXPECT_NEAR(wres(f, -3).real(), 1.0, 1e-7);
}

TEST(PoleFit, TooFewShellsThrows) {
  const ShellSeries s = synthetic(14, [](double m) { return m; });
  EXPECT_THROW(fit_poles(s), FitError);
}

TEST(RegularizedTrace, ZetaValuesAtNegativeIntegers) {
  PoleModel m;
  m.min_power = 0;
  {
    const ShellSeries s = synthetic(60, [](double x) { return x; });
    EXPECT_NEAR(phi0_reg(s, fit_poles(s, m)).value.real(), -1.0 / 12.0, 1e-9);
  }
  {
    const ShellSeries s = synthetic(60, [](double x) { return x * x + std::pow(0.5, x); });
    PoleModel g = m;
    g.geometric = 0.5;
    g.m_lo = 10;
    // zeta(-2) = 0 and sum_{m>=1} 2^{-m} = 1
    EXPECT_NEAR(phi0_reg(s, fit_poles(s, g)).value.real(), 1.0, 1e-9);
  }
}

TEST(RegularizedTrace, RejectsHarmonicTerm) {
  const ShellSeries s = synthetic(60, [](double x) { return 1.0 / x; });
  PoleModel m;
  m.min_power = -1;
  EXPECT_THROW(phi0_reg(s, fit_poles(s, m)), std::runtime_error);
}

TEST(ConvergentTrace, ShellCountOracle) {
  const RepContext R(0.0, Truncation(60, 2));
  const ShellSeries s = shell_traces(ShiftOp::identity(R.trunc()));
  PoleModel m;
  m.min_power = 0;
  const cplx v = convergent_trace(s, fit_poles(s, m), -4);
  const double exact = std::riemann_zeta(2.0) + 2 * std::riemann_zeta(3.0) + std::riemann_zeta(4.0);
  EXPECT_NEAR(v.real(), exact, 1e-12);
}

TEST(Series, FOneClosedForm) {
  for (int k = 1; k <= 9; ++k) {
    const double q = 0.1 * k;
    EXPECT_NEAR(F_k(1, q).value, -q * q / (1 - q * q), 1e-12);
  }
}

// Independent oracle: brute-force partial sums with many terms.
TEST(Series, FkMatchesBruteForce) {
  for (double q : {0.3, 0.7})
    for (int k = 2; k <= 4; ++k) {
      double s = 0.0;
      for (int x = 0; x < 20000; ++x) {
        double p = 1.0;
        for (int j = 1; j <= k; ++j) p *= 1.0 - std::pow(q, 2.0 * (x + j));
        s += p - 1.0;
      }
      const SeriesValue v = F_k(k, q);
      EXPECT_NEAR(v.value, s, 1e-12);
      EXPECT_LE(v.tail_bound, 1e-14);
    }
}

TEST(Series, FkAtZeroIsZero) { EXPECT_EQ(F_k(3, 0.0).value, 0.0); }

TEST(Tau0, AlphaPairsShiftFkByOne) {
  for (double q : {0.2, 0.6})
    for (int k = 1; k <= 3; ++k) {
      const Word w = concat(alpha_power(k), alpha_power(-k));
      EXPECT_NEAR(tau0_pi_minus(NCPoly(w), q).value.real(), 1.0 + F_k(k, q).value, 1e-12);
    }
}

TEST(Tau0, DiskTau1OfUnitAndBeta) {
  EXPECT_EQ(disk_tau1({}), 1.0);
  EXPECT_EQ(disk_tau1({Letter::b}), 0.0);
}

TEST(DimensionSpectrum, ResiduesOneTwoOne) {
  const Truncation t(80, 2);
  const PoleFit f = fit_poles(shell_traces(ShiftOp::identity(t)));
  EXPECT_NEAR(wres(f, -3).real(), 1.0, 1e-6);
  EXPECT_NEAR(wres(f, -2).real(), 2.0, 1e-6);
  EXPECT_NEAR(wres(f, -1).real(), 1.0, 1e-6);
}

TEST(ShellSeries, BoundaryShellsAreFlagged) {
  const RepContext R(0.2, Truncation(30, 4));
  const ShellSeries s = shell_traces(R.word(word_from_string("a a*")));
  ASSERT_EQ(s.size(), 30u);
  EXPECT_FALSE(s.boundary[27]);
  EXPECT_TRUE(s.boundary[29]);
}
