// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "suqcs/cocycles.hpp"
#include "suqcs/random_forms.hpp"

using namespace suqcs;

namespace {

MatForm one_form(const char* a0, const char* a1) {
  return MatForm::chain(std::vector<NCPoly>{NCPoly(word_from_string(a0)), NCPoly(word_from_string(a1))});
}

MatForm alpha_monomial(int k, int l, cplx c) {
  return (c * MatForm::chain(std::vector<NCPoly>{NCPoly(alpha_power(k)), NCPoly(alpha_power(l))})).hermitize();
}

EngineConfig cfg(double q, int m_max = 60, int guard = 12) {
  EngineConfig c;
  c.q = q;
  c.trunc = Truncation(m_max, guard);
  return c;
}

}  // namespace

// phi_2 on monomials against the Fourier integral of the symbols.
TEST(Phi2, MonomialsMatchFourierIntegral) {
  FormSampler S(21);
  for (int k = 0; k < 60; ++k) {
    const Word w0 = S.alpha_word(3), w1 = S.alpha_word(3), w2 = S.alpha_word(3);
    const cplx lhs = CochainEngine::phi2_words(w0, w1, w2);
    const cplx rhs = CochainEngine::phi2_symbols(sigma_q(NCPoly(w0)), sigma_q(NCPoly(w1)), sigma_q(NCPoly(w2)));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-14);
  }
}

TEST(Phi3, BoundaryOfPhi2IsTheFourFoldIntegral) {
  const CochainEngine E(cfg(0.0));
  FormSampler S(22);
  for (int k = 0; k < 30; ++k) {
    const MatForm w = S.form(3, 1 + k % 2, 3, 2);
    EXPECT_NEAR(std::abs(E.phi3(w) - E.phi3_closed(w)), 0.0, 1e-12);
  }
}

TEST(Phi3, VanishesOnBoundariesAndCoboundaries) {
  const CochainEngine E(cfg(0.0));
  FormSampler S(23);
  for (int k = 0; k < 20; ++k) {
    EXPECT_EQ(E.phi3(S.form(4, 1 + k % 2, 2, 2).b()), cplx(0.0));
    EXPECT_EQ(E.phi3(S.form(2, 1 + k % 2, 2, 2).B()), cplx(0.0));
  }
}

TEST(Phi3, ResidueRouteAgrees) {
  const MatForm w = MatForm::chain(std::vector<NCPoly>{NCPoly(alpha_power(-3)), NCPoly(alpha_power(1)),
                                                       NCPoly(alpha_power(2)), NCPoly(alpha_power(0), 2.0)});
  const MatForm v = MatForm::chain(std::vector<NCPoly>{NCPoly(alpha_power(-2)), NCPoly(alpha_power(1)),
                                                       NCPoly(alpha_power(-1)), NCPoly(alpha_power(2))});
  for (double q : {0.0, 0.4}) {
    const CochainEngine E(cfg(q));
    EXPECT_NEAR(std::abs(E.phi3(v) - E.phi3_cm(v)), 0.0, 1e-8) << q;
    EXPECT_NEAR(std::abs(E.phi3(w) - E.phi3_cm(w)), 0.0, 1e-8) << q;
    EXPECT_NE(E.phi3(v), cplx(0.0));
  }
}

TEST(Phi3, CmRouteChecksTheGuard) {
  const CochainEngine E(cfg(0.0, 40, 4));
  const MatForm w = MatForm::chain(std::vector<NCPoly>{NCPoly(alpha_power(-3)), NCPoly(alpha_power(1)),
                                                       NCPoly(alpha_power(1)), NCPoly(alpha_power(1))});
  EXPECT_THROW(E.phi3_cm(w), std::invalid_argument);
}

// Reference values for single-generator forms at q = 0 (independent prototype, residue route).
TEST(Phi1, SingleGeneratorTableAtQZero) {
  const CochainEngine E(cfg(0.0));
  const std::vector<std::pair<MatForm, double>> table{{one_form("a*", "a"), -0.75},
                                                      {one_form("a", "a*"), 0.75},
                                                      {one_form("b*", "b"), 2.0},
                                                      {one_form("b", "b*"), -2.0}};
  for (const auto& [w, v] : table) {
    EXPECT_NEAR(std::abs(E.phi1(w, Phi1Route::symbolic) - v), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(E.phi1(w, Phi1Route::cm) - v), 0.0, 1e-8);
  }
}

// Residue route at q > 0: b* db gives 2/(1 - q^2), a* da stays -3/4.
TEST(Phi1, ResidueRouteClosedValuesForPositiveQ) {
  for (double q : {0.3, 0.6}) {
    const CochainEngine E(cfg(q));
    EXPECT_NEAR(E.phi1(one_form("b*", "b"), Phi1Route::cm).real(), 2.0 / (1 - q * q), 1e-7);
    EXPECT_NEAR(E.phi1(one_form("a*", "a"), Phi1Route::cm).real(), -0.75, 1e-7);
  }
}

TEST(Phi1, ExplicitPhi0RouteIsNeededAtQZero) {
  EngineConfig c = cfg(0.0);
  c.phi0 = Phi0Route::regularized;
  const CochainEngine R(c);
  const CochainEngine X(cfg(0.0));
  const MatForm w = one_form("a*", "a");
  EXPECT_NEAR(std::abs(X.phi1(w, Phi1Route::symbolic) - X.phi1(w, Phi1Route::cm)), 0.0, 1e-8);
  EXPECT_GT(std::abs(R.phi1(w, Phi1Route::symbolic) - R.phi1(w, Phi1Route::cm)), 0.1);
}

TEST(Chi, ImaginaryPartFromTheSecondDerivativeTerm) {
  for (double q : {0.2, 0.5}) {
    const CochainEngine E(cfg(q));
    EXPECT_NEAR(E.chi(one_form("a*", "a")).imag(), 0.5, 1e-15);
    EXPECT_NEAR(E.chi(one_form("a a", "a* a*")).imag(), 2.0, 1e-15);
  }
}

TEST(Tau1, AlphaPowersAtQZero) {
  const CochainEngine E(cfg(0.0));
  // tau_1(a* da) = 0; tau_1 pairs opposite Fourier modes
  EXPECT_EQ(E.tau1(one_form("a*", "a")), cplx(0.0));
}

TEST(H, ExplicitRouteAtQZero) {
  const CochainEngine E(cfg(0.0));
  EXPECT_EQ(E.H(0).regularized, cplx(0.0));
  for (int k = 1; k <= 3; ++k) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += q0_rho(j);
    EXPECT_NEAR(E.H(k).explicit_q0->real(), s, 1e-14);
  }
  EXPECT_NEAR(E.H(1).explicit_q0->real(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(E.H(1).regularized.real(), -2.0 / 3.0, 1e-8);
}

TEST(ClosedForm, Phi3MatchesDirectForScalarForms) {
  const CochainEngine E(cfg(0.0));
  FormSampler S(24);
  for (int k = 0; k < 20; ++k) {
    const MatForm A = S.hermitian_one_form(1, 3, 3, 1.0);
    const cplx direct = E.phi3(A * A.d() + cplx(2.0 / 3.0) * (A * A * A));
    EXPECT_NEAR(std::abs(direct - closed_form_phi3(extract_coeffs(decompose(A).A1))), 0.0, 1e-12);
  }
}

// At q = 0 the closed form with b phi_0 evaluated directly reproduces both routes.
TEST(ClosedForm, Phi1AtQZeroWithDirectBoundaryTerm) {
  const CochainEngine E(cfg(0.0));
  ClosedFormOptions o;
  o.literal_bphi0 = false;
  for (int k = -3; k <= 3; ++k)
    for (int l = -3; l <= 3; ++l)
      for (cplx c : {cplx(1.0), cplx(0.0, 1.0), cplx(0.3, -0.7)}) {
        const MatForm A = alpha_monomial(k, l, c);
        const cplx sym = E.phi1(A, Phi1Route::symbolic);
        EXPECT_NEAR(std::abs(closed_form_phi1(extract_coeffs(decompose(A).A1), o, &E).total() - sym), 0.0, 1e-12)
            << k << ' ' << l;
      }
}

TEST(Action, SplitAgreesWithTotal) {
  const CochainEngine E(cfg(0.0));
  FormSampler S(25);
  for (int k = 0; k < 10; ++k) {
    const ActionBreakdown b = E.action(S.hermitian_one_form(1 + k % 2, 3, 2, 0.5), 2, Phi1Route::symbolic);
    EXPECT_NEAR(std::abs(b.total - *b.split_total), 0.0, 1e-12);
  }
}

TEST(Action, RejectsNonHermitian) {
  const CochainEngine E(cfg(0.0));
  EXPECT_THROW(E.action(one_form("a*", "a"), 1, Phi1Route::symbolic), std::invalid_argument);
}

TEST(Action, ScalarPhaseGaugeIsInvisible) {
  const CochainEngine E(cfg(0.0));
  FormSampler S(26);
  for (int k = 0; k < 5; ++k) {
    const MatForm A = S.hermitian_one_form(2, 2, 2, 0.5);
    NCMatrix ph = NCMatrix::identity(2);
    for (int a = 0; a < 2; ++a) ph(a, a) = NCPoly(cplx(std::cos(0.3 * k), std::sin(0.3 * k)));
    const cplx a = E.action(A, 1, Phi1Route::symbolic).total;
    const cplx b = E.action(gauge(A, ph), 1, Phi1Route::symbolic, false, false).total;
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12);
  }
}

TEST(Index, FundamentalUnitaryIsStable) {
  for (double q : {0.0, 0.3, 0.7})
    for (int m : {30, 50}) {
      const RepContext R(q, Truncation(m, 2));
      const IndexResult r = numeric_index(fundamental_unitary(q), R);
      EXPECT_EQ(r.numeric_index, -1) << q << ' ' << m;
      EXPECT_FALSE(r.indeterminate);
      EXPECT_EQ(r.kernel_dims.first, 0);
    }
}

TEST(Index, CocyclePairingValue) {
  for (double q : {0.0, 0.3}) {
    const CochainEngine E(cfg(q, 60, 8));
    const PairingValue p = cocycle_pairing(fundamental_unitary(q), E, Phi1Route::cm);
    EXPECT_NEAR(std::abs(p.value() - 2.0), 0.0, 1e-8) << q;
    EXPECT_NEAR(std::abs(p.phi3), 0.0, 1e-10);
  }
}

TEST(Index, ZeroThresholdConventionsAreReported) {
  const CochainEngine E(cfg(0.0, 40, 8));
  const IndexResult r = index_pairing(fundamental_unitary(0.0), E, Phi1Route::symbolic);
  ASSERT_TRUE(r.cocycle_value.has_value());
  EXPECT_EQ(r.cocycle_route, "symbolic");
  EXPECT_GT(r.smallest_kept, 10 * r.threshold);
}

TEST(Index, RejectsNonUnitary) {
  const CochainEngine E(cfg(0.0, 40, 8));
  NCMatrix u = fundamental_unitary(0.0);
  u(0, 0) = u(0, 0) * NCPoly(cplx(2.0));
  EXPECT_THROW(index_pairing(u, E, Phi1Route::cm), std::invalid_argument);
}

// The shift of the action equals 2 pi k times the computed pairing of the cocycle with u.
TEST(GaugeShift, EqualsTwoPiLevelTimesPairing) {
  const CochainEngine E(cfg(0.0, 60, 16));
  const NCMatrix u = fundamental_unitary(0.0);
  const cplx pairing = cocycle_pairing(u, E, Phi1Route::symbolic).value();
  FormSampler S(27);
  for (int k = 0; k < 4; ++k) {
    const GaugeShiftReport g = gauge_shift_check(S.hermitian_one_form(2, 2, 2, 0.3), u, E, 3, Phi1Route::symbolic, -1);
    EXPECT_NEAR(std::abs(g.dS - 2.0 * kPi * 3.0 * pairing), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(g.dphi3_part), 0.0, 1e-10);
  }
}

TEST(GaugeFixing, ReductionIsExact) {
  FormSampler S(28);
  GaugePoly h;
  h.terms[{0}] = 1.0;
  h.terms[{0, 1}] = {0.0, 2.0};
  for (int k = 0; k < 10; ++k) {
    MatForm A = alpha_monomial(-1 - k % 2, 1 + k % 2, {1.0, 0.5});
    A += S.form(1, 1, 2, 2);
    const ReductionReport r = reduction_check(h, A);
    EXPECT_TRUE(r.exact_equal);
  }
}

TEST(GaugeFixing, PolynomialVariablesAreIteratedDerivations) {
  GaugePoly x1;
  x1.terms[{1}] = 1.0;
  GaugePoly x0;
  x0.terms[{0}] = 1.0;
  const MatForm A = one_form("a*", "a");
  const NCMatrix v1 = gauge_fixing_eval(x1, A), v0 = gauge_fixing_eval(x0, A);
  EXPECT_EQ(v1(0, 0), delta_symbolic(v0(0, 0)));
}
