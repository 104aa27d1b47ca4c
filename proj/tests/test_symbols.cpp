// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <array>
#include <map>

#include "suqcs/random_forms.hpp"
#include "suqcs/symbols.hpp"
#include "suqcs/zeta.hpp"

using namespace suqcs;

TEST(Symbol, MultiplicativeOnWords) {
  FormSampler S(3);
  for (int k = 0; k < 50; ++k) {
    const Word x = S.word(4, false), y = S.word(4, false);
    const FourierPoly lhs = sigma_q(NCPoly(concat(x, y)));
    const FourierPoly rhs = sigma_q(NCPoly(x)) * sigma_q(NCPoly(y));
    EXPECT_EQ(max_abs_diff(lhs, rhs), 0.0);
  }
}

TEST(Symbol, BetaIsKilledAndAlphaIsUnitary) {
  EXPECT_TRUE(sigma_q(NCPoly::letter(Letter::b)).is_zero());
  EXPECT_TRUE(sigma_q(NCPoly::letter(Letter::bs)).is_zero());
  EXPECT_EQ(sigma_q(NCPoly(word_from_string("a a*"))).mean(), cplx(1.0));
  EXPECT_EQ(sigma_q(NCPoly(word_from_string("a* a"))).mean(), cplx(1.0));
  EXPECT_EQ(max_abs_diff(sigma_q(NCPoly::letter(Letter::as)), sigma_q(NCPoly::letter(Letter::a)).star()), 0.0);
}

TEST(Symbol, AlphaMinusCarriesTheSymbol) {
  EXPECT_EQ(max_abs_diff(sigma_q(NCPoly::letter(Letter::am)), sigma_q(NCPoly::letter(Letter::a))), 0.0);
  EXPECT_TRUE(sigma_q(NCPoly::letter(Letter::ap)).is_zero());
}

// sigma(delta^m(b)) = i^m sigma(b)^{(m)}
TEST(Symbol, DeltaBecomesDerivative) {
  for (const char* s : {"a", "a*", "a a a*", "a* a* b a", "a a"}) {
    const NCPoly b(word_from_string(s));
    NCPoly x = to_ladder(b);
    for (int m = 1; m <= 3; ++m) {
      x = delta_symbolic(x);
      cplx im = 1.0;
      for (int j = 0; j < m; ++j) im *= cplx(0, 1);
      EXPECT_LE(max_abs_diff(sigma_q(x), im * sigma_q(b).derivative(m)), 1e-12) << s << " m=" << m;
    }
  }
}

// Residue of b|D|^{-3} against the mean of the symbol.
TEST(Symbol, ResidueIsSymbolMean) {
  for (double q : {0.0, 0.4}) {
    const RepContext R(q, Truncation(60, 6));
    for (const char* s : {"a a*", "a* a", "a a* a* a", "a* b b* a", "b b*", "a a a* a*"}) {
      const NCPoly x(word_from_string(s));
      PoleModel m;
      if (q > 0) m.geometric = q;
      const cplx res = wres(fit_poles(shell_traces(R.poly(x)), m), -3);
      EXPECT_NEAR(std::abs(res - sigma_q(x).mean()), 0.0, 1e-6) << s << " q=" << q;
    }
  }
}

TEST(Decomposition, SplitsTheFormExactly) {
  FormSampler S(5);
  for (int k = 0; k < 20; ++k) {
    const MatForm A = S.form(1, 1 + k % 2, 3, 3);
    const Decomposition d = decompose(A);
    EXPECT_TRUE((d.A1 + d.A2 - A).is_zero());
    // A_2 has no symbol: coefficients cancel within each (entries, powers) class
    std::map<std::array<int, 6>, cplx> cls;
    for (const auto& [t, c] : d.A2.terms()) {
      auto k0 = sigma_word(t[0].w), k1 = sigma_word(t[1].w);
      if (k0 && k1) cls[{t[0].r, t[0].c, *k0, t[1].r, t[1].c, *k1}] += c;
    }
    for (const auto& [key, c] : cls) EXPECT_NEAR(std::abs(c), 0.0, 1e-14);
    for (const auto& [t, c] : d.A1.terms()) {
      EXPECT_TRUE(pure_alpha_power(t[0].w).has_value());
      EXPECT_TRUE(pure_alpha_power(t[1].w).has_value());
    }
  }
}

TEST(Coefficients, PairingRelations) {
  FormSampler S(6);
  for (int k = 0; k < 10; ++k) {
    const ActionCoefficients c = extract_coeffs(decompose(S.hermitian_one_form(1, 3, 3, 1.0)).A1);
    for (const auto& [kl, v] : c.re) EXPECT_NEAR(std::abs(c.Re(-kl.first, -kl.second) - std::conj(v)), 0.0, 1e-14);
    for (const auto& [kl, v] : c.im) EXPECT_NEAR(std::abs(c.Im(-kl.first, -kl.second) + std::conj(v)), 0.0, 1e-14);
  }
}

TEST(Coefficients, JsonRoundTripAndCutoff) {
  ActionCoefficients c;
  c.K = 2;
  ActionCoefficients::bump(c.re, 1, -2, {0.5, 0.25});
  ActionCoefficients::bump(c.im, 0, 2, {0.0, -1.0});
  const ActionCoefficients d = ActionCoefficients::from_json(c.to_json());
  EXPECT_EQ(d.Re(1, -2), c.Re(1, -2));
  EXPECT_EQ(d.Im(0, 2), c.Im(0, 2));
  nlohmann::json bad = c.to_json();
  bad["K"] = 1;
  EXPECT_THROW(ActionCoefficients::from_json(bad), std::invalid_argument);
}

TEST(Lift, SymbolOfLiftIsIdentity) {
  FourierPoly f;
  f.add(-2, {1, 2});
  f.add(0, 3.0);
  f.add(3, {0, -1});
  EXPECT_EQ(max_abs_diff(sigma_q(lift(f)), f), 0.0);
}
