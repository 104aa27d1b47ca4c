// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "suqcs/forms.hpp"
#include "suqcs/seq_op.hpp"
#include "suqcs/shift_op.hpp"
#include "suqcs/symbols.hpp"

using namespace suqcs;

class Relations : public ::testing::TestWithParam<double> {};

TEST_P(Relations, HoldOnTheInterior) {
  const RelationReport r = relation_residual(GetParam(), Truncation(40, 2));
  for (std::size_t k = 0; k < r.residual.size(); ++k) EXPECT_LE(r.residual[k], 1e-12) << RelationReport::names[k];
}

INSTANTIATE_TEST_SUITE_P(Q, Relations, ::testing::Values(0.0, 0.2, 0.5, 0.9, 0.99));

TEST(Representation, AdjointLettersAreAdjoints) {
  const RepContext R(0.4, Truncation(16, 4));
  for (Letter l : {Letter::a, Letter::b, Letter::ap, Letter::am, Letter::bp, Letter::bm}) {
    const ShiftOp x = R.letter(l), xs = R.letter(adjoint(l));
    EXPECT_EQ((x.adjoint() - xs).max_abs(16), 0.0) << letter_name(l);
  }
}

TEST(Representation, LaddersSumToGenerators) {
  const RepContext R(0.6, Truncation(16, 4));
  EXPECT_EQ((R.letter(Letter::a) - R.letter(Letter::ap) - R.letter(Letter::am)).max_abs(16), 0.0);
  EXPECT_EQ((R.letter(Letter::b) - R.letter(Letter::bp) - R.letter(Letter::bm)).max_abs(16), 0.0);
}

TEST(Representation, UnitarityOfFundamentalMatrix) {
  for (double q : {0.0, 0.35, 0.8}) {
    const RepContext R(q, Truncation(24, 4));
    EXPECT_LE(unitarity_residual(fundamental_unitary(q), R), 1e-12) << q;
  }
}

TEST(Dirac, SignAndKernel) {
  const Truncation t(6, 2);
  const DiracData d = dirac(t);
  for (std::size_t k = 0; k < t.dim(); ++k) {
    const BasisIndex e = t.label(k);
    EXPECT_EQ(d.absD.diag(k).real(), e.m);
    EXPECT_EQ(d.F.diag(k).real(), e.i2 == e.m ? 1.0 : -1.0);  // +1 on the kernel too
    EXPECT_EQ(d.P.diag(k).real(), e.i2 == e.m ? 1.0 : 0.0);
  }
}

// [|D|, x] computed on the operator agrees with the symbolic degree derivation.
TEST(Derivations, DeltaMatchesLadderDegree) {
  const RepContext R(0.45, Truncation(20, 6));
  for (const char* s : {"a", "b*", "a a*", "b a b*", "a* a* b"}) {
    const NCPoly x(word_from_string(s));
    const ShiftOp numeric = R.delta(R.poly(x));
    const ShiftOp symbolic = R.poly(delta_symbolic(x));
    EXPECT_LE((numeric - symbolic).max_abs_interior(), 1e-12) << s;
  }
}

TEST(Derivations, NablaIsCommutatorWithDSquared) {
  const RepContext R(0.3, Truncation(16, 4));
  const ShiftOp a = R.letter(Letter::a);
  const ShiftOp lhs = R.nabla(a);
  const ShiftOp D2 = ShiftOp::diagonal(R.trunc(), [](const BasisIndex& e) { return cplx(e.m * e.m); });
  EXPECT_LE((lhs - (D2 * a - a * D2)).max_abs_interior(), 1e-12);
}

TEST(Disk, PiPlusMinusSatisfyTheRelations) {
  for (double q : {0.0, 0.5}) {
    for (int sign : {+1, -1}) {
      const int X = 30;
      auto P = [&](const char* s) { return pi_pm(NCPoly(word_from_string(s)), sign, q, X); };
      const SeqOp r1 = axpy(1.0, P("a* a"), 1.0, P("b* b"));
      const SeqOp r2 = axpy(1.0, P("a a*"), q * q, P("b b*"));
      for (int x = 0; x < X - 2; ++x)
        for (int y = 0; y < X - 2; ++y) {
          EXPECT_NEAR(std::abs(r1.entry(y, x) - cplx(x == y)), 0.0, 1e-12);
          EXPECT_NEAR(std::abs(r2.entry(y, x) - cplx(x == y)), 0.0, 1e-12);
        }
    }
  }
}

TEST(Disk, DiagonalShortcutAgreesWithMatrix) {
  const double q = 0.4;
  const Word w = word_from_string("a a b* a* b a*");
  const SeqOp M = pi_pm(NCPoly(w), -1, q, 40);
  for (int x = 0; x < 30; ++x) EXPECT_NEAR(std::abs(M.entry(x, x) - pi_pm_diag(w, -1, q, x)), 0.0, 1e-14);
}

TEST(ShiftOpJson, RoundTrip) {
  const RepContext R(0.25, Truncation(8, 4));
  const ShiftOp x = R.word(word_from_string("a b*"));
  const ShiftOp y = ShiftOp::from_json(x.to_json());
  EXPECT_EQ((x - y).max_abs(8), 0.0);
}
