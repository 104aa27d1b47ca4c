// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "suqcs/forms.hpp"
#include "suqcs/random_forms.hpp"

using namespace suqcs;

class FormIdentities : public ::testing::TestWithParam<int> {};

TEST_P(FormIdentities, BicomplexAndInvolution) {
  FormSampler S(1000 + GetParam());
  const int N = 1 + GetParam() % 3;
  for (int deg = 0; deg <= 3; ++deg) {
    const MatForm w = S.form(deg, N, 2, 2);
    const MatForm v = S.form(GetParam() % 3, N, 1, 2);
    EXPECT_TRUE(w.d().d().is_zero());
    EXPECT_TRUE(w.b().b().is_zero());
    EXPECT_TRUE(w.B().B().is_zero());
    if (deg > 0) {
      EXPECT_TRUE((w.B().b() + w.b().B()).is_zero());
    }
    EXPECT_TRUE((w.star().star() - w).is_zero());
    const cplx sg = deg % 2 ? -1.0 : 1.0;
    EXPECT_TRUE(((w * v).d() - w.d() * v - sg * (w * v.d())).is_zero());
    EXPECT_TRUE(((w * v).star() - v.star() * w.star()).is_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, FormIdentities, ::testing::Range(0, 30));

TEST(Forms, DOfOneVanishes) {
  EXPECT_TRUE(MatForm::from_matrix(NCMatrix::identity(2)).d().is_zero());
  EXPECT_TRUE(MatForm::from_poly(NCPoly::one()).d().is_zero());
}

TEST(Forms, ProductIsAssociative) {
  FormSampler S(7);
  for (int k = 0; k < 10; ++k) {
    const MatForm x = S.form(1, 2, 1, 1), y = S.form(0, 2, 1, 2), z = S.form(1, 2, 1, 1);
    EXPECT_TRUE(((x * y) * z - x * (y * z)).is_zero());
  }
}

TEST(Forms, HermitizeGivesHermitian) {
  FormSampler S(8);
  for (int k = 0; k < 10; ++k) EXPECT_TRUE(S.form(1, 2, 2, 2).hermitize().is_hermitian());
}

TEST(Forms, GaugeByIdentityIsTrivial) {
  FormSampler S(9);
  const MatForm A = S.form(1, 2, 2, 2);
  EXPECT_TRUE((gauge(A, NCMatrix::identity(2)) - A).is_zero());
}

TEST(Forms, JsonRoundTrip) {
  FormSampler S(10);
  const MatForm w = S.form(2, 2, 3, 2);
  EXPECT_TRUE((MatForm::from_json(w.to_json()) - w).is_zero());
}

TEST(Forms, RepresentationIsMultiplicativeInDegreeZero) {
  const RepContext R(0.3, Truncation(20, 6));
  FormSampler S(11);
  const NCMatrix x = S.matrix(2, 2, 2), y = S.matrix(2, 2, 2);
  const OpMatrix lhs = represent_matrix(x * y, R);
  const OpMatrix rhs = represent_matrix(x, R) * represent_matrix(y, R);
  EXPECT_LE((lhs - rhs).max_abs_interior(), 1e-12);
}

// pi(a0 da1) = pi(a0)[D, pi(a1)] and b of a 1-form becomes a commutator of operators.
TEST(Forms, RepresentationOfBoundary) {
  const RepContext R(0.0, Truncation(20, 6));
  const NCPoly a0(word_from_string("a b")), a1(word_from_string("a*"));
  const MatForm w = MatForm::chain(std::vector<NCPoly>{a0, a1});
  const OpMatrix lhs = represent(w.b(), R);
  const ShiftOp rhs = R.poly(a0) * R.poly(a1) - R.poly(a1) * R.poly(a0);
  EXPECT_LE((lhs(0, 0) - rhs).max_abs_interior(), 1e-12);
}
