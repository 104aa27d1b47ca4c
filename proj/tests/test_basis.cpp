// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "suqcs/basis.hpp"

using namespace suqcs;

TEST(Basis, DenseIndexIsBijective) {
  const Truncation t(12, 2);
  std::size_t k = 0;
  for (int m = 0; m <= t.m_max; ++m)
    for (int i2 = -m; i2 <= m; i2 += 2)
      for (int j2 = -m; j2 <= m; j2 += 2) {
        const BasisIndex e{m, i2, j2};
        ASSERT_EQ(t.index(e), k);
        ASSERT_EQ(t.label(k).m, m);
        ASSERT_EQ(t.label(k).i2, i2);
        ASSERT_EQ(t.label(k).j2, j2);
        ++k;
      }
  EXPECT_EQ(k, t.dim());
}

TEST(Basis, ShellSizesAreSquares) {
  for (int m = 0; m < 20; ++m) EXPECT_EQ(shell_size(m), static_cast<std::size_t>((m + 1) * (m + 1)));
}

TEST(Basis, TruncationRejectsBadGuard) {
  EXPECT_THROW(Truncation(4, 5), std::invalid_argument);
  EXPECT_THROW(Truncation(10, -1), std::invalid_argument);
}

TEST(Basis, ParityMismatchIsInvalid) {
  EXPECT_FALSE((BasisIndex{2, 1, 0}.valid()));
  EXPECT_FALSE((BasisIndex{1, 3, 1}.valid()));
  EXPECT_TRUE((BasisIndex{1, -1, 1}.valid()));
}

// At q = 0 only a few coefficients survive: a_- = 1 unless killed, a_+ = 0, b_+- are 0 or +-1.
TEST(Ladder, QZeroTable) {
  for (int m = 1; m <= 8; ++m)
    for (int i2 = -m; i2 <= m; i2 += 2)
      for (int j2 = -m; j2 <= m; j2 += 2) {
        EXPECT_EQ(ladder_coeff2(Ladder::a_plus, m, i2, j2, 0.0), 0.0);
        const double am = ladder_coeff2(Ladder::a_minus, m, i2, j2, 0.0);
        EXPECT_TRUE(am == 0.0 || am == 1.0);
        EXPECT_EQ(am == 1.0, i2 != -m && j2 != -m);
        const double bp = ladder_coeff2(Ladder::b_plus, m, i2, j2, 0.0);
        EXPECT_EQ(bp, j2 == -m ? -1.0 : 0.0);
        const double bm = ladder_coeff2(Ladder::b_minus, m, i2, j2, 0.0);
        EXPECT_EQ(bm, (i2 == -m && j2 != -m) ? 1.0 : 0.0);
      }
}

TEST(Ladder, HalfIntegerFrontEndMatchesDoubled) {
  for (double q : {0.0, 0.3, 0.8})
    for (int m = 1; m <= 6; ++m)
      for (int i2 = -m; i2 <= m; i2 += 2)
        for (int j2 = -m; j2 <= m; j2 += 2)
          for (Ladder L : {Ladder::a_plus, Ladder::a_minus, Ladder::b_plus, Ladder::b_minus})
            EXPECT_EQ(ladder_coeff(L, m / 2.0, i2 / 2.0, j2 / 2.0, q), ladder_coeff2(L, m, i2, j2, q));
}

TEST(Ladder, DomainErrors) {
  EXPECT_THROW(ladder_coeff(Ladder::a_plus, 1.0, 0.5, 0.0, 0.5), std::domain_error);
  EXPECT_THROW(ladder_coeff(Ladder::a_plus, 1.0, 0.0, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(ladder_coeff(Ladder::a_plus, 1.0, 0.0, 0.0, -0.1), std::domain_error);
  EXPECT_THROW(ladder_coeff(Ladder::a_plus, 0.25, 0.0, 0.0, 0.1), std::domain_error);
}

TEST(Ladder, CoefficientsAreBoundedByOne) {
  for (double q : {0.1, 0.5, 0.95})
    for (int m = 0; m <= 30; ++m)
      for (int i2 = -m; i2 <= m; i2 += 2)
        for (int j2 = -m; j2 <= m; j2 += 2)
          for (Ladder L : {Ladder::a_plus, Ladder::a_minus, Ladder::b_plus, Ladder::b_minus})
            EXPECT_LE(std::abs(ladder_coeff2(L, m, i2, j2, q)), 1.0 + 1e-15);
}
