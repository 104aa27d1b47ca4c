// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "suqcs/config.hpp"
#include "suqcs/dlsv.hpp"
#include "suqcs/word_expr.hpp"

using namespace suqcs;

TEST(WordParser, SumOfProducts) {
  const NCPoly p = parse_poly("a* a + b* b");
  NCPoly ref = NCPoly(Word{Letter::as, Letter::a}) + NCPoly(Word{Letter::bs, Letter::b});
  EXPECT_EQ(p, ref);
}

TEST(WordParser, LadderLettersBindTheirSign) {
  EXPECT_EQ(parse_poly("a+ a-"), NCPoly(Word{Letter::ap, Letter::am}));
  EXPECT_EQ(parse_poly("a + b"), NCPoly(Word{Letter::a}) + NCPoly(Word{Letter::b}));
  EXPECT_EQ(parse_poly("a+*"), NCPoly(Word{Letter::aps}));
}

TEST(WordParser, ScalarsAndExplicitProducts) {
  EXPECT_EQ(parse_poly("2 a * b"), NCPoly(Word{Letter::a, Letter::b}, 2.0));
  EXPECT_EQ(parse_poly("2i b*"), NCPoly(Word{Letter::bs}, cplx(0.0, 2.0)));
  EXPECT_EQ(parse_poly("-(a - a)"), NCPoly());
  EXPECT_EQ(parse_poly("(a + b)(a - b)"), parse_poly("a a - a b + b a - b b"));
}

TEST(WordParser, ErrorsCarryColumns) {
  auto column = [](const std::string& s) {
    try {
      parse_word(s);
    } catch (const ParseError& e) {
      return static_cast<long>(e.column);
    }
    return -1L;
  };
  EXPECT_EQ(column("((a"), 3);
  EXPECT_EQ(column("a c"), 2);
  EXPECT_EQ(column("a )"), 2);
  EXPECT_EQ(column("a +"), 3);
  EXPECT_EQ(column(""), 0);
}

TEST(WordParser, PrintRoundTrip) {
  for (const char* s : {"a* a + b* b", "a+ a- - 2 b", "(a + b) (a* - 0.5i)", "-(a b) + b+*"}) {
    const WordExpr e = parse_word(s);
    EXPECT_EQ(parse_word(e.print()), e) << s << " -> " << e.print();
  }
}

TEST(ConfigFile, RejectsBadValues) {
  Config c;
  c.q = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.q = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = Config{};
  c.m_max = 30;
  c.guard = 16;
  EXPECT_THROW(c.validate(), ConfigError);
  c = Config{};
  c.phi1_route = "other";
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(Config{}.validate());
}

TEST(ConfigFile, JsonRoundTripAndUnknownKeys) {
  Config c;
  c.q = 0.25;
  c.K = 3;
  c.phi1_route = "cm";
  const Config d = Config::from_json(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
  EXPECT_THROW(Config::from_json({{"mmax", 60}}), ConfigError);
}

TEST(Dlsv, ShellMultiplicities) {
  const DlsvSpectrum sp(6);
  for (const auto& s : sp.shells()) {
    const long n = s.j2 + 1;
    EXPECT_EQ(s.multiplicity, s.up ? n * (n + 1) : n * (n - 1));
  }
  // |lambda| = l + 1/2 carries 2 (lambda^2 - 1/4)
  const ShellSeries full = sp.series(false);
  for (std::size_t i = 0; i < full.lambda.size(); ++i)
    EXPECT_DOUBLE_EQ(full.t[i].real(), 2.0 * (full.lambda[i] * full.lambda[i] - 0.25));
}

TEST(Dlsv, ResiduesMatchHurwitz) {
  const DlsvResidueReport r = dlsv_residues(40);
  EXPECT_NEAR(r.residue_full, 2.0, 1e-6);
  EXPECT_NEAR(r.residue_up, 1.0, 1e-6);
  EXPECT_THROW(dlsv_residues(5), std::invalid_argument);
}
