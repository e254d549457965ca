#include "orbitlet/error.hpp"
#include "orbitlet/rational.hpp"

#include <gtest/gtest.h>

using namespace orbitlet;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-0.05e1"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("007"), Rational(7));
  EXPECT_EQ(to_string(parse_rational("6/-4")), "-3/2");
}

TEST(Rational, RejectsGarbage) {
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(Rational, FloorIsExactOnNegatives) {
  EXPECT_EQ(floor_to_int(Rational(-7, 2)), -4);
  EXPECT_EQ(floor_to_int(Rational(7, 2)), 3);
  EXPECT_EQ(floor_to_int(Rational(12)), 12);
}

TEST(Rational, SnapRecoversShortFractions) {
  EXPECT_EQ(snap_rational(0.5), Rational(1, 2));
  EXPECT_EQ(snap_rational(1.0 / 3.0), Rational(1, 3));
  EXPECT_EQ(snap_rational(-2.75), Rational(-11, 4));
  // Irrational input falls back to the binary value, which round-trips exactly.
  const double x = 0.1234567890123456;
  EXPECT_EQ(to_double(snap_rational(x, 1000, 1e-15)), x);
}

TEST(RationalMatrix, RankNullspaceAndInverse) {
  QMatrix m = QMatrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}}, 3);
  EXPECT_EQ(rank(m), 2);
  const auto ns = nullspace(m);
  ASSERT_EQ(ns.size(), 1u);
  const QVector z = m * ns[0];
  for (const auto& v : z) EXPECT_EQ(v, 0);
  EXPECT_FALSE(inverse(m).has_value());

  QMatrix a = QMatrix::from_rows({{2, 1}, {1, 1}}, 2);
  const auto ai = inverse(a);
  ASSERT_TRUE(ai.has_value());
  const QMatrix id = a * *ai;
  EXPECT_EQ(id(0, 0), 1);
  EXPECT_EQ(id(0, 1), 0);
  EXPECT_EQ(id(1, 0), 0);
  EXPECT_EQ(id(1, 1), 1);
}

TEST(RationalMatrix, SolveAndSpan) {
  QMatrix a = QMatrix::from_rows({{1, 1}, {1, -1}}, 2);
  const auto x = solve(a, {3, 1});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0], 2);
  EXPECT_EQ((*x)[1], 1);
  EXPECT_TRUE(in_span({{1, 0, 1}, {0, 1, 1}}, {2, 3, 5}, 3));
  EXPECT_FALSE(in_span({{1, 0, 1}, {0, 1, 1}}, {0, 0, 1}, 3));
}

TEST(RationalMatrix, InertiaOfSmallForms) {
  // diag(1, 1): rank 2, |signature| 2; [[0,1],[1,0]]: rank 2, signature 0; diag(1, 0): rank 1.
  EXPECT_EQ(inertia(QMatrix::from_rows({{1, 0}, {0, 1}}, 2)).abs_signature(), 2);
  const Inertia hyp = inertia(QMatrix::from_rows({{0, 1}, {1, 0}}, 2));
  EXPECT_EQ(hyp.rank(), 2);
  EXPECT_EQ(hyp.abs_signature(), 0);
  const Inertia deg = inertia(QMatrix::from_rows({{1, 0}, {0, 0}}, 2));
  EXPECT_EQ(deg.rank(), 1);
  EXPECT_EQ(deg.abs_signature(), 1);
  // Congruence invariance: P^T diag(1,-1,2) P with a unimodular P keeps (3, 1).
  QMatrix d = QMatrix::from_rows({{1, 0, 0}, {0, -1, 0}, {0, 0, 2}}, 3);
  QMatrix p = QMatrix::from_rows({{1, 2, 0}, {0, 1, 3}, {1, 0, 1}}, 3);
  const Inertia c = inertia(p.transpose() * d * p);
  EXPECT_EQ(c.rank(), 3);
  EXPECT_EQ(c.abs_signature(), 1);
}
