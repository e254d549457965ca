#include "orbitlet/algebra.hpp"
#include "orbitlet/error.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace orbitlet;
using namespace orbitlet::algebra;

namespace {

QVector q(std::initializer_list<Rational> v) { return QVector(v); }

// Independent oracle: product in R[X]/(X^d) by truncated polynomial convolution.
QVector poly_mul(const QVector& a, const QVector& b) {
  QVector out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

TEST(Algebra, TruncatedPolynomialProducts) {
  const auto a = truncated_polynomial(3);
  EXPECT_EQ(multiply(a, q({0, 1, 0}), q({0, 1, 0})), q({0, 0, 1}));
  EXPECT_EQ(multiply(a, q({0, 1, 0}), q({0, 0, 1})), q({0, 0, 0}));
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> u(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    QVector x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)};
    EXPECT_EQ(multiply(a, x, y), poly_mul(x, y));
    EXPECT_EQ(multiply(a, a.unit_exact(), x), x);
  }
}

TEST(Algebra, RegularRepresentationOfUnitIsIdentity) {
  const auto a = h_algebra(Rational(1));
  const QMatrix rho = regular_representation(a, a.unit_exact());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(rho(i, j), i == j ? 1 : 0);
}

TEST(Algebra, UnitsAndInverses) {
  const auto a = truncated_polynomial(3);
  EXPECT_TRUE(is_unit(a, a.unit_exact()));
  EXPECT_FALSE(is_unit(a, q({0, 1, 0})));
  // det rho(2 + X) = 2^3 = 8.
  const QMatrix rho = regular_representation(a, q({2, 1, 0}));
  Rational det = 1;
  for (int i = 0; i < 3; ++i) det *= rho(i, i);  // triangular in the monomial basis
  EXPECT_EQ(det, 8);
  EXPECT_TRUE(is_unit(a, q({2, 1, 0})));
  EXPECT_EQ(invert(a, q({1, 1, 0})), q({1, -1, 1}));
  EXPECT_EQ(invert(a, q({2, 0, 0})), q({Rational(1, 2), 0, 0}));
  EXPECT_EQ(poly_mul(q({1, 1, 0}), invert(a, q({1, 1, 0}))), q({1, 0, 0}));
  const Vector inv = invert(a, Vector::Unit(3, 0) * 2.0 + Vector::Unit(3, 1));
  EXPECT_NEAR(inv[0], 0.5, 1e-14);
  EXPECT_NEAR(inv[1], -0.25, 1e-14);
  EXPECT_NEAR(inv[2], 0.125, 1e-14);
}

TEST(Algebra, NilradicalPowerDims) {
  const auto t = nilradical(truncated_polynomial(4));
  EXPECT_EQ(t.power_dims, (std::vector<int>{3, 2, 1, 0}));
  EXPECT_EQ(t.nilpotency_class, 4);
  const auto s = nilradical(trivial_extension(4));
  EXPECT_EQ(s.power_dims, (std::vector<int>{3, 0}));
  EXPECT_EQ(s.nilpotency_class, 2);
  const auto h = nilradical(h_algebra(Rational(-1)));
  EXPECT_EQ(h.power_dims, (std::vector<int>{3, 1, 0}));
  EXPECT_EQ(h.nilpotency_class, 3);
}

TEST(Algebra, AdaptedBasisOfCatalogIsMonomial) {
  const auto b = adapted_basis(truncated_polynomial(3));
  ASSERT_EQ(b.size(), 3u);
  // The tail spans must be ideals: X^k A lies in span(b_k, ..., b_{d-1}).
  const auto a = truncated_polynomial(3);
  for (std::size_t k = 1; k < b.size(); ++k) {
    std::vector<QVector> tail(b.begin() + static_cast<long>(k), b.end());
    for (const auto& z : b) EXPECT_TRUE(in_span(tail, multiply(a, b[k], z), 3));
  }
  EXPECT_EQ(b[0], a.unit_exact());
}

TEST(Algebra, AdaptedBasisAfterScrambling) {
  // Present R[X]/(X^3) in the basis (X + X^2, 1 + X, X^2) and recover an adapted basis.
  const auto base = truncated_polynomial(3);
  const auto scrambled = change_basis(base, {q({0, 1, 1}), q({1, 1, 0}), q({0, 0, 1})});
  EXPECT_EQ(isomorphism_invariants(scrambled), isomorphism_invariants(base));
  const auto b = adapted_basis(scrambled);
  const auto adapted = change_basis(scrambled, b);
  EXPECT_EQ(adapted.unit_index(), std::optional<int>(0));
  EXPECT_EQ(nilradical(adapted).power_dims, (std::vector<int>{2, 1, 0}));
}

TEST(Algebra, FormInvariantSeparatesHAlgebras) {
  const auto r1 = isomorphism_invariants(h_algebra(Rational(1)));
  ASSERT_TRUE(r1.form_rank && r1.form_abs_signature);
  EXPECT_EQ(*r1.form_rank, 2);
  EXPECT_EQ(*r1.form_abs_signature, 2);
  const auto rm = isomorphism_invariants(h_algebra(Rational(-1)));
  EXPECT_EQ(*rm.form_rank, 2);
  EXPECT_EQ(*rm.form_abs_signature, 0);
  const auto r0 = isomorphism_invariants(h_algebra(Rational(0)));
  EXPECT_EQ(*r0.form_rank, 1);
  EXPECT_EQ(*r0.form_abs_signature, 1);
  // a = 4 is a positive square multiple of a = 1.
  EXPECT_EQ(isomorphism_invariants(h_algebra(Rational(4))), r1);
}

TEST(Algebra, DirectSums) {
  const auto rr = direct_sum({reals(), reals()});
  EXPECT_EQ(rr.dim(), 2);
  EXPECT_EQ(multiply(rr, q({2, 3}), q({5, 7})), q({10, 21}));
  const auto mixed = direct_sum({truncated_polynomial(2), reals()});
  EXPECT_EQ(mixed.dim(), 3);
  EXPECT_EQ(nilradical(mixed).power_dims, (std::vector<int>{1, 0}));
  const auto single = direct_sum({truncated_polynomial(3)});
  EXPECT_EQ(isomorphism_invariants(single), isomorphism_invariants(truncated_polynomial(3)));
}

TEST(Algebra, FloatInputIsSnapped) {
  std::vector<double> t(27, 0.0);
  auto at = [&](int i, int j, int k) -> double& { return t[(i * 3 + j) * 3 + k]; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; i + j < 3; ++j) at(i, j, i + j) = 1.0;
  const auto a = StructureConstants::from_doubles(3, t, Vector::Unit(3, 0));
  EXPECT_EQ(a.cq(1, 1, 2), Rational(1));
  EXPECT_EQ(nilradical(a).nilpotency_class, 3);
}

TEST(Algebra, RejectsNonAssociativeTensor) {
  std::vector<Rational> t(8, Rational(0));
  auto at = [&](int i, int j, int k) -> Rational& { return t[(i * 2 + j) * 2 + k]; };
  at(0, 0, 0) = 1;
  at(0, 1, 1) = 1;
  at(1, 0, 1) = 1;
  at(1, 1, 0) = 1;  // X^2 = 1 is fine; break commutativity instead
  at(1, 0, 1) = 2;
  EXPECT_THROW(StructureConstants::with_unit_index(2, t, 0), ParseError);
}

TEST(Algebra, Unitization) {
  NilpotentTensor nil;
  nil.dim = 2;
  nil.tensor.assign(8, Rational(0));
  nil.tensor[(0 * 2 + 0) * 2 + 1] = 1;  // n1 n1 = n2
  const auto a = unitization(nil);
  EXPECT_EQ(a.dim(), 3);
  EXPECT_EQ(isomorphism_invariants(a), isomorphism_invariants(truncated_polynomial(3)));
}
