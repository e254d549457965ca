#include "orbitlet/embeddedness.hpp"
#include "orbitlet/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace orbitlet;
using namespace orbitlet::embeddedness;
using groups::Shearlet2D;
using groups::Vector;

namespace {

const GroupSpec& sh2() {
  static const GroupSpec s(Shearlet2D{0.5});
  return s;
}

void expect_exponents(const ExponentSet& e, double e1, double e2, double e3, double e4) {
  EXPECT_DOUBLE_EQ(e.e1, e1);
  EXPECT_DOUBLE_EQ(e.e2, e2);
  EXPECT_DOUBLE_EQ(e.e3, e3);
  EXPECT_DOUBLE_EQ(e.e4, e4);
}

}  // namespace

TEST(Exponents, AnalyticPerFamily) {
  expect_exponents(analytic_exponents(sh2(), {}), 2, 1.5, 1.5, 0.5);
  expect_exponents(analytic_exponents(GroupSpec(Shearlet2D{-2.0}), {}), 2, 3, 1, 3);
  expect_exponents(analytic_exponents(GroupSpec(groups::Similitude{3}), {}), 3, 1, 3, 0);
  expect_exponents(analytic_exponents(GroupSpec(groups::Diagonal{2}), {}), 2, 1, 2, 0);
  // Standard d=3: n = 2, |Y| = 1, trace Y = 2.
  expect_exponents(analytic_exponents(groups::standard_shearlet(3), {}), 3, 3, 2, 1);
  // Toeplitz d=3: n = 3, Y = I.
  expect_exponents(analytic_exponents(groups::toeplitz_shearlet(3), {}), 3, 4, 3, 0);
}

TEST(Exponents, FallbackAndCombine) {
  EXPECT_EQ(fallback_exponents(1.0, 2, 2), std::make_pair(2.0, 4.0));
  EXPECT_EQ(fallback_exponents(0.0, 3, 3), std::make_pair(0.0, 0.0));
  EXPECT_EQ(fallback_exponents(1.5, 2, 2), std::make_pair(3.0, 6.0));
  const ExponentSet block{1, 1, 1, 0};
  const std::vector<ExponentSet> two{block, block};
  expect_exponents(combine_exponents(two), 2, 1, 2, 0);
  const std::vector<ExponentSet> one{ExponentSet{2, 1.5, 1.5, 0.5}};
  expect_exponents(combine_exponents(one), 2, 1.5, 1.5, 0.5);
  const std::vector<ExponentSet> four(4, block);
  expect_exponents(combine_exponents(four), 4, 1, 4, 0);
  // Direct products reproduce the diagonal group's exponents.
  const GroupSpec prod(groups::DirectProduct{{GroupSpec(groups::Diagonal{1}), GroupSpec(groups::Diagonal{1})}});
  expect_exponents(analytic_exponents(prod, {}), 2, 1, 2, 0);
}

TEST(Exponents, RejectsNegativeEntries) {
  EXPECT_THROW((ExponentSet{-1, 0, 0, 0}).validate(), ParseError);
  EXPECT_THROW((ExponentSet{0, NAN, 0, 0}).validate(), ParseError);
}

TEST(Indices, GoldenValues) {
  const ExponentSet sh{2, 1.5, 1.5, 0.5};
  EXPECT_EQ(index_temperate(sh, 0, 2), 12);
  EXPECT_EQ(index_strong(sh, 0, 2), 16);
  EXPECT_EQ(index_temperate({0, 0, 0, 0}, 0, 1), 2);
  EXPECT_EQ(index_strong({0, 0, 0, 0}, 0, 1), 2);
  EXPECT_EQ(index_temperate(analytic_exponents(GroupSpec(groups::Similitude{2}), {}), 0, 2), 11);
  EXPECT_EQ(required_moments(12, 2), 15);
  EXPECT_EQ(required_moments(16, 2), 19);
  EXPECT_EQ(required_moments(0, 1), 2);
}

TEST(Indices, FloorIsExactAtIntegerBoundaries) {
  // 0.1 + 0.2 + 0.7 sums to exactly 1 in rationals but not in binary floating point.
  EXPECT_EQ(index_temperate({0.1, 0, 0, 0.9}, 0, 1), 3);
  EXPECT_EQ(index_temperate({0.3, 0, 0.2, 0.4}, 0, 1), 3);
}

TEST(Indices, MonotoneAndStrongDominates) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const ExponentSet e{u(rng), u(rng), u(rng), u(rng)};
    const double s = u(rng);
    const int d = 1 + i % 4;
    EXPECT_GE(index_strong(e, s, d), index_temperate(e, s, d));
    ExponentSet bigger = e;
    bigger.e2 += 0.25;
    EXPECT_GE(index_temperate(bigger, s, d), index_temperate(e, s, d));
    EXPECT_GE(index_temperate(e, s + 0.5, d), index_temperate(e, s, d));
  }
}

TEST(AtomOrder, ClosedForms) {
  for (int d = 2; d <= 5; ++d) {
    EXPECT_EQ(shearlet_atom_order(groups::standard_shearlet(d)), 10 * d + 4 + (d + 1) / 4) << d;
    EXPECT_EQ(shearlet_atom_order(groups::toeplitz_shearlet(d)), 2 * d * d + 6 * d + 4 + d / 2) << d;
  }
  EXPECT_EQ(shearlet_atom_order(groups::standard_shearlet(2)), 24);
  EXPECT_EQ(shearlet_atom_order(groups::standard_shearlet(3)), 35);
  EXPECT_THROW(shearlet_atom_order(GroupSpec(groups::Similitude{2})), UnsupportedInput);
}

TEST(Pipeline, Shearlet2DGoldenOrders) {
  const auto r = pipeline(sh2(), {});
  EXPECT_EQ(r.ell_temperate, 12);
  EXPECT_EQ(r.ell_strong, 16);
  EXPECT_EQ(r.moments_analyzing, 15);
  EXPECT_EQ(r.moments_atom, 19);
}

TEST(Pipeline, ToeplitzReportsClosedFormGap) {
  const auto r = pipeline(groups::toeplitz_shearlet(3), {});
  // Theorem index with e = (3, 4, 3, 0): floor(3 + 4*8 + 4.5) + 4 = 43, atom order 47; closed form 41.
  EXPECT_EQ(r.ell_strong, 43);
  EXPECT_EQ(r.moments_atom, 47);
  ASSERT_TRUE(r.closed_form_atom_order.has_value());
  EXPECT_EQ(*r.closed_form_atom_order, 41);
  EXPECT_EQ(r.moments_atom - *r.closed_form_atom_order, 2 * 3);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Pipeline, SimilitudeNotesRemarkValue) {
  const auto r = pipeline(GroupSpec(groups::Similitude{2}), {});
  EXPECT_EQ(r.ell_temperate, 11);
  EXPECT_FALSE(r.notes.empty());
}

TEST(ControlWeight, IdentityValues) {
  const auto id = groups::element_from_factored(sh2(), 1, 0.0, Vector::Zero(1));
  WeightSpec pw;
  pw.base = PowerWeight{0.0};
  EXPECT_DOUBLE_EQ(control_weight(pw, sh2(), id), 4.0);
  pw.p = 1.0;
  pw.q = 4.0;
  EXPECT_DOUBLE_EQ(control_weight(pw, sh2(), id), 4.0);
  pw.p = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(control_weight(pw, sh2(), id), 4.0);
  // MaxDelta is itself the control weight: max(1, 1) at the identity.
  EXPECT_DOUBLE_EQ(control_weight(WeightSpec{}, sh2(), id), 1.0);
}

TEST(ControlWeight, PowerWeightIsSubmultiplicative) {
  WeightSpec w;
  w.base = PowerWeight{1.5};
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto spec = groups::standard_shearlet(3);
  for (int i = 0; i < 200; ++i) {
    const auto a = groups::element_from_factored(spec, i % 2 ? 1 : -1, u(rng), Vector::NullaryExpr(2, [&](Eigen::Index) { return u(rng); }));
    const auto b = groups::element_from_factored(spec, 1, u(rng), Vector::NullaryExpr(2, [&](Eigen::Index) { return u(rng); }));
    const auto ab = groups::compose(spec, a, b);
    EXPECT_LE(base_weight(w, spec, ab), base_weight(w, spec, a) * base_weight(w, spec, b) * (1 + 1e-12));
  }
}

TEST(Empirical, ShearletBoundedAndReducedGrowth) {
  EmpiricalOptions o;
  o.budget = 20000;
  const auto e = analytic_exponents(sh2(), {});
  EXPECT_EQ(empirical_exponent_check(sh2(), e, {}, o).verdict, Verdict::Bounded);
  ExponentSet reduced = e;
  reduced.e2 -= 1.0;
  EXPECT_EQ(empirical_exponent_check(sh2(), reduced, {}, o).verdict, Verdict::Growth);
}

TEST(Empirical, DeterministicForFixedSeed) {
  EmpiricalOptions o;
  o.budget = 5000;
  o.seed = 42;
  const auto e = analytic_exponents(groups::standard_shearlet(3), {});
  const auto a = empirical_exponent_check(groups::standard_shearlet(3), e, {}, o);
  o.threads = 3;
  const auto b = empirical_exponent_check(groups::standard_shearlet(3), e, {}, o);
  ASSERT_EQ(a.inequalities.size(), b.inequalities.size());
  for (std::size_t i = 0; i < a.inequalities.size(); ++i)
    EXPECT_EQ(a.inequalities[i].stage_sup, b.inequalities[i].stage_sup);
}

TEST(Phi, DirectMatchesConvolution) {
  quadrature::Options o;
  o.gauss_points = 6;
  o.subpanels = 1;
  o.rel_tol = 1e-5;
  o.patience = 2;
  for (int i = 0; i < 3; ++i) {
    const auto h = groups::shearlet2d_element(0.5, i % 2 ? -1 : 1, std::exp(-1.0 + 0.7 * i), 0.3 * i - 0.4);
    const auto d = phi_ell_direct(sh2(), h, 4, o);
    const auto c = phi_ell_convolution(sh2(), h, 4, o);
    EXPECT_TRUE(d.converged && c.converged);
    EXPECT_LT(std::abs(d.value - c.value) / d.value, 0.01);
    // A <= 1, so a larger exponent cannot increase the integral.
    EXPECT_LE(phi_ell_direct(sh2(), h, 5, o).value, d.value * (1 + 1e-9));
  }
}
