#include "orbitlet/atoms.hpp"
#include "orbitlet/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace orbitlet;
using namespace orbitlet::atoms;
using groups::Shearlet2D;

namespace {

const double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

}  // namespace

TEST(Atoms, OperatorPerFamily) {
  EXPECT_EQ(orbit_differential_operator(GroupSpec(Shearlet2D{0.5})), OperatorKind::FirstPartial);
  EXPECT_EQ(orbit_differential_operator(groups::toeplitz_shearlet(3)), OperatorKind::FirstPartial);
  EXPECT_EQ(orbit_differential_operator(GroupSpec(groups::Diagonal{3})), OperatorKind::MixedPartial);
  EXPECT_EQ(orbit_differential_operator(GroupSpec(groups::Similitude{2})), OperatorKind::Laplacian);
  EXPECT_EQ(operator_kind_from_string(to_string(OperatorKind::MixedPartial)), OperatorKind::MixedPartial);
  EXPECT_THROW(operator_kind_from_string("curl"), ParseError);
}

TEST(Atoms, DerivativePlans) {
  const auto mixed = derivative_plan(OperatorKind::MixedPartial, 3, 1);
  ASSERT_EQ(mixed.terms.size(), 1u);
  EXPECT_EQ(mixed.terms[0].alpha, (std::vector<int>{1, 1, 1}));
  // Laplacian applied ceil(5/2) = 3 times in 2-D: (a + b)^3 expands into 4 terms, order 6.
  const auto lap = derivative_plan(OperatorKind::Laplacian, 2, 5);
  EXPECT_EQ(lap.power, 3);
  EXPECT_EQ(lap.order(), 6);
  EXPECT_EQ(lap.terms.size(), 4u);
  EXPECT_EQ(lap.max_alpha(), (std::vector<int>{6, 6}));
  const Vector xi = vec({0.3, -0.2});
  const double s = -4 * kPi * kPi * xi.squaredNorm();
  EXPECT_NEAR(std::abs(lap.symbol(xi) - std::pow(s, 3)), 0.0, 1e-9 * std::pow(std::abs(s), 3));
  const auto first = derivative_plan(OperatorKind::FirstPartial, 2, 2);
  EXPECT_NEAR(std::abs(first.symbol(xi) - std::pow(Complex(0, 2 * kPi * 0.3), 2)), 0.0, 1e-12);
}

TEST(Atoms, ZeroOrderIsTheBase) {
  const auto base = SplineBase::uniform(2, 3);
  const auto a = make_atom(OperatorKind::FirstPartial, 0, base);
  const Vector x = vec({0.2, -0.4});
  EXPECT_DOUBLE_EQ(a.value(x), base.axes[0].value(0.2) * base.axes[1].value(-0.4));
}

TEST(Atoms, SupportPreserved) {
  const auto a = make_atom(OperatorKind::FirstPartial, 2, SplineBase::uniform(2, 3));
  EXPECT_EQ(a.value(vec({1.01, 0.0})), 0.0);
  EXPECT_EQ(a.value(vec({0.0, -1.2})), 0.0);
  EXPECT_FALSE(a.in_support(vec({1.5, 0.0})));
  EXPECT_NE(a.value(vec({0.3, 0.1})), 0.0);
}

TEST(Atoms, InsufficientSmoothnessRejected) {
  EXPECT_THROW(make_atom(OperatorKind::FirstPartial, 3, SplineBase::uniform(2, 3)), UnsupportedInput);
  EXPECT_NO_THROW(make_atom(OperatorKind::FirstPartial, 4, SplineBase::uniform(2, 5)));
}

TEST(Atoms, ClosedFormSpectrumMatchesQuadrature) {
  // Independent oracle: midpoint rule for the Fourier integral of the pointwise atom.
  const auto a = make_atom(OperatorKind::FirstPartial, 2, SplineBase::uniform(2, 5));
  const int n = 400;
  const double h = 2.0 / n;
  for (const Vector& xi : {vec({0.3, 0.1}), vec({-0.8, 0.45}), vec({1.2, -1.0})}) {
    Complex s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Vector x = vec({-1 + (i + 0.5) * h, -1 + (j + 0.5) * h});
        s += a.value(x) * std::exp(Complex(0, -2 * kPi * xi.dot(x))) * h * h;
      }
    EXPECT_LT(std::abs(a.spectrum(xi) - s), 1e-6 * std::max(1.0, std::abs(s)));
    // |psi_hat| = (2 pi |xi_1|)^2 |f_hat|.
    const auto f = make_atom(OperatorKind::FirstPartial, 0, SplineBase::uniform(2, 5));
    EXPECT_NEAR(std::abs(a.spectrum(xi)), std::pow(2 * kPi * std::abs(xi[0]), 2) * std::abs(f.spectrum(xi)), 1e-12);
  }
}

TEST(Atoms, VanishingMomentsShearlet) {
  const auto o = orbit::orbit_of(GroupSpec(Shearlet2D{0.5}));
  const auto a = make_atom(OperatorKind::FirstPartial, 2, SplineBase::uniform(2, 5));
  const auto p = verify_vanishing_moments(a, o, 2);
  EXPECT_EQ(p.verdict, "verified");
  EXPECT_NEAR(p.fitted_order, 2.0, 0.1);
  EXPECT_TRUE(p.moments_pass);
  const auto f = make_atom(OperatorKind::FirstPartial, 0, SplineBase::uniform(2, 5));
  EXPECT_NEAR(verify_vanishing_moments(f, o, 0).fitted_order, 0.0, 0.1);
  // Claiming more than the atom has fails.
  EXPECT_NE(verify_vanishing_moments(a, o, 3).verdict, "verified");
}

TEST(Atoms, MomentOrderAdditivity) {
  const auto o = orbit::orbit_of(GroupSpec(groups::Diagonal{2}));
  for (int r = 1; r <= 2; ++r) {
    const auto a = make_atom(OperatorKind::MixedPartial, r, SplineBase::uniform(2, 5));
    const auto p = verify_vanishing_moments(a, o, r);
    EXPECT_EQ(p.verdict, "verified") << r;
    EXPECT_NEAR(p.fitted_order, r, 0.1);
  }
}

TEST(Atoms, LaplacianAtOrigin) {
  const auto o = orbit::orbit_of(GroupSpec(groups::Similitude{2}));
  const auto a = make_atom(OperatorKind::Laplacian, 2, SplineBase::uniform(2, 5));
  const auto p = verify_vanishing_moments(a, o, 2);
  EXPECT_EQ(p.verdict, "verified");
  EXPECT_NEAR(p.fitted_order, 2.0, 0.1);
}

TEST(Atoms, SampledVerification) {
  const auto o = orbit::orbit_of(GroupSpec(Shearlet2D{0.5}));
  const auto a = make_atom(OperatorKind::FirstPartial, 1, SplineBase::uniform(2, 5));
  const auto p = verify_vanishing_moments(sample(a, Grid::centered(2, 64, 1.5)), o, 1);
  EXPECT_NEAR(p.fitted_order, 1.0, 0.1);
}

TEST(Atoms, AdmissibilityDiscriminates) {
  const GroupSpec sh(Shearlet2D{0.5});
  const auto good = make_atom(OperatorKind::FirstPartial, 2, SplineBase::uniform(2, 5));
  EXPECT_EQ(admissibility_check(sh, good).verdict, TailVerdict::Finite);
  const auto bad = make_atom(OperatorKind::FirstPartial, 0, SplineBase::uniform(2, 5));
  EXPECT_EQ(admissibility_check(sh, bad).verdict, TailVerdict::Divergent);
  // Spectrum supported in [1,2] x [-1,1], away from the complement.
  const SpectrumFn boxed = [](const Vector& xi) -> Complex {
    return (xi[0] >= 1 && xi[0] <= 2 && std::abs(xi[1]) <= 1) ? Complex(1.0) : Complex(0.0);
  };
  EXPECT_EQ(admissibility_check(sh, boxed).verdict, TailVerdict::Finite);
}

TEST(Atoms, OrbitDensityShearlet) {
  // Shearlet groups: Phi(xi) = |xi_1|^{-d} up to a constant.
  const GroupSpec sh(Shearlet2D{0.5});
  const double r = orbit_density(sh, vec({0.5, 2.0})) / orbit_density(sh, vec({2.0, -1.0}));
  EXPECT_NEAR(r, std::pow(4.0, 2), 1e-9);
}
