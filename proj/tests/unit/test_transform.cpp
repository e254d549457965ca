#include "orbitlet/error.hpp"
#include "orbitlet/transform.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

using namespace orbitlet;
using namespace orbitlet::transform;
using groups::Shearlet2D;

namespace {

const double kPi = std::numbers::pi;

const GroupSpec& sh2() {
  static const GroupSpec s(Shearlet2D{0.5});
  return s;
}

Atom desk_atom() {
  atoms::SplineBase base;
  base.axes = {bspline::Scaled{5, -6, 6}, bspline::Scaled{5, -6, 6}};
  return atoms::make_atom(atoms::OperatorKind::FirstPartial, 2, base);
}

SampledFunction packet(const Grid& g, double w1, double w2, double sigma, Vector shift = Vector::Zero(2)) {
  SampledFunction f{g, {}, false};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vector x = g.point(i) - shift;
    f.values.emplace_back(std::exp(-x.squaredNorm() / (2 * sigma * sigma)) * std::cos(2 * kPi * (w1 * x[0] + w2 * x[1])));
  }
  return f;
}

double relative_error(const SampledFunction& a, const SampledFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

double max_abs_diff(const CoefficientField& a, const CoefficientField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k)
    for (std::size_t i = 0; i < a.values[k].size(); ++i) m = std::max(m, std::abs(a.values[k][i] - b.values[k][i]));
  return m;
}

struct RoundTrip {
  double error = 0.0;
  double c = 0.0;
  CoefficientField coeffs;
};

RoundTrip round_trip(const SampledFunction& f, int refine) {
  DilationSampling s;
  s.scale_range = 1.5;
  s.shear_range = 2.0;
  s.scale_points = 5 * refine + 1;
  s.shear_points = 5 * refine + 1;
  const Atom psi = desk_atom();
  const auto tg = make_transform_grid(sh2(), f.grid, s);
  RoundTrip r;
  r.c = c_psi(sh2(), psi, tg);
  r.coeffs = analyze(f, psi, tg);
  r.error = relative_error(synthesize(r.coeffs, psi, r.c), f);
  return r;
}

}  // namespace

TEST(Transform, QuasiRegularIdentity) {
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 1, atoms::SplineBase::uniform(2, 5));
  const Grid g = Grid::centered(2, 32, 1.5);
  const auto s = quasi_regular_apply(Vector::Zero(2), Matrix::Identity(2, 2), a, g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(s.values[i].real(), a.value(g.point(i)));
}

TEST(Transform, QuasiRegularUnitary) {
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 1, atoms::SplineBase::uniform(2, 5));
  const Grid g = Grid::centered(2, 256, 6.0);
  const double n0 = quasi_regular_apply(Vector::Zero(2), Matrix::Identity(2, 2), a, g).l2_norm();
  for (auto [sign, scale, shear] : {std::tuple{1, 2.0, 0.5}, {-1, 0.6, -1.0}, {1, 3.0, 2.0}}) {
    const auto h = groups::shearlet2d_element(0.5, sign, scale, shear);
    const Vector x = (Vector(2) << 0.4, -0.3).finished();
    const double n = quasi_regular_apply(x, h.matrix, a, g).l2_norm();
    EXPECT_NEAR(n / n0, 1.0, 1e-3);
  }
}

TEST(Transform, QuasiRegularComposition) {
  // pi(x,h) pi(x',h') = pi(x + h x', h h').
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 1, atoms::SplineBase::uniform(2, 5));
  const Grid g = Grid::centered(2, 24, 3.0);
  const auto h1 = groups::shearlet2d_element(0.5, 1, 1.5, 0.3);
  const auto h2 = groups::shearlet2d_element(0.5, -1, 0.8, -0.6);
  const Vector x1 = (Vector(2) << 0.2, 0.5).finished(), x2 = (Vector(2) << -0.4, 0.1).finished();
  const auto lhs = quasi_regular_apply(x1 + h1.matrix * x2, h1.matrix * h2.matrix, a, g);
  const Matrix h1i = h1.matrix.inverse(), h2i = h2.matrix.inverse();
  const double norm = 1.0 / std::sqrt(std::abs(h1.matrix.determinant() * h2.matrix.determinant()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vector y = g.point(i);
    const double expect = norm * a.value(h2i * (h1i * (y - x1) - x2));
    EXPECT_NEAR(lhs.values[i].real(), expect, 1e-12);
  }
  EXPECT_THROW(quasi_regular_apply(x1, Matrix::Zero(2, 2), a, g), SingularElement);
}

TEST(Transform, AnalyzeAtIdentityGivesNormSquared) {
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 1, atoms::SplineBase::uniform(2, 5));
  const Grid g = Grid::centered(2, 64, 2.0);
  const auto f = quasi_regular_apply(Vector::Zero(2), Matrix::Identity(2, 2), a, g);
  TransformGrid tg{g, {DilationSample{Matrix::Identity(2, 2), 1.0}}};
  const auto w = analyze(f, a, tg, {Method::Direct});
  const std::size_t centre = g.ravel({32, 32});
  const double n2 = std::pow(f.l2_norm(), 2);
  EXPECT_NEAR(std::abs(w.values[0][centre]) / n2, 1.0, 1e-3);
}

TEST(Transform, FftMatchesDirect) {
  const Grid g = Grid::centered(2, 20, 5.0);
  const auto f = packet(g, 0.2, 0.05, 1.5);
  DilationSampling s;
  s.scale_range = 1.0;
  s.scale_points = 3;
  s.shear_points = 3;
  const auto tg = make_transform_grid(sh2(), g, s);
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 2, atoms::SplineBase::uniform(2, 5, -2, 2));
  const auto fft = analyze(f, a, tg, {Method::Fft});
  const auto direct = analyze(f, a, tg, {Method::Direct});
  EXPECT_LT(max_abs_diff(fft, direct), 1e-8);
  const auto sf = synthesize(fft, a, 1.0, {Method::Fft});
  const auto sd = synthesize(fft, a, 1.0, {Method::Direct});
  EXPECT_LT(relative_error(sf, sd), 1e-8);
}

TEST(Transform, TranslationCovariance) {
  const Grid g = Grid::centered(2, 32, 8.0);
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 1, atoms::SplineBase::uniform(2, 5));
  const Vector z = (Vector(2) << 2 * g.spacing[0], -3 * g.spacing[1]).finished();
  const auto f = packet(g, 0.3, 0.0, 1.0);
  const auto fz = packet(g, 0.3, 0.0, 1.0, z);
  const auto h = groups::shearlet2d_element(0.5, 1, 1.3, 0.2);
  TransformGrid tg{g, {DilationSample{h.matrix, 1.0}}};
  const auto w = analyze(f, a, tg);
  const auto wz = analyze(fz, a, tg);
  double worst = 0.0, scale = 0.0;
  for (int i = 8; i < 24; ++i)
    for (int j = 8; j < 24; ++j) {
      const auto shifted = wz.values[0][g.ravel({i + 2, j - 3})];
      worst = std::max(worst, std::abs(shifted - w.values[0][g.ravel({i, j})]));
      scale = std::max(scale, std::abs(w.values[0][g.ravel({i, j})]));
    }
  EXPECT_LT(worst, 1e-10 * std::max(1.0, scale));
}

TEST(Transform, CoefficientsVanishOutsideSupportSum) {
  const Grid g = Grid::centered(2, 40, 10.0);
  SampledFunction f{g, std::vector<Complex>(g.size(), 0.0), false};
  f.values[g.ravel({20, 20})] = 1.0;  // point mass at the origin
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 1, atoms::SplineBase::uniform(2, 5));
  TransformGrid tg{g, {DilationSample{Matrix::Identity(2, 2), 1.0}}};
  const auto w = analyze(f, a, tg, {Method::Direct});
  EXPECT_EQ(w.values[0][g.ravel({0, 0})], Complex(0.0));
  EXPECT_EQ(w.values[0][g.ravel({20, 35})], Complex(0.0));
}

TEST(Transform, ZeroCoefficientsSynthesizeZero) {
  const Grid g = Grid::centered(2, 16, 4.0);
  DilationSampling s;
  s.scale_points = 3;
  s.shear_points = 3;
  const auto tg = make_transform_grid(sh2(), g, s);
  CoefficientField c{g, tg.dilations, std::vector<std::vector<Complex>>(tg.dilations.size(), std::vector<Complex>(g.size()))};
  const auto f = synthesize(c, desk_atom(), 1.0);
  for (const auto& v : f.values) EXPECT_EQ(v, Complex(0.0));
  EXPECT_THROW(synthesize(c, desk_atom(), 0.0), ParseError);
  EXPECT_EQ(coefficient_norm(c, sh2(), {}), 0.0);
}

TEST(Transform, RoundTripImprovesUnderRefinement) {
  const Grid g = Grid::centered(2, 64, 16.0);
  for (auto [w1, w2, sigma] : {std::tuple{0.17, 0.0, 4.0}, {0.12, 0.06, 4.0}, {0.22, -0.05, 3.0}}) {
    const auto f = packet(g, w1, w2, sigma);
    const double coarse = round_trip(f, 1).error;
    const double fine = round_trip(f, 2).error;
    EXPECT_LT(fine, coarse) << w1 << "," << w2;
    EXPECT_LT(fine, 0.1);
  }
}

TEST(Transform, PlancherelAndNormProperties) {
  const Grid g = Grid::centered(2, 64, 16.0);
  const auto f = packet(g, 0.17, 0.0, 4.0);
  auto rt = round_trip(f, 2);
  embeddedness::WeightSpec w;
  w.base = embeddedness::PowerWeight{0.0};
  const double n = coefficient_norm(rt.coeffs, sh2(), w);
  EXPECT_NEAR(n * n / (rt.c * std::pow(f.l2_norm(), 2)), 1.0, 0.1);
  // Reordering dilations leaves the norm unchanged.
  CoefficientField rev = rt.coeffs;
  std::reverse(rev.dilations.begin(), rev.dilations.end());
  std::reverse(rev.values.begin(), rev.values.end());
  EXPECT_NEAR(coefficient_norm(rev, sh2(), w), n, 1e-12 * n);
  // Solidity: growing one coefficient in modulus cannot shrink the norm.
  rev.values[3][100] *= 2.0;
  EXPECT_GE(coefficient_norm(rev, sh2(), w), n);
}

TEST(Transform, CoefficientFileRoundTrip) {
  const Grid g = Grid::centered(2, 8, 2.0);
  DilationSampling s;
  s.scale_points = 2;
  s.shear_points = 2;
  const auto tg = make_transform_grid(sh2(), g, s);
  const auto c = analyze(packet(g, 0.3, 0.1, 1.0), desk_atom(), tg);
  const auto path = std::filesystem::temp_directory_path() / "orbitlet_test_coeffs.bin";
  write_coefficients(c, path);
  const auto back = read_coefficients(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.dilations.size(), c.dilations.size());
  EXPECT_EQ(max_abs_diff(back, c), 0.0);
  EXPECT_EQ(back.dilations[1].h, c.dilations[1].h);
}
