#include "orbitlet/algebra.hpp"
#include "orbitlet/atoms.hpp"
#include "orbitlet/embeddedness.hpp"
#include "orbitlet/orbit.hpp"
#include "orbitlet/transform.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace orbitlet;

namespace {

const groups::GroupSpec& sh2() {
  static const groups::GroupSpec s(groups::Shearlet2D{0.5});
  return s;
}

void BM_NilradicalExact(benchmark::State& state) {
  const auto a = algebra::truncated_polynomial(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(algebra::nilradical(a));
}
BENCHMARK(BM_NilradicalExact)->Arg(3)->Arg(5)->Arg(8);

void BM_IsomorphismInvariants(benchmark::State& state) {
  const auto a = algebra::h_algebra(Rational(-1));
  for (auto _ : state) benchmark::DoNotOptimize(algebra::isomorphism_invariants(a));
}
BENCHMARK(BM_IsomorphismInvariants);

void BM_EnvelopeAH(benchmark::State& state) {
  const auto spec = groups::toeplitz_shearlet(static_cast<int>(state.range(0)));
  const auto o = orbit::orbit_of(spec);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::vector<groups::Matrix> hs;
  for (int i = 0; i < 256; ++i) {
    groups::Vector t(spec.dim() - 1);
    for (auto& v : t) v = n(rng);
    hs.push_back(groups::element_from_factored(spec, 1, n(rng), t).matrix);
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(orbit::envelope_AH(o, hs[i++ % hs.size()]));
}
BENCHMARK(BM_EnvelopeAH)->Arg(2)->Arg(3)->Arg(4);

void BM_OrbitSection(benchmark::State& state) {
  const auto spec = groups::standard_shearlet(4);
  groups::Vector xi(4);
  xi << 0.7, -1.2, 0.4, 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(orbit::orbit_section(spec, xi));
}
BENCHMARK(BM_OrbitSection);

void BM_HaarTransferShearlet2D(benchmark::State& state) {
  auto gauss = [](const groups::Vector& x) { return std::exp(-x.squaredNorm()); };
  for (auto _ : state) benchmark::DoNotOptimize(orbit::haar_transfer_check(sh2(), gauss));
}
BENCHMARK(BM_HaarTransferShearlet2D)->Unit(benchmark::kMillisecond);

void BM_EmpiricalCheck(benchmark::State& state) {
  embeddedness::EmpiricalOptions o;
  o.budget = state.range(0);
  const auto e = embeddedness::analytic_exponents(sh2(), {});
  for (auto _ : state) benchmark::DoNotOptimize(embeddedness::empirical_exponent_check(sh2(), e, {}, o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalCheck)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PhiDirect(benchmark::State& state) {
  const auto h = groups::shearlet2d_element(0.5, 1, 1.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(embeddedness::phi_ell_direct(sh2(), h, 4));
}
BENCHMARK(BM_PhiDirect)->Unit(benchmark::kMillisecond);

void BM_AtomSpectrum(benchmark::State& state) {
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 4, atoms::SplineBase::uniform(3, 5));
  groups::Vector xi(3);
  xi << 0.3, -0.7, 1.1;
  for (auto _ : state) benchmark::DoNotOptimize(a.spectrum(xi));
}
BENCHMARK(BM_AtomSpectrum);

void BM_VerifyMoments(benchmark::State& state) {
  const auto o = orbit::orbit_of(sh2());
  const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, 3, atoms::SplineBase::uniform(2, 5));
  for (auto _ : state) benchmark::DoNotOptimize(atoms::verify_vanishing_moments(a, o, 3));
}
BENCHMARK(BM_VerifyMoments)->Unit(benchmark::kMillisecond);

void BM_Analyze(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::centered(2, n, 16.0);
  SampledFunction f{g, {}, false};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(i);
    f.values.emplace_back(std::exp(-x.squaredNorm() / 32.0) * std::cos(2 * std::numbers::pi * 0.17 * x[0]));
  }
  atoms::SplineBase base;
  base.axes = {bspline::Scaled{5, -6, 6}, bspline::Scaled{5, -6, 6}};
  const auto psi = atoms::make_atom(atoms::OperatorKind::FirstPartial, 2, base);
  transform::DilationSampling s;
  s.scale_range = 1.5;
  s.scale_points = 6;
  s.shear_points = 6;
  const auto tg = transform::make_transform_grid(sh2(), g, s);
  const auto method = state.range(1) ? transform::Method::Fft : transform::Method::Direct;
  for (auto _ : state) benchmark::DoNotOptimize(transform::analyze(f, psi, tg, {method}));
}
BENCHMARK(BM_Analyze)->Args({32, 1})->Args({64, 1})->Args({32, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
