// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "orbitlet/algebra.hpp"
#include "orbitlet/atoms.hpp"
#include "orbitlet/embeddedness.hpp"
#include "orbitlet/groups.hpp"
#include "orbitlet/orbit.hpp"
#include "orbitlet/transform.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace orbitlet;
using groups::GroupSpec;
using groups::Matrix;
using groups::Vector;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

const GroupSpec& sh2() {
  static const GroupSpec s(groups::Shearlet2D{0.5}, "shearlet2d(1/2)");
  return s;
}

std::vector<GroupSpec> shearlet_groups_d23() {
  return {sh2(), groups::standard_shearlet(3), groups::toeplitz_shearlet(3)};
}

Outcome moment_orders() {
  const auto r = embeddedness::pipeline(sh2(), {});
  std::ostringstream os;
  os << "analyzing " << r.moments_analyzing << ", atom " << r.moments_atom;
  return {r.moments_analyzing == 15 && r.moments_atom == 19, os.str()};
}

Outcome atom_order_closed_forms() {
  bool ok = true;
  std::ostringstream os;
  os << "standard";
  for (int d = 2; d <= 5; ++d) {
    const int r = embeddedness::shearlet_atom_order(groups::standard_shearlet(d));
    ok = ok && r == 10 * d + 4 + (d + 1) / 4;
    os << " " << r;
  }
  os << "; toeplitz";
  for (int d = 2; d <= 5; ++d) {
    const int r = embeddedness::shearlet_atom_order(groups::toeplitz_shearlet(d));
    ok = ok && r == 2 * d * d + 6 * d + 4 + d / 2;
    os << " " << r;
  }
  return {ok, os.str()};
}

Outcome classification() {
  const std::size_t n2 = groups::enumerate_catalog(2).size(), n3 = groups::enumerate_catalog(3).size(),
                    n4 = groups::enumerate_catalog(4).size();
  std::set<std::pair<int, int>> forms;
  for (int a : {-1, 0, 1}) {
    const auto inv = algebra::isomorphism_invariants(algebra::h_algebra(Rational(a)));
    if (inv.form_rank && inv.form_abs_signature) forms.insert({*inv.form_rank, *inv.form_abs_signature});
  }
  std::ostringstream os;
  os << "counts " << n2 << "/" << n3 << "/" << n4 << ", distinct H_a forms " << forms.size();
  return {n2 == 1 && n3 == 2 && n4 == 5 && forms.size() == 3, os.str()};
}

Outcome measure_transfer() {
  auto gauss = [](const Vector& x) { return std::exp(-x.squaredNorm()); };
  const auto a = orbit::haar_transfer_check(sh2(), gauss);
  quadrature::Options loose;
  loose.gauss_points = 6;
  loose.subpanels = 1;
  loose.rel_tol = 1e-5;
  loose.patience = 2;
  const auto b = orbit::haar_transfer_check(groups::standard_shearlet(3), gauss, loose);
  std::ostringstream os;
  os << "relative error " << a.relative_error << " (d=2), " << b.relative_error << " (d=3)";
  return {a.converged && b.converged && a.relative_error < 1e-3 && b.relative_error < 1e-3, os.str()};
}

Outcome phi_convolution() {
  const quadrature::Options o;
  const int ell = sh2().dim() + 2;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_a(-1.5, 1.5), shear(-2.0, 2.0);
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const auto h = groups::shearlet2d_element(0.5, i % 2 ? -1 : 1, std::exp(log_a(rng)), shear(rng));
    const auto d = embeddedness::phi_ell_direct(sh2(), h, ell, o);
    const auto c = embeddedness::phi_ell_convolution(sh2(), h, ell, o);
    const double rel = std::abs(d.value - c.value) / std::abs(d.value);
    ok = ok && d.converged && c.converged && std::isfinite(rel);
    worst = std::max(worst, rel);
  }
  std::ostringstream os;
  os << "max relative difference " << worst << " over 10 elements";
  return {ok && worst < 0.01, os.str()};
}

Outcome exponent_soundness() {
  std::vector<GroupSpec> groups_{sh2(), GroupSpec(groups::Similitude{2}, "similitude2"),
                                 GroupSpec(groups::Diagonal{2}, "diagonal2")};
  for (int d = 2; d <= 4; ++d)
    for (const auto& g : groups::enumerate_catalog(d)) groups_.push_back(g);
  embeddedness::EmpiricalOptions opts;
  opts.budget = 100000;
  opts.stages = 5;
  int bounded = 0;
  std::string failed;
  for (const auto& g : groups_) {
    const auto r = embeddedness::empirical_exponent_check(g, embeddedness::analytic_exponents(g, {}), {}, opts);
    if (r.verdict == embeddedness::Verdict::Bounded)
      ++bounded;
    else
      failed += " " + g.name() + "(d=" + std::to_string(g.dim()) + ")";
  }
  auto reduced = embeddedness::analytic_exponents(sh2(), {});
  reduced.e2 -= 1.0;
  const auto growth = embeddedness::empirical_exponent_check(sh2(), reduced, {}, opts);
  const bool grows = growth.verdict == embeddedness::Verdict::Growth;
  std::ostringstream os;
  os << bounded << "/" << groups_.size() << " bounded" << (failed.empty() ? "" : "; not bounded:" + failed)
     << "; reduced e2 verdict " << embeddedness::to_string(growth.verdict);
  return {bounded == static_cast<int>(groups_.size()) && grows, os.str()};
}

Outcome envelope_properties() {
  std::vector<GroupSpec> groups_{sh2(), GroupSpec(groups::Similitude{2}, "similitude2"),
                                 GroupSpec(groups::Diagonal{2}, "diagonal2")};
  for (int d = 3; d <= 4; ++d)
    for (const auto& g : groups::enumerate_catalog(d)) groups_.push_back(g);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double max_mod = 0.0, lo = 1e300, hi = 0.0;
  for (const auto& g : groups_) {
    const int d = g.dim();
    const auto o = orbit::orbit_of(g);
    const auto chart = groups::haar_chart(g);
    const Matrix id = Matrix::Identity(d, d);
    for (int n = 0; n < 10000;) {
      Vector xi(d);
      for (int i = 0; i < d; ++i) xi[i] = normal(rng);
      xi *= std::pow(10.0, 3 * u(rng));
      if (!orbit::contains(o, xi)) continue;
      std::vector<double> p(chart.axes.size());
      for (auto& v : p) v = 0.4 * u(rng);
      const auto h = chart.element(0, p);
      if ((h.matrix - id).norm() >= 0.5) continue;
      const double a = orbit::envelope_a(o, xi);
      max_mod = std::max(max_mod, orbit::envelope_a(o, groups::dual_action(h.matrix, xi)) / a);
      const double m = orbit::envelope_a(o, xi, orbit::Norm::Max);
      lo = std::min(lo, a / m);
      hi = std::max(hi, a / m);
      ++n;
    }
  }
  std::ostringstream os;
  os << "max moderateness ratio " << max_mod << ", norm ratio in [" << lo << ", " << hi << "] over "
     << groups_.size() << " orbits";
  return {max_mod <= 64.0 && lo >= 1.0 / 16 && hi <= 16.0, os.str()};
}

Outcome vanishing_moments() {
  bool ok = true;
  double worst_slope = 0.0, worst_moment = 0.0;
  for (const auto& g : shearlet_groups_d23()) {
    const auto o = orbit::orbit_of(g);
    for (int r = 1; r <= 4; ++r) {
      const auto a = atoms::make_atom(atoms::OperatorKind::FirstPartial, r, atoms::SplineBase::uniform(g.dim(), 5));
      const auto p = atoms::verify_vanishing_moments(a, o, r);
      worst_slope = std::max(worst_slope, std::abs(p.fitted_order - r));
      for (const auto& m : p.moments) worst_moment = std::max(worst_moment, m.value / m.scale);
      ok = ok && p.verdict == "verified" && p.moments_pass;
    }
  }
  std::ostringstream os;
  os << "max |fitted - r| " << worst_slope << ", max relative moment " << worst_moment;
  return {ok && worst_slope <= 0.1 && worst_moment <= 1e-6, os.str()};
}

Outcome admissibility() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& g : shearlet_groups_d23()) {
    const int d = g.dim();
    const auto good = atoms::make_atom(atoms::OperatorKind::FirstPartial, d, atoms::SplineBase::uniform(d, 5));
    const auto bad = atoms::make_atom(atoms::OperatorKind::FirstPartial, 0, atoms::SplineBase::uniform(d, 5));
    const auto vg = atoms::admissibility_check(g, good).verdict;
    const auto vb = atoms::admissibility_check(g, bad).verdict;
    ok = ok && vg == atoms::TailVerdict::Finite && vb == atoms::TailVerdict::Divergent;
    os << g.name() << " d=" << d << ": " << atoms::to_string(vg) << "/" << atoms::to_string(vb) << "; ";
  }
  return {ok, os.str()};
}

Outcome inversion() {
  const Grid grid = Grid::centered(2, 64, 16.0);
  SampledFunction f{grid, {}, false};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector x = grid.point(i);
    f.values.emplace_back(std::exp(-x.squaredNorm() / 32.0) * std::cos(2 * std::numbers::pi * 0.17 * x[0]));
  }
  atoms::SplineBase base;
  base.axes = {bspline::Scaled{5, -6, 6}, bspline::Scaled{5, -6, 6}};
  const auto psi = atoms::make_atom(atoms::OperatorKind::FirstPartial, 2, base);
  const auto probe = atoms::verify_vanishing_moments(psi, orbit::orbit_of(sh2()), 2);
  std::vector<double> errors;
  for (int refine : {1, 2}) {
    transform::DilationSampling s;
    s.scale_range = 1.5;
    s.shear_range = 2.0;
    s.scale_points = 5 * refine + 1;
    s.shear_points = 5 * refine + 1;
    const auto tg = transform::make_transform_grid(sh2(), grid, s);
    const double c = transform::c_psi(sh2(), psi, tg);
    const auto rec = transform::synthesize(transform::analyze(f, psi, tg), psi, c);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      num += std::norm(rec.values[i] - f.values[i]);
      den += std::norm(f.values[i]);
    }
    errors.push_back(std::sqrt(num / den));
  }
  std::ostringstream os;
  os << "atom " << probe.verdict << ", relative L2 error " << errors[0] << " -> " << errors[1]
     << " after doubling the dilation grid";
  return {probe.verdict == "verified" && errors[1] < 0.05 && errors[1] < errors[0], os.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "moment-order golden values", 1.0, moment_orders},
      {2, "shearlet atom-order closed forms", 1.0, atom_order_closed_forms},
      {3, "classification counts and H_a separation", 1.0, classification},
      {4, "measure-transfer identity", 30.0, measure_transfer},
      {5, "Phi_ell convolution identity", 120.0, phi_convolution},
      {6, "exponent soundness", 120.0, exponent_soundness},
      {7, "moderateness and norm robustness of A", 30.0, envelope_properties},
      {8, "vanishing-moment verification", 60.0, vanishing_moments},
      {9, "admissibility discrimination", 60.0, admissibility},
      {10, "desk-scale inversion", 300.0, inversion},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s: %s (%.2f s of %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
