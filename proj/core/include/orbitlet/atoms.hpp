#pragma once

#include "orbitlet/bspline.hpp"
#include "orbitlet/groups.hpp"
#include "orbitlet/orbit.hpp"
#include "orbitlet/quadrature.hpp"
#include "orbitlet/sampled.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace orbitlet::atoms {

using groups::GroupSpec;
using groups::Vector;
using Complex = std::complex<double>;

enum class OperatorKind { FirstPartial, MixedPartial, Laplacian };
std::string to_string(OperatorKind k);
OperatorKind operator_kind_from_string(const std::string& s);

// D_O for the group's dual orbit: d/dx_1, d_1 d_2 ... d_d, or the Laplacian.
OperatorKind orbit_differential_operator(const GroupSpec& spec);

struct Term {
  double coef = 1.0;
  std::vector<int> alpha;
};

// D_O applied `power` times, expanded into monomial derivatives.
struct DerivativePlan {
  OperatorKind kind = OperatorKind::FirstPartial;
  int dim = 1;
  int power = 0;
  std::vector<Term> terms;

  // Moment order induced in O^c: power for first/mixed partials, 2*power for the Laplacian.
  int order() const;
  std::vector<int> max_alpha() const;
  Complex symbol(const Vector& xi) const;
};

// Smallest plan reaching moment order r.
DerivativePlan derivative_plan(OperatorKind kind, int dim, int r);

struct SplineBase {
  std::vector<bspline::Scaled> axes;
  int dim() const { return static_cast<int>(axes.size()); }
  static SplineBase uniform(int dim, int degree, double lo = -1.0, double hi = 1.0);
};

struct Atom {
  SplineBase base;
  DerivativePlan plan;
  int r = 0;

  int dim() const { return base.dim(); }
  double value(const Vector& x) const;
  Complex spectrum(const Vector& xi) const;
  bool in_support(const Vector& x) const;
  // Plan term t restricted to axis a: the 1-D factor f_a^{(alpha_a)}.
  double factor(std::size_t term, int axis, double x) const;
  Complex factor_spectrum(std::size_t term, int axis, double omega) const;
};

// Requires degree >= alpha_i + 1 on every differentiated axis.
Atom make_atom(OperatorKind kind, int r, const SplineBase& base);
Atom make_atom(const GroupSpec& spec, int r, const SplineBase& base);

SampledFunction sample(const Atom& a, const Grid& g);

struct ProbeLine {
  Vector eta;
  Vector direction;
  std::vector<double> t;
  std::vector<double> magnitude;
  double slope = 0.0;
  double residual = 0.0;
  bool usable = true;
};

struct MomentCheck {
  std::vector<int> alpha;
  Vector eta;
  double value = 0.0;  // |integral|
  double scale = 0.0;  // L1 scale of x^alpha psi
  bool pass = true;
};

struct SpectrumProbe {
  std::vector<ProbeLine> lines;
  double fitted_order = 0.0;
  double residual = 0.0;
  std::vector<MomentCheck> moments;
  bool moments_pass = true;
  std::string verdict;  // "verified", "failed" or "inconclusive"
};

struct ProbeOptions {
  int t_min_exp = -14;  // probe t = 2^j for j in [t_min_exp, t_max_exp]
  int t_max_exp = -4;
  double moment_tol = 1e-6;
  double slope_tol = 0.1;
  double residual_tol = 0.05;
};

// Probe points eta in O^c with unit normals u.
std::vector<std::pair<Vector, Vector>> complement_probes(const orbit::OrbitDescriptor& o);

SpectrumProbe verify_vanishing_moments(const Atom& psi, const orbit::OrbitDescriptor& o, int r_claimed,
                                       const ProbeOptions& opts = {});
SpectrumProbe verify_vanishing_moments(const SampledFunction& psi, const orbit::OrbitDescriptor& o, int r_claimed,
                                       ProbeOptions opts = {});

// Orbit density Phi(xi) = Delta_G(h(xi)) with h(xi) from the orbit section.
double orbit_density(const GroupSpec& spec, const Vector& xi);

enum class TailVerdict { Finite, Divergent, Inconclusive };
std::string to_string(TailVerdict v);

struct ShellSeries {
  std::string direction;  // "complement" or "infinity"
  int axis = 0;           // -1 for radial shells
  std::vector<double> shells;
  std::vector<double> partial_sums;
  TailVerdict verdict = TailVerdict::Inconclusive;
};

struct AdmissibilityOptions {
  int shells = 12;  // per direction
  double finite_ratio = 0.9;
  int window = 4;
  quadrature::Options quad{.gauss_points = 8, .subpanels = 2, .interval_panels = 8, .rel_tol = 1e-6};
  unsigned threads = 1;
};

struct AdmissibilityReport {
  TailVerdict verdict = TailVerdict::Inconclusive;
  double integral = 0.0;
  std::vector<ShellSeries> series;
};

using SpectrumFn = std::function<Complex(const Vector&)>;

AdmissibilityReport admissibility_check(const GroupSpec& spec, const Atom& psi, const AdmissibilityOptions& opts = {});
AdmissibilityReport admissibility_check(const GroupSpec& spec, const SpectrumFn& psi_hat,
                                        const AdmissibilityOptions& opts = {});

}  // namespace orbitlet::atoms
