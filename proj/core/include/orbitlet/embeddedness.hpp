#pragma once

#include "orbitlet/groups.hpp"
#include "orbitlet/orbit.hpp"
#include "orbitlet/quadrature.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace orbitlet::embeddedness {

using groups::GroupElement;
using groups::GroupSpec;

enum class Provenance { Analytic, Empirical, User };
std::string to_string(Provenance p);

struct ExponentSet {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
  Provenance provenance = Provenance::Analytic;
  void validate() const;  // throws ParseError on negative or non-finite entries
};

// (1 + |h|)^k (1 + |h^-1|)^k
struct PowerWeight {
  double k = 0.0;
};
// max(1, Delta_G(h)); used directly as the control weight for unweighted L^p.
struct MaxDelta {};

struct WeightSpec {
  double p = 2.0;  // infinity allowed
  double q = 2.0;
  double s = 0.0;
  std::variant<MaxDelta, PowerWeight> base = MaxDelta{};
  void validate() const;
};

struct EmbeddingReport {
  int dim = 0;
  ExponentSet exponents;
  int ell_temperate = 0;
  int ell_strong = 0;
  int moments_analyzing = 0;
  int moments_atom = 0;
  std::optional<int> closed_form_atom_order;
  std::vector<std::string> notes;
};

ExponentSet analytic_exponents(const GroupSpec& spec, const WeightSpec& w);
std::pair<double, double> fallback_exponents(double e2, int d, int dim_h);
ExponentSet combine_exponents(std::span<const ExponentSet> es);

int index_temperate(const ExponentSet& e, double s, int d);
int index_strong(const ExponentSet& e, double s, int d);
int required_moments(int ell, int d);
int shearlet_atom_order(const GroupSpec& spec);

double base_weight(const WeightSpec& w, const GroupSpec& spec, const GroupElement& h);
// The separated control weight w_0(h); for MaxDelta the base weight already is one.
double control_weight(const WeightSpec& w, const GroupSpec& spec, const GroupElement& h);

EmbeddingReport pipeline(const GroupSpec& spec, const WeightSpec& w);

enum class Verdict { Bounded, Growth, Inconclusive };
std::string to_string(Verdict v);

struct InequalityReport {
  std::string name;
  double exponent = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> stage_sup;  // running supremum per stage
  std::optional<double> least_exponent;
};

struct EmpiricalOptions {
  std::int64_t budget = 100000;
  int stages = 5;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double scale_box = 2.0;  // R at stage 0
  double shear_box = 2.0;  // T at stage 0
  double slack = 0.05;
  int confirm_stages = 3;
  double resolution = 0.1;
};

struct EmpiricalReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<InequalityReport> inequalities;  // w0, norm, det, modular
  std::int64_t samples = 0;
};

EmpiricalReport empirical_exponent_check(const GroupSpec& spec, const ExponentSet& e, const WeightSpec& w,
                                         const EmpiricalOptions& opts = {});

struct PhiResult {
  double value = 0.0;
  bool converged = true;
  long long evaluations = 0;
};
PhiResult phi_ell_direct(const GroupSpec& spec, const GroupElement& h, int ell,
                         const quadrature::Options& opts = {});
PhiResult phi_ell_convolution(const GroupSpec& spec, const GroupElement& h, int ell,
                              const quadrature::Options& opts = {});

}  // namespace orbitlet::embeddedness
