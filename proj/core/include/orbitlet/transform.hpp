#pragma once

#include "orbitlet/atoms.hpp"
#include "orbitlet/embeddedness.hpp"
#include "orbitlet/groups.hpp"
#include "orbitlet/sampled.hpp"

#include <complex>
#include <filesystem>
#include <vector>

namespace orbitlet::transform {

using atoms::Atom;
using atoms::Complex;
using groups::GroupElement;
using groups::GroupSpec;
using groups::Matrix;
using groups::Vector;

struct DilationSample {
  Matrix h;
  double weight = 1.0;  // Haar density times the parameter cell measure
};

struct TransformGrid {
  Grid translations;
  std::vector<DilationSample> dilations;
  void validate() const;
};

struct DilationSampling {
  double scale_range = 3.0;  // r in [-R, R]
  int scale_points = 25;
  double shear_range = 2.0;  // t in [-T, T]^{d-1}
  int shear_points = 9;
  int angle_points = 16;
  bool both_signs = true;
};

// Trapezoidal samples over the group's Haar chart.
TransformGrid make_transform_grid(const GroupSpec& spec, const Grid& translations, const DilationSampling& s = {});

struct CoefficientField {
  Grid translations;
  std::vector<DilationSample> dilations;
  std::vector<std::vector<Complex>> values;  // [dilation][translation]
  void validate() const;
};

enum class Method { Auto, Fft, Direct };

struct TransformOptions {
  Method method = Method::Auto;
  unsigned threads = 1;
};

SampledFunction quasi_regular_apply(const Vector& x, const Matrix& h, const Atom& psi, const Grid& grid);

CoefficientField analyze(const SampledFunction& f, const Atom& psi, const TransformGrid& grid,
                         const TransformOptions& opts = {});
SampledFunction synthesize(const CoefficientField& coeffs, const Atom& psi, double c_psi,
                           const TransformOptions& opts = {});

// Sum over the sampled dilations of weight * |psi_hat(h^T xi)|^2.
double calderon_sum(const Atom& psi, const std::vector<DilationSample>& dilations, const Vector& xi);
// The truncated admissibility constant: the plateau (maximum) of the Calderon sum along the base-point ray.
double c_psi(const GroupSpec& spec, const Atom& psi, const TransformGrid& grid);

// Discrete L^{p,q}_v norm with v(x,h) = (1+|x|+|h|)^s w(h).
double coefficient_norm(const CoefficientField& coeffs, const GroupSpec& spec, const embeddedness::WeightSpec& w);

// Binary "ORBC": magic, u32 version, u32 dim, u64 dilation count, translation grid as in ORBF,
// then per dilation d*d f64 matrix (row-major) and f64 weight, then complex values [dilation][translation].
void write_coefficients(const CoefficientField& c, const std::filesystem::path& path);
CoefficientField read_coefficients(const std::filesystem::path& path);

}  // namespace orbitlet::transform
