#pragma once

#include <complex>

namespace orbitlet::bspline {

// Cardinal B-spline N_k of degree k, supported on [0, k+1].
double cardinal(int k, double x);
// m-th derivative of N_k via the backward-difference identity; requires m <= k - 1.
double cardinal_derivative(int k, int m, double x);
// Fourier transform of N_k with the e^{-2 pi i omega x} convention.
std::complex<double> cardinal_spectrum(int k, double omega);

// N_k rescaled so that its support is [lo, hi].
struct Scaled {
  int degree = 3;
  double lo = -1.0;
  double hi = 1.0;

  double step() const { return (hi - lo) / (degree + 1); }
  double value(double x) const;
  double derivative(int m, double x) const;
  std::complex<double> spectrum(double omega) const;
};

}  // namespace orbitlet::bspline
