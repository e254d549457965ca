#pragma once

#include <functional>
#include <span>
#include <vector>

namespace orbitlet::quadrature {

// Nested product quadrature built from Gauss-Legendre panels on dyadic shells.
//   Line:      R, a core [c-u, c+u] plus shells c +- u[2^j, 2^{j+1}], j >= 0
//   Punctured: R \ {0}, shells +- u[2^j, 2^{j+1}] for j in Z (both toward 0 and infinity)
//   HalfLine:  (0, inf), the positive half of Punctured
//   Interval:  [lo, hi] with a fixed panel count
// Shell sweeps stop once `patience` consecutive shells each add less than rel_tol of the
// running total.
enum class AxisKind { Line, Punctured, HalfLine, Interval };

struct Axis {
  AxisKind kind = AxisKind::Line;
  double lo = 0.0;  // Interval bounds
  double hi = 1.0;
  double center = 0.0;  // Line
  double unit = 1.0;    // shell scale
  static Axis line(double center = 0.0, double unit = 1.0) { return {AxisKind::Line, 0, 1, center, unit}; }
  static Axis punctured(double unit = 1.0) { return {AxisKind::Punctured, 0, 1, 0, unit}; }
  static Axis half_line(double unit = 1.0) { return {AxisKind::HalfLine, 0, 1, 0, unit}; }
  static Axis interval(double lo, double hi) { return {AxisKind::Interval, lo, hi, 0, 1}; }
};

struct Options {
  int gauss_points = 8;   // one of 4, 6, 8, 10, 15, 20
  int subpanels = 2;      // panels per shell
  int interval_panels = 16;
  double rel_tol = 1e-7;
  int patience = 3;
  int min_shells = 3;
  int max_shells = 64;    // per direction
  unsigned threads = 1;   // fan-out over the outermost axis
};

struct Result {
  double value = 0.0;
  bool converged = true;
  long long evaluations = 0;
};

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};
const Rule& gauss_legendre(int n);

// Integral of f over [a, b] with `panels` equal Gauss-Legendre panels.
double panel_sum(const std::function<double(double)>& f, double a, double b, int panels, const Rule& rule);

using Integrand = std::function<double(std::span<const double>)>;
Result integrate(std::span<const Axis> axes, const Integrand& f, const Options& opts = {});

}  // namespace orbitlet::quadrature
