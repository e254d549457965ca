#include "orbitlet/bspline.hpp"

#include "orbitlet/error.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace orbitlet::bspline {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - (std::numbers::pi * x) * (std::numbers::pi * x) / 6.0;
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

}  // namespace

double cardinal(int k, double x) {
  if (k < 0) throw ParseError("spline degree must be nonnegative");
  if (x < 0.0 || x >= k + 1.0) return 0.0;
  // Cox-de Boor on integer knots, evaluated on the single active interval.
  const int j = static_cast<int>(std::floor(x));
  std::vector<double> b(k + 1, 0.0);
  b[j] = 1.0;  // b[i] holds N_deg(x - i)
  for (int deg = 1; deg <= k; ++deg) {
    for (int i = 0; i <= k; ++i) {
      const double u = x - i;
      const double left = b[i] * u;
      const double right = i + 1 <= k ? b[i + 1] * (deg + 1 - u) : 0.0;
      b[i] = (left + right) / deg;
    }
  }
  return b[0];
}

double cardinal_derivative(int k, int m, double x) {
  if (m < 0 || m > k - 1) throw UnsupportedInput("derivative order exceeds spline smoothness");
  double s = 0.0;
  for (int j = 0; j <= m; ++j) s += ((j % 2) ? -1.0 : 1.0) * binomial(m, j) * cardinal(k - m, x - j);
  return s;
}

std::complex<double> cardinal_spectrum(int k, double omega) {
  const double mag = std::pow(sinc(omega), k + 1);
  return std::polar(mag, -std::numbers::pi * omega * (k + 1));
}

double Scaled::value(double x) const { return cardinal(degree, (x - lo) / step()); }

double Scaled::derivative(int m, double x) const {
  if (m == 0) return value(x);
  return cardinal_derivative(degree, m, (x - lo) / step()) / std::pow(step(), m);
}

std::complex<double> Scaled::spectrum(double omega) const {
  const double h = step();
  return h * std::polar(1.0, -2.0 * std::numbers::pi * omega * lo) * cardinal_spectrum(degree, h * omega);
}

}  // namespace orbitlet::bspline
