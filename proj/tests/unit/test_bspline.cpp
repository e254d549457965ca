#include "orbitlet/bspline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace orbitlet::bspline;

TEST(BSpline, PartitionOfUnityAndSupport) {
  for (int k : {0, 1, 3, 5}) {
    for (double x : {0.1, 0.37, 0.5, 0.93}) {
      double s = 0.0;
      for (int j = -k - 1; j <= 1; ++j) s += cardinal(k, x - j);
      EXPECT_NEAR(s, 1.0, 1e-13) << k << " " << x;
    }
    EXPECT_EQ(cardinal(k, -0.01), 0.0);
    EXPECT_EQ(cardinal(k, k + 1.01), 0.0);
  }
  // Cubic at its center: 2/3.
  EXPECT_NEAR(cardinal(3, 2.0), 2.0 / 3.0, 1e-15);
}

TEST(BSpline, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (int k : {3, 5}) {
    for (int m = 1; m < k; ++m) {
      for (double x : {0.7, 1.9, 2.45}) {
        const double fd = (cardinal_derivative(k, m - 1, x + h) - cardinal_derivative(k, m - 1, x - h)) / (2 * h);
        EXPECT_NEAR(cardinal_derivative(k, m, x), fd, 1e-5 * (1 + std::abs(fd))) << k << " " << m << " " << x;
      }
    }
  }
}

TEST(BSpline, SpectrumMatchesNumericalTransform) {
  const int k = 3;
  for (double w : {0.0, 0.2, 0.75, 1.3}) {
    std::complex<double> s = 0.0;
    const int n = 4000;
    const double dx = (k + 1.0) / n;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) * dx;
      s += cardinal(k, x) * std::exp(std::complex<double>(0, -2 * std::numbers::pi * w * x)) * dx;
    }
    EXPECT_NEAR(std::abs(cardinal_spectrum(k, w) - s), 0.0, 1e-6) << w;
  }
  EXPECT_NEAR(std::abs(cardinal_spectrum(5, 0.0) - 1.0), 0.0, 1e-15);
}

TEST(BSpline, ScaledKeepsSupportAndMass) {
  const Scaled s{5, -2.0, 4.0};
  EXPECT_DOUBLE_EQ(s.step(), 1.0);
  EXPECT_EQ(s.value(-2.001), 0.0);
  EXPECT_EQ(s.value(4.001), 0.0);
  EXPECT_GT(s.value(1.0), 0.0);
  // Integral equals the spectrum at zero.
  double mass = 0.0;
  for (int i = 0; i < 6000; ++i) mass += s.value(-2.0 + (i + 0.5) * 1e-3) * 1e-3;
  EXPECT_NEAR(mass, s.spectrum(0.0).real(), 1e-8);
  const double h = 1e-5;
  EXPECT_NEAR(s.derivative(1, 0.3), (s.value(0.3 + h) - s.value(0.3 - h)) / (2 * h), 1e-6);
}
