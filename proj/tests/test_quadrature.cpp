#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <string_spectra/quadrature.hpp>

using namespace string_spectra;

TEST(Quadrature, SimpsonExactOnCubics) {
  std::vector<double> f(9);
  const double h = 1.0 / 8;
  for (int i = 0; i <= 8; ++i) {
    double x = i * h;
    f[i] = x * x * x - 2 * x + 1;
  }
  EXPECT_NEAR(composite_simpson(f, h), 0.25 - 1.0 + 1.0, 1e-15);
}

TEST(Quadrature, SimpsonNeedsOddSampleCount) {
  std::vector<double> f(4, 1.0);
  EXPECT_THROW(composite_simpson(f, 0.1), std::invalid_argument);
}

TEST(Quadrature, PiecewiseRuleContainsBreaks) {
  std::vector<double> breaks{0.3, 0.71};
  auto rule = piecewise_simpson(0.0, 1.0, breaks, 16);
  for (double b : breaks) {
    bool found = false;
    for (double x : rule.nodes) found = found || x == b;
    EXPECT_TRUE(found) << b;
  }
  double total = 0.0;
  for (double w : rule.weights) total += w;
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Quadrature, KinkedIntegrandIsExactWhenAligned) {
  std::vector<double> breaks{0.4};
  auto f = [](double x) { return std::abs(x - 0.4); };
  auto r = refined_simpson(f, 0.0, 1.0, breaks, 8);
  EXPECT_NEAR(r.value, 0.5 * 0.16 + 0.5 * 0.36, 1e-15);
  EXPECT_LT(r.error, 1e-15);
}

TEST(Quadrature, RefinementErrorTracksTruth) {
  auto f = [](double x) { return std::sin(std::numbers::pi * x); };
  auto r = refined_simpson(f, 0.0, 1.0, {}, 8);
  double truth = 2.0 / std::numbers::pi;
  EXPECT_NEAR(r.value, truth, 1e-5);
  EXPECT_GT(r.error, std::abs(r.value - truth));
}
