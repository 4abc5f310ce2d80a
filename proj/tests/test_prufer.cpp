#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <string_spectra/corpus.hpp>
#include <string_spectra/prufer.hpp>

using namespace string_spectra;
constexpr double pi = std::numbers::pi;

// Reference values from an independent 30-digit shooting computation.
TEST(Eigenvalue, LinearDensityMatchesHighPrecisionShooting) {
  auto d = make_linear(1.0, 1.0);
  EXPECT_NEAR(eigenvalue(d, 1), 6.54839530600059, 1e-9 * 6.55);
  EXPECT_NEAR(eigenvalue(d, 2), 26.4649367091799, 1e-9 * 26.5);
  EXPECT_NEAR(eigenvalue(d, 3), 59.6741736139836, 1e-9 * 59.7);
}

TEST(Eigenvalue, QuadraticDensitiesMatchHighPrecisionShooting) {
  auto convex = make_quadratic(4.0, -4.0, 2.0);
  EXPECT_NEAR(eigenvalue(convex, 1), 8.70851189437683, 1e-9 * 8.7);
  EXPECT_NEAR(eigenvalue(convex, 2), 30.571521829557, 1e-9 * 30.6);
  auto concave = make_quadratic(-2.0, 2.0, 1.0);
  EXPECT_NEAR(eigenvalue(concave, 1), 6.87701036650817, 1e-9 * 6.9);
  EXPECT_NEAR(eigenvalue(concave, 2), 29.0139723766058, 1e-9 * 29.0);
}

TEST(Eigenvalue, ConstantDensityClosedForm) {
  for (double c : {1.0, 0.25, 7.0})
    for (int n = 1; n <= 20; ++n) {
      double exact = n * n * pi * pi / c;
      EXPECT_NEAR(eigenvalue(make_constant(c), n), exact, 1e-9 * exact) << "c=" << c << " n=" << n;
    }
}

TEST(Eigenvalue, TerminalAngleIsMonotoneInLambda) {
  auto d = make_piecewise_linear({0.0, 0.4, 1.0}, {0.5, 2.0, 1.0});
  double prev = -1.0;
  for (double lam = 1.0; lam < 400.0; lam *= 1.3) {
    double th = prufer_terminal_angle(d, lam);
    EXPECT_GT(th, prev);
    prev = th;
  }
}

TEST(Eigenvalue, TerminalAngleHitsMultiplesOfPi) {
  auto d = make_quadratic(-1.0, 1.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    double lam = eigenvalue(d, n, 1e-13);
    EXPECT_NEAR(prufer_terminal_angle(d, lam, 8192), n * pi, 1e-6);
  }
}

TEST(Eigenvalue, BracketRespectsComparisonBounds) {
  auto d = make_linear(3.0, 0.5);
  for (int n = 1; n <= 6; ++n) {
    double lam = eigenvalue(d, n);
    EXPECT_GE(lam, n * n * pi * pi / d.ceiling());
    EXPECT_LE(lam, n * n * pi * pi / d.floor());
  }
}

TEST(Eigenvalue, StrictlyIncreasing) {
  for (const auto& d : oracle_corpus()) {
    auto lam = eigenvalues(d, 8);
    for (int n = 1; n < 8; ++n) EXPECT_GT(lam[n], lam[n - 1]);
  }
}

TEST(Eigenvalue, ScalingAndReflectionCovariance) {
  for (const auto& d : concave_corpus()) {
    double base = eigenvalue(d, 3);
    EXPECT_NEAR(eigenvalue(scaled(d, 4.0), 3) * 4.0 / base, 1.0, 2e-10);
    EXPECT_NEAR(eigenvalue(reflected(d), 3) / base, 1.0, 2e-10);
  }
}

TEST(Eigenvalue, TolerancesAreHonoured) {
  auto d = make_quadratic(-2.0, 2.0, 1.0);
  double tight = eigenvalue(d, 2, 1e-14);
  double loose = eigenvalue(d, 2, 1e-4);
  EXPECT_NEAR(loose, tight, 1e-4 * tight);
}

TEST(Eigenvalue, InvalidArguments) {
  auto d = make_constant(1.0);
  EXPECT_THROW(eigenvalue(d, 0), std::invalid_argument);
  SolverOptions bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(eigenvalue(d, 1, bad), std::invalid_argument);
  SolverOptions even;
  even.grid_size = 100;
  EXPECT_THROW(eigenfunction(d, 1, even), std::invalid_argument);
}

TEST(Eigenfunction, ConstantDensitySineModes) {
  auto d = make_constant(1.0);
  for (int n = 1; n <= 5; ++n) {
    auto ep = eigenfunction(d, n);
    ASSERT_EQ(static_cast<int>(ep.zeros.size()), n - 1);
    for (int k = 1; k < n; ++k) EXPECT_NEAR(ep.zeros[k - 1], static_cast<double>(k) / n, 1e-10);
    for (double x : {0.1, 0.37, 0.8})
      EXPECT_NEAR(ep.value(x), std::sqrt(2.0) * std::sin(n * pi * x), 1e-8);
    EXPECT_NEAR(ep.dy.front(), std::sqrt(2.0) * n * pi, 1e-7);
  }
}

TEST(Eigenfunction, NormalizedAndZeroAtEnds) {
  for (const auto& d : oracle_corpus()) {
    auto ep = eigenfunction(d, 3);
    EXPECT_NEAR(ep.normalization_integral(), 1.0, 1e-12);
    EXPECT_EQ(ep.y.front(), 0.0);
    EXPECT_EQ(ep.y.back(), 0.0);
    EXPECT_GT(ep.dy.front(), 0.0);
    EXPECT_NEAR(ep.terminal_phase(), 3 * pi, 1e-6);
  }
}

TEST(Eigenfunction, ZerosAreSignChanges) {
  auto d = make_piecewise_linear({0.0, 0.3, 0.7, 1.0}, {0.5, 2.0, 1.8, 0.2});
  auto ep = eigenfunction(d, 5);
  ASSERT_EQ(ep.zeros.size(), 4u);
  for (double z : ep.zeros) {
    EXPECT_LT(std::abs(ep.value(z)), 1e-9);
    EXPECT_LT(ep.value(z - 1e-4) * ep.value(z + 1e-4), 0.0);
  }
}

TEST(Eigenfunction, OffGridEvaluationMatchesGrid) {
  auto d = make_linear(2.0, 0.5);
  auto ep = eigenfunction(d, 4);
  for (std::size_t i = 1; i + 1 < ep.grid.size(); i += 97) {
    auto [y, dy] = ep.evaluate(ep.grid[i]);
    EXPECT_DOUBLE_EQ(y, ep.y[i]);
    EXPECT_DOUBLE_EQ(dy, ep.dy[i]);
    double x = ep.grid[i] + 1e-9;
    EXPECT_NEAR(ep.value(x), ep.y[i] + 1e-9 * ep.dy[i], 1e-12);
  }
}

TEST(Spectrum, PairsInOrder) {
  auto s = spectrum(make_quadratic(-1.0, 1.0, 1.0), 5);
  ASSERT_EQ(s.pairs.size(), 5u);
  auto lam = s.eigenvalues();
  for (int n = 1; n < 5; ++n) EXPECT_GT(lam[n], lam[n - 1]);
  EXPECT_THROW(spectrum(make_constant(1.0), 0), std::invalid_argument);
}

TEST(Eigenvalue, HighIndexScalesSteps) {
  auto d = make_linear(1.0, 1.0);
  double lam = eigenvalue(d, 100);
  // WKB: sqrt(lambda) * int sqrt(rho) = n pi to leading order
  double integral = (2.0 / 3.0) * (std::pow(2.0, 1.5) - 1.0);
  EXPECT_NEAR(std::sqrt(lam) * integral / (100 * pi), 1.0, 1e-4);
}
