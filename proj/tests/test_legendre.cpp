#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <string_spectra/corpus.hpp>
#include <string_spectra/fd_oracle.hpp>
#include <string_spectra/legendre.hpp>

using namespace string_spectra;
constexpr double pi = std::numbers::pi;

TEST(Legendre, UnitCoefficientIsIdentity) {
  auto map = legendre_map(make_constant(1.0), make_linear(1.0, 1.0));
  EXPECT_NEAR(map.sigma(), 1.0, 1e-15);
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) EXPECT_NEAR(map.t_of_x(x), x, 1e-14);
  EXPECT_NEAR(sl_eigenvalue(make_constant(1.0), make_linear(1.0, 1.0), 2), 26.4649367091799, 1e-8);
}

TEST(Legendre, ConstantCoefficientScalesSpectrum) {
  double lam = sl_eigenvalue(make_constant(4.0), make_constant(1.0), 1);
  EXPECT_NEAR(lam, 4.0 * pi * pi, 1e-9 * lam);
}

TEST(Legendre, LinearCoefficientClosedForm) {
  auto p = make_linear(1.0, 1.0);
  auto map = legendre_map(p, make_constant(1.0));
  EXPECT_NEAR(map.sigma(), std::log(2.0), 1e-12);
  for (double x : {0.1, 0.5, 0.77})
    EXPECT_NEAR(map.t_of_x(x), std::log1p(x) / std::log(2.0), 1e-12);
  // reference from an independent 30-digit shooting computation
  EXPECT_NEAR(sl_eigenvalue(p, make_constant(1.0), 1), 14.3376707698641, 1e-8 * 14.34);
  EXPECT_NEAR(sl_eigenvalue(p, make_constant(1.0), 2), 57.4802845737815, 1e-8 * 57.48);
}

TEST(Legendre, MapIsMonotoneAndInvertible) {
  auto p = make_piecewise_linear({0.0, 0.3, 1.0}, {0.5, 3.0, 1.0});
  auto map = legendre_map(p, make_constant(1.0));
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    double x = i / 200.0;
    double t = map.t_of_x(x);
    EXPECT_GT(t, prev);
    prev = t;
    EXPECT_NEAR(map.x_of_t(t), x, 1e-10);
  }
  EXPECT_EQ(map.t_of_x(0.0), 0.0);
  EXPECT_EQ(map.t_of_x(1.0), 1.0);
}

TEST(Legendre, EffectiveDensityIsScaledProduct) {
  auto p = make_linear(1.0, 1.0);
  auto rho = make_quadratic(-1.0, 1.0, 1.0);
  auto map = legendre_map(p, rho);
  const auto& eff = map.effective_density();
  double s2 = map.sigma() * map.sigma();
  for (double t : {0.1, 0.4, 0.9}) {
    double x = map.x_of_t(t);
    EXPECT_NEAR(eff.value(t), s2 * p.value(x) * rho.value(x), 1e-12);
  }
}

TEST(Legendre, KinksOfCoefficientsMapToKinksInT) {
  auto p = make_piecewise_linear({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0});
  auto map = legendre_map(p, make_constant(1.0));
  ASSERT_EQ(map.effective_density().breakpoints().size(), 1u);
  EXPECT_NEAR(map.effective_density().breakpoints()[0], map.t_of_x(0.5), 1e-14);
}

TEST(Legendre, AgreesWithFluxFormOracle) {
  for (const auto& [p, rho] : random_sl_pairs(6, 7)) {
    auto lam = sl_eigenvalues(legendre_map(p, rho), 4);
    auto ref = fd_sl_reference(p, rho, 4, 1000);
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(lam[n], ref[n], 1e-5 * ref[n]);
  }
}
