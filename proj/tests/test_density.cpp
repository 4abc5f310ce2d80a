#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <string_spectra/density.hpp>

using namespace string_spectra;

TEST(Density, ConstantEvaluatesEverywhere) {
  auto d = make_constant(2.5);
  EXPECT_EQ(d.kind(), DensityKind::constant);
  EXPECT_DOUBLE_EQ(d.value(0.0), 2.5);
  EXPECT_DOUBLE_EQ(d.value(0.7), 2.5);
  EXPECT_DOUBLE_EQ(d.derivative(0.3), 0.0);
  EXPECT_TRUE(d.is_constant());
  EXPECT_DOUBLE_EQ(d.relative_variation(), 0.0);
}

TEST(Density, LinearValueSlopeAndRange) {
  auto d = make_linear(1.0, 1.0);
  EXPECT_DOUBLE_EQ(d.value(0.5), 1.5);
  EXPECT_DOUBLE_EQ(d.derivative(0.2), 1.0);
  EXPECT_DOUBLE_EQ(d.floor(), 1.0);
  EXPECT_DOUBLE_EQ(d.ceiling(), 2.0);
  EXPECT_DOUBLE_EQ(d.relative_variation(), 1.0);
}

TEST(Density, QuadraticRangeIncludesVertex) {
  auto d = make_quadratic(-2.0, 2.0, 1.0);
  EXPECT_NEAR(d.ceiling(), 1.5, 1e-12);
  EXPECT_NEAR(d.floor(), 1.0, 1e-12);
  EXPECT_NEAR(d.derivative(0.25), 1.0, 1e-12);
}

TEST(Density, PiecewiseLinearInterpolatesAndReportsKinks) {
  auto d = make_piecewise_linear({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0});
  EXPECT_DOUBLE_EQ(d.value(0.25), 1.5);
  EXPECT_DOUBLE_EQ(d.value(0.75), 1.5);
  ASSERT_EQ(d.breakpoints().size(), 1u);
  EXPECT_DOUBLE_EQ(d.breakpoints()[0], 0.5);
  EXPECT_DOUBLE_EQ(d.derivative(0.5), -2.0);
}

TEST(Density, ProductMultipliesFactors) {
  auto d = make_product({make_linear(1.0, 1.0), make_constant(3.0)}, 2.0);
  EXPECT_DOUBLE_EQ(d.value(0.5), 2.0 * 1.5 * 3.0);
  EXPECT_NEAR(d.derivative(0.5), 6.0, 1e-12);
  EXPECT_NEAR(d.floor(), 6.0, 1e-9);
  EXPECT_NEAR(d.ceiling(), 12.0, 1e-9);
}

TEST(Density, RejectsNonPositive) {
  EXPECT_THROW(make_constant(0.0), DensityError);
  EXPECT_THROW(make_linear(-2.0, 1.0), DensityError);
  EXPECT_THROW(make_quadratic(4.0, -4.0, 0.5), DensityError);
  EXPECT_THROW(make_piecewise_linear({0.0, 0.5, 1.0}, {1.0, -0.1, 1.0}), DensityError);
}

TEST(Density, RejectsMalformedKnots) {
  EXPECT_THROW(make_piecewise_linear({0.0, 0.6, 0.4, 1.0}, {1, 1, 1, 1}), DensityError);
  EXPECT_THROW(make_piecewise_linear({0.1, 1.0}, {1, 1}), DensityError);
  EXPECT_THROW(make_piecewise_linear({0.0, 1.0}, {1, 1, 1}), DensityError);
}

TEST(Density, ScaledAndReflected) {
  auto d = make_quadratic(-1.0, 0.5, 1.0);
  auto s = scaled(d, 3.0);
  auto r = reflected(d);
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(s.value(x), 3.0 * d.value(x), 1e-14);
    EXPECT_NEAR(r.value(x), d.value(1.0 - x), 1e-14);
  }
  auto pw = reflected(make_piecewise_linear({0.0, 0.3, 1.0}, {1.0, 2.0, 1.5}));
  ASSERT_EQ(pw.breakpoints().size(), 1u);
  EXPECT_NEAR(pw.breakpoints()[0], 0.7, 1e-15);
}

TEST(Density, ConcavityClassification) {
  EXPECT_TRUE(is_concave(make_constant(1.0)));
  EXPECT_TRUE(is_concave(make_linear(-0.5, 1.0)));
  EXPECT_TRUE(is_concave(make_quadratic(-1.0, 1.0, 1.0)));
  EXPECT_FALSE(is_concave(make_quadratic(4.0, -4.0, 2.0)));
  EXPECT_TRUE(is_concave(make_piecewise_linear({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0})));
  EXPECT_FALSE(is_concave(make_piecewise_linear({0.0, 0.5, 1.0}, {2.0, 1.0, 2.0})));
  EXPECT_TRUE(is_concave(make_product({make_quadratic(-1.0, 1.0, 1.0), make_constant(2.0)})));
}

TEST(Density, HatInterpolantMatchesAtNodes) {
  auto d = make_quadratic(-2.0, 2.0, 1.0);
  std::vector<double> nodes{0.3, 0.6};
  auto hat = hat_interpolant(d, nodes);
  for (double x : {0.0, 0.3, 0.6, 1.0}) EXPECT_NEAR(hat.value(x), d.value(x), 1e-15);
  // concave density lies above its chords
  for (int i = 0; i <= 100; ++i) EXPECT_GE(d.value(i / 100.0), hat.value(i / 100.0) - 1e-15);
  EXPECT_THROW(hat_interpolant(d, std::vector<double>{1.5}), DensityError);
}

TEST(HomotopyFamily, AffineBlendEndpointsAndDerivative) {
  auto a = make_constant(1.0);
  auto b = make_linear(1.0, 1.0);
  auto f = HomotopyFamily::affine(a, b);
  EXPECT_DOUBLE_EQ(f.at(0.0).value(0.5), 1.0);
  EXPECT_DOUBLE_EQ(f.at(1.0).value(0.5), 1.5);
  EXPECT_NEAR(f.at(0.4).value(0.5), 1.2, 1e-15);
  EXPECT_DOUBLE_EQ(f.dtau(0.5, 0.3), 0.5);
  EXPECT_THROW(f.at(1.2), DensityError);
  EXPECT_FALSE(f.is_stationary());
}

TEST(HomotopyFamily, PiecewiseBlendStaysPiecewise) {
  auto a = make_piecewise_linear({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0});
  auto b = make_piecewise_linear({0.0, 0.25, 1.0}, {1.0, 1.5, 1.0});
  auto m = HomotopyFamily::affine(a, b).at(0.5);
  EXPECT_EQ(m.kind(), DensityKind::piecewise_linear);
  EXPECT_EQ(m.breakpoints().size(), 2u);
  EXPECT_NEAR(m.value(0.5), 0.5 * 2.0 + 0.5 * b.value(0.5), 1e-15);
}

TEST(HomotopyFamily, SlopeFamilyDomain) {
  auto f = HomotopyFamily::slope(1.0);
  EXPECT_TRUE(f.contains(2.0));
  EXPECT_TRUE(f.contains(-0.5));
  EXPECT_FALSE(f.contains(-1.0));
  EXPECT_DOUBLE_EQ(f.at(2.0).value(0.5), 2.0);
  EXPECT_DOUBLE_EQ(f.dtau(0.3, 1.0), 0.3);
  EXPECT_EQ(f.at(0.0).kind(), DensityKind::constant);
}

TEST(Density, SharedHandlesAreCheapAndImmutable) {
  auto d = make_linear(1.0, 2.0);
  Density copy = d;
  EXPECT_EQ(&d.form(), &copy.form());
  EXPECT_DOUBLE_EQ(copy.value(1.0), 3.0);
}
