#include <gtest/gtest.h>

#include <string_spectra/density_json.hpp>

using namespace string_spectra;

TEST(DensityJson, ParsesEveryKind) {
  EXPECT_EQ(parse_density(R"({"kind":"constant","value":2})").kind(), DensityKind::constant);
  EXPECT_DOUBLE_EQ(parse_density(R"({"kind":"linear","slope":1,"intercept":1})").value(1.0), 2.0);
  EXPECT_DOUBLE_EQ(parse_density(R"({"kind":"quadratic","a":-1,"b":1,"c":1})").value(0.5), 1.25);
  auto pw = parse_density(R"({"kind":"piecewise_linear","knots":[0,0.5,1],"values":[1,2,1]})");
  EXPECT_DOUBLE_EQ(pw.value(0.25), 1.5);
  auto prod = parse_density(
      R"({"kind":"product","factors":[{"kind":"constant","value":2},{"kind":"linear","slope":1,"intercept":1}],"scale":0.5})");
  EXPECT_DOUBLE_EQ(prod.value(1.0), 2.0);
  auto bl = parse_density(
      R"({"kind":"blend","start":{"kind":"constant","value":1},"end":{"kind":"constant","value":3},"weight":0.25})");
  EXPECT_DOUBLE_EQ(bl.value(0.4), 1.5);
}

TEST(DensityJson, RoundTripPreservesValuesAndDigest) {
  auto d = make_product({make_piecewise_linear({0.0, 0.3, 1.0}, {1.0, 2.0, 1.5}), make_quadratic(-1, 1, 2)}, 3.0);
  auto back = parse_density(density_to_json(d).dump());
  for (double x : {0.0, 0.3, 0.55, 1.0}) EXPECT_DOUBLE_EQ(back.value(x), d.value(x));
  EXPECT_EQ(density_digest(back), density_digest(d));
}

TEST(DensityJson, DigestSeparatesDensities) {
  EXPECT_NE(density_digest(make_constant(1.0)), density_digest(make_constant(2.0)));
  EXPECT_EQ(density_digest(make_linear(1, 1)).size(), 16u);
}

TEST(DensityJson, MalformedInputThrowsParseError) {
  EXPECT_THROW(parse_density("{not json"), ParseError);
  EXPECT_THROW(parse_density(R"([1,2])"), ParseError);
  EXPECT_THROW(parse_density(R"({"kind":"cubic"})"), ParseError);
  EXPECT_THROW(parse_density(R"({"kind":"linear","slope":1})"), ParseError);
  EXPECT_THROW(parse_density(R"({"kind":"constant","value":"one"})"), ParseError);
  EXPECT_THROW(parse_density(R"({"kind":"piecewise_linear","knots":[0,1],"values":1})"), ParseError);
}

TEST(DensityJson, InvalidDensityStillRejected) {
  EXPECT_THROW(parse_density(R"({"kind":"constant","value":-1})"), DensityError);
}

TEST(DensityJson, MissingFileIsParseError) {
  EXPECT_THROW(load_density("/nonexistent/density.json"), ParseError);
}
