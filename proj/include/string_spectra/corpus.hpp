#pragma once

// Density corpora: a fixed hand-picked set and seeded random generators.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "density.hpp"

namespace string_spectra {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Concave piecewise-linear density with 2 to 6 knots: decreasing slopes, then
/// shifted so the minimum lies in [0.1, 1].
inline Density random_concave_piecewise(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> knot_count(2, 6);
  std::uniform_real_distribution<double> pos(0.05, 0.95);
  std::uniform_real_distribution<double> slope(-4.0, 4.0);
  std::uniform_real_distribution<double> floor_level(0.1, 1.0);

  const int k = knot_count(rng);
  std::vector<double> knots{0.0, 1.0};
  while (static_cast<int>(knots.size()) < k) {
    double x = pos(rng);
    bool clear = std::all_of(knots.begin(), knots.end(), [&](double y) { return std::abs(x - y) > 0.02; });
    if (clear) knots.push_back(x);
  }
  std::sort(knots.begin(), knots.end());

  std::vector<double> slopes(knots.size() - 1);
  for (double& s : slopes) s = slope(rng);
  std::sort(slopes.begin(), slopes.end(), std::greater<>());

  std::vector<double> values{0.0};
  for (std::size_t i = 0; i < slopes.size(); ++i)
    values.push_back(values.back() + slopes[i] * (knots[i + 1] - knots[i]));
  double lift = floor_level(rng) - *std::min_element(values.begin(), values.end());
  for (double& v : values) v += lift;
  return make_piecewise_linear(std::move(knots), std::move(values));
}

inline std::vector<Density> random_concave_corpus(std::size_t count, std::uint64_t seed = kDefaultSeed) {
  std::mt19937_64 rng(seed);
  std::vector<Density> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_concave_piecewise(rng));
  return out;
}

/// Positive density drawn from linear, concave quadratic or piecewise-linear
/// shapes with values roughly in [0.5, 3].
inline Density random_positive_density(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> shape(0, 2);
  std::uniform_real_distribution<double> level(0.5, 3.0);
  switch (shape(rng)) {
    case 0: {
      double a = level(rng), b = level(rng);
      return make_linear(b - a, a);
    }
    case 1: {
      double a = level(rng), b = level(rng);
      std::uniform_real_distribution<double> bulge(0.0, 2.0);
      double c = bulge(rng);
      // a + (b - a) x + c x (1 - x)
      return make_quadratic(-c, b - a + c, a);
    }
    default: {
      std::uniform_int_distribution<int> count(3, 5);
      int k = count(rng);
      std::vector<double> knots(static_cast<std::size_t>(k)), values(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        knots[i] = static_cast<double>(i) / (k - 1);
        values[i] = level(rng);
      }
      return make_piecewise_linear(std::move(knots), std::move(values));
    }
  }
}

/// Seeded (p, rho) pairs for Sturm-Liouville runs.
inline std::vector<std::pair<Density, Density>> random_sl_pairs(std::size_t count,
                                                                std::uint64_t seed = kDefaultSeed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Density, Density>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Density p = random_positive_density(rng);
    Density rho = random_positive_density(rng);
    out.emplace_back(std::move(p), std::move(rho));
  }
  return out;
}

/// Concave densities with closed forms: constants, linears, concave quadratics,
/// concave piecewise-linear shapes.
inline std::vector<Density> concave_corpus() {
  return {
      make_constant(1.0),
      make_constant(2.5),
      make_linear(1.0, 1.0),
      make_linear(-0.9, 1.0),
      make_linear(4.0, 0.5),
      make_linear(0.1, 1.0),
      make_quadratic(-1.0, 1.0, 1.0),
      make_quadratic(-4.0, 4.0, 0.2),
      make_quadratic(-2.0, 3.0, 0.5),
      make_quadratic(-0.5, 0.0, 1.0),
      make_piecewise_linear({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0}),
      make_piecewise_linear({0.0, 0.3, 1.0}, {0.5, 2.0, 1.0}),
      make_piecewise_linear({0.0, 0.25, 0.6, 1.0}, {0.2, 1.5, 1.9, 0.4}),
      make_piecewise_linear({0.0, 0.2, 0.4, 0.7, 0.9, 1.0}, {1.0, 1.8, 2.2, 2.3, 1.9, 1.5}),
  };
}

/// Mixed corpus used against the finite-difference oracle: the concave set
/// plus convex and oscillating shapes.
inline std::vector<Density> oracle_corpus() {
  auto out = concave_corpus();
  std::vector<Density> extra{
      make_quadratic(3.0, -3.0, 1.0),
      make_quadratic(1.0, 0.0, 0.1),
      make_linear(-0.99, 1.0),
      make_piecewise_linear({0.0, 0.5, 1.0}, {2.0, 0.5, 2.0}),
      make_piecewise_linear({0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, 3.0, 0.5, 3.0, 1.0}),
      make_piecewise_linear({0.0, 0.1, 1.0}, {5.0, 0.3, 0.3}),
      make_product({make_linear(1.0, 1.0), make_quadratic(-1.0, 1.0, 1.0)}),
      make_product({make_linear(-0.5, 1.0), make_linear(0.5, 1.0)}, 2.0),
  };
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

}  // namespace string_spectra
