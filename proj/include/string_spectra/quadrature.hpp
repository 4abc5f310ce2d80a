#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace string_spectra {

/// Composite Simpson on uniformly spaced samples; needs an odd sample count >= 3.
inline double composite_simpson(std::span<const double> f, double h) {
  if (f.size() < 3 || f.size() % 2 == 0)
    throw std::invalid_argument("composite_simpson: need an odd number (>= 3) of samples");
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) (i % 2 ? odd : even) += f[i];
  return h / 3.0 * (f.front() + 4.0 * odd + 2.0 * even + f.back());
}

/// Nodes and weights of a composite Simpson rule on [a, b] split at `breaks`.
/// Each piece gets an even number of panels, about `density` per unit length.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

inline QuadratureRule piecewise_simpson(double a, double b, std::span<const double> breaks,
                                        int density) {
  std::vector<double> ends{a};
  for (double x : breaks)
    if (x > a && x < b) ends.push_back(x);
  ends.push_back(b);
  std::sort(ends.begin(), ends.end());

  QuadratureRule rule;
  for (std::size_t p = 0; p + 1 < ends.size(); ++p) {
    double lo = ends[p], hi = ends[p + 1];
    if (hi - lo <= 0.0) continue;
    int m = std::max(2, static_cast<int>(std::ceil((hi - lo) * density)));
    if (m % 2) ++m;
    double h = (hi - lo) / m;
    for (int i = 0; i <= m; ++i) {
      double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      double x = i == m ? hi : lo + i * h;
      if (i == 0 && !rule.nodes.empty() && rule.nodes.back() == x) {
        rule.weights.back() += w * h / 3.0;
        continue;
      }
      rule.nodes.push_back(x);
      rule.weights.push_back(w * h / 3.0);
    }
  }
  return rule;
}

/// Integral with a one-step grid-doubling error estimate.
struct RefinedIntegral {
  double value;
  double error;
};

template <class F>
RefinedIntegral refined_simpson(F&& f, double a, double b, std::span<const double> breaks,
                                int density) {
  double coarse = piecewise_simpson(a, b, breaks, density).integrate(f);
  double fine = piecewise_simpson(a, b, breaks, 2 * density).integrate(f);
  return {fine, std::abs(fine - coarse)};
}

}  // namespace string_spectra
