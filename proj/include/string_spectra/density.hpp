#pragma once

// Coefficient functions on [0,1]: closed-form parametric densities evaluated on
// demand, plus the one-parameter homotopy families used by the ratio checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace string_spectra {

/// Smallest admissible infimum of a density on [0,1].
inline constexpr double kMinFloor = 1e-8;

/// Default slack for the midpoint concavity test on smooth kinds.
inline constexpr double kConcavityTol = 1e-10;

class DensityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class DensityKind { constant, linear, quadratic, piecewise_linear, product, blend };

inline const char* to_string(DensityKind k) {
  switch (k) {
    case DensityKind::constant: return "constant";
    case DensityKind::linear: return "linear";
    case DensityKind::quadratic: return "quadratic";
    case DensityKind::piecewise_linear: return "piecewise_linear";
    case DensityKind::product: return "product";
    case DensityKind::blend: return "blend";
  }
  return "unknown";
}

/// Monotone change of variable x = x(t) on [0,1]; used to compose a density
/// with a reparameterization (the Legendre substitution).
class CoordinateMap {
 public:
  virtual ~CoordinateMap() = default;
  virtual double operator()(double t) const = 0;
  virtual double derivative(double t) const = 0;
  virtual double inverse(double x) const = 0;
  virtual std::string name() const = 0;
};

class Density;

namespace forms {
struct Constant {
  double value;
};
struct Linear {
  double slope;
  double intercept;
};
/// a x^2 + b x + c
struct Quadratic {
  double a;
  double b;
  double c;
};
struct PiecewiseLinear {
  std::vector<double> knots;
  std::vector<double> values;
};
/// scale * prod factors(x(t)); x(t) = t when map is null.
struct Product {
  std::vector<Density> factors;
  double scale = 1.0;
  std::shared_ptr<const CoordinateMap> map;
};
/// (1 - weight) * start + weight * end
struct Blend {
  std::vector<Density> endpoints;  // {start, end}
  double weight;
};
}  // namespace forms

using DensityForm = std::variant<forms::Constant, forms::Linear, forms::Quadratic,
                                 forms::PiecewiseLinear, forms::Product, forms::Blend>;

/// Immutable, cheaply copyable handle to a positive coefficient function on [0,1].
class Density {
 public:
  double operator()(double x) const { return value(x); }
  double value(double x) const;
  /// Derivative; for piecewise kinds the slope of the piece to the right of x
  /// (the last piece at x = 1).
  double derivative(double x) const;

  DensityKind kind() const { return static_cast<DensityKind>(rep_->form.index()); }
  const DensityForm& form() const { return rep_->form; }

  /// inf over [0,1]
  double floor() const { return rep_->floor; }
  /// sup over [0,1]
  double ceiling() const { return rep_->ceiling; }

  /// Interior points where the density is not smooth, strictly inside (0,1), sorted.
  const std::vector<double>& breakpoints() const { return rep_->breaks; }

  bool is_constant() const { return rep_->ceiling - rep_->floor <= 1e-15 * rep_->ceiling; }

  /// (max - min) / min
  double relative_variation() const { return (rep_->ceiling - rep_->floor) / rep_->floor; }

  friend Density make_density(DensityForm form);

 private:
  struct Rep {
    DensityForm form;
    double floor = 0.0;
    double ceiling = 0.0;
    std::vector<double> breaks;
  };
  explicit Density(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::size_t piece_index(const std::vector<double>& knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
  return std::min(i, knots.size() - 2);
}

inline void merge_sorted_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (x <= 0.0 || x >= 1.0) continue;
    if (out.empty() || x - out.back() > 1e-14) out.push_back(x);
  }
  v = std::move(out);
}

// Golden-section refinement of an extremum bracketed by [a, b].
template <class F>
double refine_extremum(F&& f, double a, double b, bool maximize) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto better = [&](double u, double v) { return maximize ? u > v : u < v; };
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (better(fc, fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  double best = f(0.5 * (a + b));
  for (double v : {f(a), f(b), fc, fd}) best = maximize ? std::max(best, v) : std::min(best, v);
  return best;
}

// Sampled inf/sup for kinds without a closed-form extremum.
inline std::pair<double, double> sampled_range(const Density& d) {
  constexpr int kSamples = 4096;
  std::vector<double> xs;
  xs.reserve(kSamples + 1 + d.breakpoints().size());
  for (int i = 0; i <= kSamples; ++i) xs.push_back(static_cast<double>(i) / kSamples);
  for (double b : d.breakpoints()) xs.push_back(b);
  std::sort(xs.begin(), xs.end());
  std::size_t imin = 0, imax = 0;
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fs[i] = d.value(xs[i]);
    if (fs[i] < fs[imin]) imin = i;
    if (fs[i] > fs[imax]) imax = i;
  }
  auto bracket = [&](std::size_t i) {
    double a = xs[i == 0 ? 0 : i - 1];
    double b = xs[std::min(i + 1, xs.size() - 1)];
    return std::pair{a, b};
  };
  auto f = [&](double x) { return d.value(x); };
  auto [a0, b0] = bracket(imin);
  auto [a1, b1] = bracket(imax);
  double lo = std::min(fs[imin], refine_extremum(f, a0, b0, false));
  double hi = std::max(fs[imax], refine_extremum(f, a1, b1, true));
  return {lo, hi};
}

}  // namespace detail

inline double Density::value(double x) const {
  return std::visit(
      detail::overloaded{
          [](const forms::Constant& f) { return f.value; },
          [x](const forms::Linear& f) { return f.slope * x + f.intercept; },
          [x](const forms::Quadratic& f) { return (f.a * x + f.b) * x + f.c; },
          [x](const forms::PiecewiseLinear& f) {
            std::size_t i = detail::piece_index(f.knots, x);
            double w = (x - f.knots[i]) / (f.knots[i + 1] - f.knots[i]);
            return (1.0 - w) * f.values[i] + w * f.values[i + 1];
          },
          [x](const forms::Product& f) {
            double s = f.map ? (*f.map)(x) : x;
            double v = f.scale;
            for (const auto& g : f.factors) v *= g.value(s);
            return v;
          },
          [x](const forms::Blend& f) {
            return (1.0 - f.weight) * f.endpoints[0].value(x) + f.weight * f.endpoints[1].value(x);
          }},
      rep_->form);
}

inline double Density::derivative(double x) const {
  return std::visit(
      detail::overloaded{
          [](const forms::Constant&) { return 0.0; },
          [](const forms::Linear& f) { return f.slope; },
          [x](const forms::Quadratic& f) { return 2.0 * f.a * x + f.b; },
          [x](const forms::PiecewiseLinear& f) {
            std::size_t i = detail::piece_index(f.knots, x);
            return (f.values[i + 1] - f.values[i]) / (f.knots[i + 1] - f.knots[i]);
          },
          [x](const forms::Product& f) {
            double s = f.map ? (*f.map)(x) : x;
            double ds = f.map ? f.map->derivative(x) : 1.0;
            double sum = 0.0;
            for (std::size_t i = 0; i < f.factors.size(); ++i) {
              double term = f.factors[i].derivative(s);
              for (std::size_t j = 0; j < f.factors.size(); ++j)
                if (j != i) term *= f.factors[j].value(s);
              sum += term;
            }
            return f.scale * sum * ds;
          },
          [x](const forms::Blend& f) {
            return (1.0 - f.weight) * f.endpoints[0].derivative(x) +
                   f.weight * f.endpoints[1].derivative(x);
          }},
      rep_->form);
}

/// Validates a form and computes its range and breakpoints.
inline Density make_density(DensityForm form) {
  auto rep = std::make_shared<Density::Rep>();
  rep->form = std::move(form);
  auto check_finite = [](double v, const char* what) {
    if (!std::isfinite(v)) throw DensityError(std::string("non-finite ") + what);
  };

  std::visit(
      detail::overloaded{
          [&](const forms::Constant& f) {
            check_finite(f.value, "constant value");
            rep->floor = rep->ceiling = f.value;
          },
          [&](const forms::Linear& f) {
            check_finite(f.slope, "slope");
            check_finite(f.intercept, "intercept");
            rep->floor = std::min(f.intercept, f.intercept + f.slope);
            rep->ceiling = std::max(f.intercept, f.intercept + f.slope);
          },
          [&](const forms::Quadratic& f) {
            check_finite(f.a, "coefficient a");
            check_finite(f.b, "coefficient b");
            check_finite(f.c, "coefficient c");
            auto q = [&](double x) { return (f.a * x + f.b) * x + f.c; };
            double lo = std::min(q(0.0), q(1.0)), hi = std::max(q(0.0), q(1.0));
            if (f.a != 0.0) {
              double v = -f.b / (2.0 * f.a);
              if (v > 0.0 && v < 1.0) {
                lo = std::min(lo, q(v));
                hi = std::max(hi, q(v));
              }
            }
            rep->floor = lo;
            rep->ceiling = hi;
          },
          [&](const forms::PiecewiseLinear& f) {
            if (f.knots.size() != f.values.size())
              throw DensityError("piecewise_linear: knots and values differ in length");
            if (f.knots.size() < 2) throw DensityError("piecewise_linear: need at least two knots");
            if (f.knots.front() != 0.0 || f.knots.back() != 1.0)
              throw DensityError("piecewise_linear: knots must start at 0 and end at 1");
            for (std::size_t i = 0; i + 1 < f.knots.size(); ++i)
              if (!(f.knots[i] < f.knots[i + 1]))
                throw DensityError("piecewise_linear: knots must be strictly increasing");
            for (double v : f.values) check_finite(v, "piecewise value");
            rep->floor = *std::min_element(f.values.begin(), f.values.end());
            rep->ceiling = *std::max_element(f.values.begin(), f.values.end());
            rep->breaks.assign(f.knots.begin() + 1, f.knots.end() - 1);
          },
          [&](const forms::Product& f) {
            if (f.factors.empty()) throw DensityError("product: no factors");
            check_finite(f.scale, "product scale");
            if (f.scale <= 0.0) throw DensityError("product: scale must be positive");
            for (const auto& g : f.factors)
              for (double b : g.breakpoints())
                rep->breaks.push_back(f.map ? f.map->inverse(b) : b);
            detail::merge_sorted_unique(rep->breaks);
          },
          [&](const forms::Blend& f) {
            if (f.endpoints.size() != 2) throw DensityError("blend: need start and end");
            if (!(f.weight >= 0.0 && f.weight <= 1.0))
              throw DensityError("blend: weight outside [0,1]");
            for (const auto& g : f.endpoints)
              rep->breaks.insert(rep->breaks.end(), g.breakpoints().begin(), g.breakpoints().end());
            detail::merge_sorted_unique(rep->breaks);
          }},
      rep->form);

  Density d(rep);
  if (d.kind() == DensityKind::product || d.kind() == DensityKind::blend) {
    auto [lo, hi] = detail::sampled_range(d);
    rep->floor = lo;
    rep->ceiling = hi;
  }
  if (!(rep->floor >= kMinFloor))
    throw DensityError("density floor " + std::to_string(rep->floor) + " below minimum " +
                       std::to_string(kMinFloor));
  return d;
}

inline Density make_constant(double c) {
  if (!(c > 0.0)) throw DensityError("constant density must be positive");
  return make_density(forms::Constant{c});
}

inline Density make_linear(double slope, double intercept) {
  if (!(intercept > 0.0) || !(intercept + slope > 0.0))
    throw DensityError("linear density not positive on [0,1]");
  return make_density(forms::Linear{slope, intercept});
}

inline Density make_quadratic(double a, double b, double c) {
  return make_density(forms::Quadratic{a, b, c});
}

inline Density make_piecewise_linear(std::vector<double> knots, std::vector<double> values) {
  for (double v : values)
    if (!(v > 0.0)) throw DensityError("piecewise_linear: values must be positive");
  return make_density(forms::PiecewiseLinear{std::move(knots), std::move(values)});
}

inline Density make_product(std::vector<Density> factors, double scale = 1.0,
                            std::shared_ptr<const CoordinateMap> map = nullptr) {
  return make_density(forms::Product{std::move(factors), scale, std::move(map)});
}

/// c * d
inline Density scaled(const Density& d, double c) {
  if (!(c > 0.0)) throw DensityError("scale factor must be positive");
  if (const auto* k = std::get_if<forms::Constant>(&d.form())) return make_constant(c * k->value);
  return make_product({d}, c);
}

namespace detail {
// Piecewise-linear view of densities that are exactly piecewise linear.
inline bool as_piecewise(const Density& d, std::vector<double>& knots, std::vector<double>& values) {
  if (const auto* f = std::get_if<forms::Constant>(&d.form())) {
    knots = {0.0, 1.0};
    values = {f->value, f->value};
    return true;
  }
  if (const auto* f = std::get_if<forms::Linear>(&d.form())) {
    knots = {0.0, 1.0};
    values = {f->intercept, f->intercept + f->slope};
    return true;
  }
  if (const auto* f = std::get_if<forms::PiecewiseLinear>(&d.form())) {
    knots = f->knots;
    values = f->values;
    return true;
  }
  return false;
}
}  // namespace detail

/// x -> d(1 - x)
inline Density reflected(const Density& d) {
  return std::visit(
      detail::overloaded{
          [&](const forms::Constant&) { return d; },
          [](const forms::Linear& f) { return make_linear(-f.slope, f.intercept + f.slope); },
          [](const forms::Quadratic& f) {
            // a(1-x)^2 + b(1-x) + c
            return make_quadratic(f.a, -2.0 * f.a - f.b, f.a + f.b + f.c);
          },
          [](const forms::PiecewiseLinear& f) {
            std::vector<double> k(f.knots.size()), v(f.values.size());
            for (std::size_t i = 0; i < k.size(); ++i) {
              k[i] = 1.0 - f.knots[k.size() - 1 - i];
              v[i] = f.values[k.size() - 1 - i];
            }
            k.front() = 0.0;
            k.back() = 1.0;
            return make_piecewise_linear(std::move(k), std::move(v));
          },
          [](const forms::Product& f) {
            if (f.map) throw DensityError("reflection of a reparameterized product is not supported");
            std::vector<Density> g;
            for (const auto& h : f.factors) g.push_back(reflected(h));
            return make_product(std::move(g), f.scale);
          },
          [](const forms::Blend& f) {
            return make_density(forms::Blend{
                {reflected(f.endpoints[0]), reflected(f.endpoints[1])}, f.weight});
          }},
      d.form());
}

/// Midpoint concavity. Piecewise-linear kinds use the exact slope test.
inline bool is_concave(const Density& d, double tol = kConcavityTol) {
  std::vector<double> knots, values;
  if (detail::as_piecewise(d, knots, values)) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double s = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
      if (s > prev) return false;
      prev = s;
    }
    return true;
  }
  constexpr int kGrid = 512;
  std::vector<double> f(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) f[i] = d.value(static_cast<double>(i) / kGrid);
  for (int i = 0; i <= kGrid; ++i)
    for (int j = i + 2; j <= kGrid; j += 2)
      if (f[(i + j) / 2] < 0.5 * (f[i] + f[j]) - tol) return false;
  return true;
}

/// Continuous piecewise-linear interpolant of d through the given nodes.
/// 0 and 1 are added when missing.
inline Density hat_interpolant(const Density& d, std::span<const double> nodes) {
  std::vector<double> z(nodes.begin(), nodes.end());
  for (double x : z)
    if (!(x >= 0.0 && x <= 1.0)) throw DensityError("hat_interpolant: node outside [0,1]");
  z.push_back(0.0);
  z.push_back(1.0);
  std::sort(z.begin(), z.end());
  std::vector<double> k;
  for (double x : z)
    if (k.empty() || x - k.back() > 1e-14) k.push_back(x);
  k.back() = 1.0;
  std::vector<double> v(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) v[i] = d.value(k[i]);
  return make_piecewise_linear(std::move(k), std::move(v));
}

/// One-parameter density family: either the affine blend
/// tau * end + (1 - tau) * start on tau in [0,1], or the slope family tau * x + b.
class HomotopyFamily {
 public:
  enum class Rule { affine_blend, slope };

  static HomotopyFamily affine(Density start, Density end) {
    return HomotopyFamily(Rule::affine_blend, std::move(start), std::move(end), 0.0);
  }

  static HomotopyFamily slope(double intercept) {
    if (!(intercept >= kMinFloor)) throw DensityError("slope family: intercept must be positive");
    auto b = make_constant(intercept);
    return HomotopyFamily(Rule::slope, b, b, intercept);
  }

  Rule rule() const { return rule_; }
  const Density& start() const { return start_; }
  const Density& end() const { return end_; }
  double intercept() const { return intercept_; }

  bool contains(double tau) const {
    if (rule_ == Rule::affine_blend) return tau >= 0.0 && tau <= 1.0;
    return std::isfinite(tau) && intercept_ + std::min(tau, 0.0) >= kMinFloor;
  }

  Density at(double tau) const;

  /// Partial derivative of the family with respect to tau at x.
  double dtau(double x, double /*tau*/) const {
    if (rule_ == Rule::slope) return x;
    return end_.value(x) - start_.value(x);
  }

  /// Kinks of d(rho)/d(tau) in x.
  std::vector<double> breakpoints() const {
    if (rule_ == Rule::slope) return {};
    std::vector<double> b = start_.breakpoints();
    b.insert(b.end(), end_.breakpoints().begin(), end_.breakpoints().end());
    detail::merge_sorted_unique(b);
    return b;
  }

  bool is_stationary() const {
    if (rule_ == Rule::slope) return false;
    for (int i = 0; i <= 256; ++i) {
      double x = i / 256.0;
      if (start_.value(x) != end_.value(x)) return false;
    }
    return true;
  }

 private:
  HomotopyFamily(Rule rule, Density start, Density end, double intercept)
      : rule_(rule), start_(std::move(start)), end_(std::move(end)), intercept_(intercept) {}

  Rule rule_;
  Density start_;
  Density end_;
  double intercept_;
};

/// Member of the family at tau. Blends of piecewise-linear endpoints stay piecewise linear.
inline Density blend(const HomotopyFamily& family, double tau) {
  if (!family.contains(tau)) throw DensityError("tau outside the family domain");
  if (family.rule() == HomotopyFamily::Rule::slope) {
    if (tau == 0.0) return make_constant(family.intercept());
    return make_linear(tau, family.intercept());
  }
  if (tau == 0.0) return family.start();
  if (tau == 1.0) return family.end();

  std::vector<double> k0, v0, k1, v1;
  if (detail::as_piecewise(family.start(), k0, v0) && detail::as_piecewise(family.end(), k1, v1)) {
    std::vector<double> knots = k0;
    knots.insert(knots.end(), k1.begin(), k1.end());
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> values(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i)
      values[i] = (1.0 - tau) * family.start().value(knots[i]) + tau * family.end().value(knots[i]);
    if (knots.size() == 2 && values[0] == values[1]) return make_constant(values[0]);
    return make_piecewise_linear(std::move(knots), std::move(values));
  }
  return make_density(forms::Blend{{family.start(), family.end()}, tau});
}

inline Density HomotopyFamily::at(double tau) const { return blend(*this, tau); }

}  // namespace string_spectra
