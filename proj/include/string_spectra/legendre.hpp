#pragma once

// Legendre substitution for -(p y')' = lambda rho y with Dirichlet ends:
//   t(x) = (1/sigma) * int_0^x dz / p(z),   sigma = int_0^1 dz / p(z)
// turns the problem into the string equation -y_tt = lambda sigma^2 p(x(t)) rho(x(t)) y.

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "density.hpp"
#include "prufer.hpp"

namespace string_spectra {

namespace detail {

// Cubic Hermite segment on [x0, x1] with values f0, f1 and slopes m0, m1.
inline double hermite(double x, double x0, double x1, double f0, double f1, double m0, double m1) {
  double h = x1 - x0;
  double s = (x - x0) / h;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * f1 +
         (s3 - s2) * h * m1;
}

// Fritsch-Carlson limiter: shrink endpoint slopes until the segment is monotone.
inline void limit_monotone(std::vector<double>& xs, std::vector<double>& fs,
                           std::vector<double>& left, std::vector<double>& right) {
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double delta = (fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i]);
    double a = left[i] / delta, b = right[i] / delta;
    double r2 = a * a + b * b;
    if (r2 > 9.0) {
      double tau = 3.0 / std::sqrt(r2);
      left[i] = tau * a * delta;
      right[i] = tau * b * delta;
    }
  }
}

// Monotone cubic table of t(x) = (1/sigma) int_0^x dz/p and its inverse.
class LegendreTable final : public CoordinateMap {
 public:
  LegendreTable(const Density& p, int table_size) : p_(p) {
    if (table_size < 3) throw std::invalid_argument("legendre table needs >= 3 points");
    for (int i = 0; i < table_size; ++i) x_.push_back(static_cast<double>(i) / (table_size - 1));
    x_.back() = 1.0;
    x_.insert(x_.end(), p.breakpoints().begin(), p.breakpoints().end());
    std::sort(x_.begin(), x_.end());
    x_.erase(std::unique(x_.begin(), x_.end()), x_.end());

    // cumulative Simpson on each cell; cells never straddle a kink of p
    std::vector<double> cum(x_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      double a = x_[i], b = x_[i + 1];
      double cell = (b - a) / 6.0 * (1.0 / p.value(a) + 4.0 / p.value(0.5 * (a + b)) + 1.0 / p.value(b));
      cum[i + 1] = cum[i] + cell;
    }
    sigma_ = cum.back();
    t_.resize(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) t_[i] = cum[i] / sigma_;
    t_.back() = 1.0;

    // exact slopes dt/dx = 1/(sigma p); one-sided values coincide since p is continuous
    std::vector<double> tl(x_.size() - 1), tr(x_.size() - 1), xl(x_.size() - 1), xr(x_.size() - 1);
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      tl[i] = 1.0 / (sigma_ * p.value(x_[i]));
      tr[i] = 1.0 / (sigma_ * p.value(x_[i + 1]));
      xl[i] = sigma_ * p.value(x_[i]);
      xr[i] = sigma_ * p.value(x_[i + 1]);
    }
    limit_monotone(x_, t_, tl, tr);
    limit_monotone(t_, x_, xl, xr);
    t_left_ = std::move(tl);
    t_right_ = std::move(tr);
    x_left_ = std::move(xl);
    x_right_ = std::move(xr);
  }

  double sigma() const { return sigma_; }

  double t_of_x(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    std::size_t i = cell(x_, x);
    return hermite(x, x_[i], x_[i + 1], t_[i], t_[i + 1], t_left_[i], t_right_[i]);
  }

  double x_of_t(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    std::size_t i = cell(t_, t);
    return hermite(t, t_[i], t_[i + 1], x_[i], x_[i + 1], x_left_[i], x_right_[i]);
  }

  double operator()(double t) const override { return x_of_t(t); }
  double derivative(double t) const override { return sigma_ * p_.value(x_of_t(t)); }
  double inverse(double x) const override { return t_of_x(x); }
  std::string name() const override { return "legendre"; }

  std::size_t size() const { return x_.size(); }

 private:
  static std::size_t cell(const std::vector<double>& v, double x) {
    auto it = std::upper_bound(v.begin(), v.end(), x);
    std::size_t i = it == v.begin() ? 0 : static_cast<std::size_t>(it - v.begin()) - 1;
    return std::min(i, v.size() - 2);
  }

  Density p_;
  double sigma_ = 0.0;
  std::vector<double> x_, t_;
  std::vector<double> t_left_, t_right_, x_left_, x_right_;
};

}  // namespace detail

/// Legendre substitution for a (p, rho) pair; the effective density in t is
/// sigma^2 p(x(t)) rho(x(t)), a product density over the tabulated map.
class LegendreMap {
 public:
  double sigma() const { return table_->sigma(); }
  double t_of_x(double x) const { return table_->t_of_x(x); }
  double x_of_t(double t) const { return table_->x_of_t(t); }
  const Density& effective_density() const { return effective_; }
  const Density& p() const { return p_; }
  const Density& rho() const { return rho_; }

  friend LegendreMap legendre_map(const Density& p, const Density& rho, int table_size);

 private:
  LegendreMap(Density p, Density rho, std::shared_ptr<const detail::LegendreTable> table,
              Density effective)
      : p_(std::move(p)), rho_(std::move(rho)), table_(std::move(table)), effective_(std::move(effective)) {}

  Density p_;
  Density rho_;
  std::shared_ptr<const detail::LegendreTable> table_;
  Density effective_;
};

inline LegendreMap legendre_map(const Density& p, const Density& rho, int table_size = 8193) {
  auto table = std::make_shared<const detail::LegendreTable>(p, table_size);
  double s2 = table->sigma() * table->sigma();
  Density eff = make_product({p, rho}, s2, table);
  return LegendreMap(p, rho, table, eff);
}

/// n-th Dirichlet eigenvalue of -(p y')' = lambda rho y via the transformed string problem.
inline double sl_eigenvalue(const Density& p, const Density& rho, int n, const SolverOptions& opt = {}) {
  return eigenvalue(legendre_map(p, rho).effective_density(), n, opt);
}

inline double sl_eigenvalue(const Density& p, const Density& rho, int n, double rel_tol) {
  SolverOptions opt;
  opt.rel_tol = rel_tol;
  return sl_eigenvalue(p, rho, n, opt);
}

inline std::vector<double> sl_eigenvalues(const LegendreMap& map, int n_max, const SolverOptions& opt = {}) {
  return eigenvalues(map.effective_density(), n_max, opt);
}

}  // namespace string_spectra
