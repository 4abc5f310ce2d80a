#pragma once

// Dirichlet eigenpairs of -y'' = lambda rho(x) y on [0,1] by shooting on the
// Pruefer phase angle.
//
// With y = r sin(theta), y' = s r cos(theta) for a constant scale s > 0:
//   theta'  = s cos^2(theta) + (lambda rho / s) sin^2(theta),   theta(0) = 0
//   (ln r)' = (s - lambda rho / s) sin(theta) cos(theta),       r(0) = 1
// theta crosses multiples of pi exactly at zeros of y and is increasing there,
// so theta(1; lambda_n) = n pi for every s. s = 1 is the classical substitution;
// the solver uses s = n pi so the phase advances at a nearly uniform rate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "density.hpp"
#include "quadrature.hpp"

namespace string_spectra {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  /// RK4 steps over [0,1] (before per-index scaling)
  int steps = 4096;
  double rel_tol = 1e-10;
  /// uniform output grid for eigenfunctions (odd, for Simpson)
  int grid_size = 2049;
  /// indices above this scale the step count linearly with n
  int index_cap = 64;
};

struct PruferState {
  double x;
  double theta;
  double log_r;
};

namespace detail {

inline int effective_steps(const SolverOptions& opt, int n) {
  int k = n <= opt.index_cap ? 1 : (n + opt.index_cap - 1) / opt.index_cap;
  return opt.steps * k;
}

// Integrates the phase system across [a, b] on the global uniform lattice
// {k / steps}, with forced step boundaries at density breakpoints.
// Full = true also carries ln r and the running integral of rho y^2 (unnormalized).
template <bool Full>
struct PhaseIntegrator {
  const Density& rho;
  double lambda;
  double scale;
  int steps;

  struct State {
    double theta = 0.0;
    double log_r = 0.0;
    double mass = 0.0;
  };

  State rhs(double x, const State& u) const {
    double p = rho.value(x);
    double sn = std::sin(u.theta), cs = std::cos(u.theta);
    State d;
    d.theta = scale * cs * cs + (lambda * p / scale) * sn * sn;
    if constexpr (Full) {
      d.log_r = (scale - lambda * p / scale) * sn * cs;
      d.mass = p * std::exp(2.0 * u.log_r) * sn * sn;
    }
    return d;
  }

  static State axpy(const State& u, double h, const State& k) {
    return {u.theta + h * k.theta, u.log_r + h * k.log_r, u.mass + h * k.mass};
  }

  State rk4(double x, const State& u, double h) const {
    State k1 = rhs(x, u);
    State k2 = rhs(x + 0.5 * h, axpy(u, 0.5 * h, k1));
    State k3 = rhs(x + 0.5 * h, axpy(u, 0.5 * h, k2));
    State k4 = rhs(x + h, axpy(u, h, k3));
    State out;
    out.theta = u.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
    if constexpr (Full) {
      out.log_r = u.log_r + h / 6.0 * (k1.log_r + 2.0 * k2.log_r + 2.0 * k3.log_r + k4.log_r);
      out.mass = u.mass + h / 6.0 * (k1.mass + 2.0 * k2.mass + 2.0 * k3.mass + k4.mass);
    }
    return out;
  }

  State advance(State u, double a, double b) const {
    if (b <= a) return u;
    const auto& br = rho.breakpoints();
    auto bit = std::upper_bound(br.begin(), br.end(), a);
    long k = static_cast<long>(std::floor(a * steps)) + 1;
    double x = a;
    while (x < b) {
      double next_lattice = static_cast<double>(k) / steps;
      if (next_lattice <= x) {
        ++k;
        continue;
      }
      double next = std::min(next_lattice, b);
      if (bit != br.end() && *bit < next) next = *bit;
      u = rk4(x, u, next - x);
      if (bit != br.end() && *bit <= next) ++bit;
      if (next == next_lattice) ++k;
      x = next;
    }
    return u;
  }
};

// lambda_n * rho is about (n pi)^2, so s = n pi keeps theta' near n pi
// and is invariant under rho -> c rho, lambda -> lambda / c.
inline double search_scale(int n) { return n * std::numbers::pi; }

inline double terminal_angle(const Density& d, double lambda, double scale, int steps) {
  PhaseIntegrator<false> integ{d, lambda, scale, steps};
  return integ.advance({}, 0.0, 1.0).theta;
}

}  // namespace detail

/// theta(1; lambda) for the classical substitution (scale 1).
inline double prufer_terminal_angle(const Density& d, double lambda, int steps = 4096) {
  return detail::terminal_angle(d, lambda, 1.0, steps);
}

/// theta(1; lambda) for the scaled substitution y' = s r cos(theta).
inline double prufer_terminal_angle(const Density& d, double lambda, double scale, int steps) {
  if (!(scale > 0.0)) throw std::invalid_argument("Pruefer scale must be positive");
  return detail::terminal_angle(d, lambda, scale, steps);
}

/// n-th Dirichlet eigenvalue: bisection on theta(1; lambda) - n pi inside the
/// comparison bracket [n^2 pi^2 / max rho, n^2 pi^2 / min rho], then a
/// safeguarded secant polish.
inline double eigenvalue(const Density& d, int n, const SolverOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("eigenvalue index must be >= 1");
  if (!(opt.rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  const double pi = std::numbers::pi;
  const double target = n * pi;
  const double s = detail::search_scale(n);
  const int steps = detail::effective_steps(opt, n);
  auto f = [&](double lam) { return detail::terminal_angle(d, lam, s, steps) - target; };

  double lo = n * n * pi * pi / d.ceiling() * (1.0 - 1e-3);
  double hi = n * n * pi * pi / d.floor() * (1.0 + 1e-3);
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < 60 && flo > 0.0; ++i) flo = f(lo *= 0.5);
  for (int i = 0; i < 60 && fhi < 0.0; ++i) fhi = f(hi *= 2.0);
  if (!(flo <= 0.0 && fhi >= 0.0))
    throw SolverError("eigenvalue " + std::to_string(n) + ": failed to bracket");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;

  while (hi - lo > 1e-3 * 0.5 * (lo + hi)) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
    (fm < 0.0 ? flo : fhi) = fm;
  }

  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  for (int it = 0; it < 200; ++it) {
    double x2 = f1 != f0 ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (lo + hi);
    if (!(x2 > lo && x2 < hi)) x2 = 0.5 * (lo + hi);
    double f2 = f(x2);
    if (f2 == 0.0) return x2;
    if (f2 < 0.0) {
      lo = x2;
      flo = f2;
    } else {
      hi = x2;
      fhi = f2;
    }
    double step = std::abs(x2 - x1);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (step <= opt.rel_tol * x2 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * x2)
      return x2;
  }
  throw SolverError("eigenvalue " + std::to_string(n) + ": secant polish did not converge");
}

inline double eigenvalue(const Density& d, int n, double rel_tol) {
  SolverOptions opt;
  opt.rel_tol = rel_tol;
  return eigenvalue(d, n, opt);
}

/// Eigenvalue with its sampled, normalized eigenfunction.
/// Normalized so that the integral of rho y^2 is 1, with y'(0) > 0.
class Eigenpair {
 public:
  int index = 0;
  double lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> y;
  std::vector<double> dy;
  /// interior zeros z_1 < ... < z_{n-1}
  std::vector<double> zeros;

  const Density& density() const { return rho_; }

  /// Pruefer state (unscaled amplitude) at arbitrary x, integrated from the
  /// nearest grid point to the left.
  PruferState state(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    std::size_t k = grid_index(x);
    if (grid[k] == x) return {x, theta_[k], log_r_[k]};
    Integrator integ{rho_, lambda, scale_, steps_};
    Integrator::State u{theta_[k], log_r_[k], 0.0};
    u = integ.advance(u, grid[k], x);
    return {x, u.theta, u.log_r};
  }

  /// (y, y') at arbitrary x
  std::pair<double, double> evaluate(double x) const {
    if (x <= 0.0) return {0.0, dy.front()};
    if (x >= 1.0) return {0.0, dy.back()};
    std::size_t k = grid_index(x);
    if (grid[k] == x) return {y[k], dy[k]};
    PruferState p = state(x);
    double r = norm_ * std::exp(p.log_r);
    return {r * std::sin(p.theta), scale_ * r * std::cos(p.theta)};
  }

  double value(double x) const { return evaluate(x).first; }

  /// theta(1); equals n pi up to the eigenvalue tolerance
  double terminal_phase() const { return theta_.back(); }

  /// Integral of rho y^2 accumulated alongside the phase, after normalization.
  double normalization_integral() const { return mass_ * norm_ * norm_; }

  friend Eigenpair eigenfunction(const Density& d, int n, const SolverOptions& opt);

 private:
  using Integrator = detail::PhaseIntegrator<true>;

  explicit Eigenpair(Density rho) : rho_(std::move(rho)) {}

  std::size_t grid_index(double x) const {
    auto m = static_cast<double>(grid.size() - 1);
    auto k = static_cast<std::size_t>(std::floor(x * m));
    return std::min(k, grid.size() - 2);
  }

  Density rho_;
  double scale_ = 1.0;
  double norm_ = 1.0;
  double mass_ = 0.0;
  int steps_ = 0;
  std::vector<double> theta_;
  std::vector<double> log_r_;
};

inline Eigenpair eigenfunction(const Density& d, int n, const SolverOptions& opt = {}) {
  if (opt.grid_size < 3 || opt.grid_size % 2 == 0)
    throw std::invalid_argument("grid_size must be odd and >= 3");
  const double pi = std::numbers::pi;

  Eigenpair ep(d);
  ep.index = n;
  ep.lambda = eigenvalue(d, n, opt);
  ep.scale_ = detail::search_scale(n);
  ep.steps_ = detail::effective_steps(opt, n);

  const int g = opt.grid_size;
  ep.grid.resize(g);
  for (int i = 0; i < g; ++i) ep.grid[i] = static_cast<double>(i) / (g - 1);
  ep.grid.back() = 1.0;

  Eigenpair::Integrator integ{d, ep.lambda, ep.scale_, ep.steps_};
  Eigenpair::Integrator::State u{};
  ep.theta_.resize(g);
  ep.log_r_.resize(g);
  ep.theta_[0] = 0.0;
  ep.log_r_[0] = 0.0;
  for (int i = 1; i < g; ++i) {
    u = integ.advance(u, ep.grid[i - 1], ep.grid[i]);
    ep.theta_[i] = u.theta;
    ep.log_r_[i] = u.log_r;
  }
  ep.mass_ = u.mass;
  if (!(u.mass > 0.0) || !std::isfinite(u.mass))
    throw SolverError("eigenfunction " + std::to_string(n) + ": degenerate amplitude");
  ep.norm_ = 1.0 / std::sqrt(u.mass);

  ep.y.resize(g);
  ep.dy.resize(g);
  for (int i = 0; i < g; ++i) {
    double r = ep.norm_ * std::exp(ep.log_r_[i]);
    ep.y[i] = r * std::sin(ep.theta_[i]);
    ep.dy[i] = ep.scale_ * r * std::cos(ep.theta_[i]);
  }
  ep.y.front() = 0.0;
  ep.y.back() = 0.0;

  // theta is increasing wherever it crosses j*pi, so bisection on the phase is exact.
  for (int i = 0; i + 1 < g; ++i) {
    for (int j = static_cast<int>(std::floor(ep.theta_[i] / pi)) + 1;
         j < n && j * pi <= ep.theta_[i + 1]; ++j) {
      if (j * pi <= ep.theta_[i]) continue;
      double a = ep.grid[i], b = ep.grid[i + 1];
      for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
        double m = 0.5 * (a + b);
        (ep.state(m).theta < j * pi ? a : b) = m;
      }
      ep.zeros.push_back(0.5 * (a + b));
    }
  }
  if (static_cast<int>(ep.zeros.size()) != n - 1)
    throw SolverError("eigenfunction " + std::to_string(n) + ": found " +
                      std::to_string(ep.zeros.size()) + " interior zeros, expected " +
                      std::to_string(n - 1));
  return ep;
}

inline Eigenpair eigenfunction(const Density& d, int n, int grid_size) {
  SolverOptions opt;
  opt.grid_size = grid_size;
  return eigenfunction(d, n, opt);
}

struct Spectrum {
  Density density;
  std::vector<Eigenpair> pairs;

  std::vector<double> eigenvalues() const {
    std::vector<double> out;
    for (const auto& p : pairs) out.push_back(p.lambda);
    return out;
  }
};

inline Spectrum spectrum(const Density& d, int n_max, const SolverOptions& opt = {}) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  Spectrum s{d, {}};
  s.pairs.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    s.pairs.push_back(eigenfunction(d, n, opt));
    if (n > 1 && !(s.pairs[n - 1].lambda > s.pairs[n - 2].lambda))
      throw SolverError("eigenvalues not strictly increasing at n = " + std::to_string(n));
  }
  return s;
}

/// First n_max eigenvalues only (no eigenfunctions).
inline std::vector<double> eigenvalues(const Density& d, int n_max, const SolverOptions& opt = {}) {
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(eigenvalue(d, n, opt));
  return out;
}

}  // namespace string_spectra
