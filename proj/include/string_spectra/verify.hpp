#pragma once

// Numerical checks of the eigenvalue-ratio machinery for -y'' = lambda rho y:
// ratio and gap bounds for concave densities, the eigenvalue derivative along a
// density family, the boundary identity for test functions g, crossing structure
// of consecutive eigenfunctions, homotopy monotonicity, and structural facts
// (zero counts, interlacing, Wronskian sign, normalization, covariance).
//
// Every check produces VerificationReport rows with pass <=> margin >= -tolerance.
// Rows with in_hypothesis = false are evidence only and never gate a run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "density.hpp"
#include "density_json.hpp"
#include "fd_oracle.hpp"
#include "legendre.hpp"
#include "prufer.hpp"
#include "quadrature.hpp"

namespace string_spectra {

struct VerifyOptions {
  SolverOptions solver;
  /// Simpson panels per unit length; doubled once for the error estimate
  int quad_density = 2048;
  double ratio_tol = 1e-8;
  double keller_step = 1e-4;
  double keller_tol = 1e-4;
  double huang_tol = 1e-6;
  double normalization_tol = 1e-8;
  double homotopy_step_tol = 1e-9;
  double oracle_tol = 1e-6;
  double sl_oracle_tol = 1e-5;
  int oracle_mesh = 1000;
  int oracle_fine_mesh = 2000;
  /// Log the per-interval homotopy integrals at every tau
  bool log_homotopy_intervals = true;
};

struct VerificationReport {
  std::string claim;
  std::string density_digest;
  int n = 0;
  int m = 0;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool in_hypothesis = true;
  double runtime_ms = 0.0;
  std::string note;
};

using Reports = std::vector<VerificationReport>;

namespace detail {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline VerificationReport row(std::string claim, std::string digest, int n, int m, double tau,
                              double margin, double tolerance, bool in_hypothesis,
                              double runtime_ms = 0.0, std::string note = {}) {
  VerificationReport r;
  r.claim = std::move(claim);
  r.density_digest = std::move(digest);
  r.n = n;
  r.m = m;
  r.tau = tau;
  r.margin = margin;
  r.tolerance = tolerance;
  r.pass = margin >= -tolerance;
  r.in_hypothesis = in_hypothesis;
  r.runtime_ms = runtime_ms;
  r.note = std::move(note);
  return r;
}

inline void spread_runtime(Reports& rows, std::size_t first, double ms) {
  if (rows.size() <= first) return;
  double each = ms / static_cast<double>(rows.size() - first);
  for (std::size_t i = first; i < rows.size(); ++i) rows[i].runtime_ms = each;
}

inline std::vector<double> merged_breaks(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  merge_sorted_unique(a);
  return a;
}

inline SolverOptions precise(SolverOptions s) {
  s.rel_tol = 1e-14;
  return s;
}

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Reported tolerance for quadrature-backed rows: the target, or twice the
// grid-doubling delta when that is larger.
inline double quad_tolerance(double target, double refinement_delta) {
  return std::max(target, 2.0 * refinement_delta);
}

}  // namespace detail

// --------------------------------------------------------------------------
// Ratio and gap bounds

/// lambda_n / lambda_m - (n/m)^2 for all n > m <= n_max.
inline Reports check_ratio_bound(const Density& d, int n_max, const VerifyOptions& opt = {}) {
  detail::Stopwatch sw;
  auto lam = eigenvalues(d, n_max, opt.solver);
  const bool hyp = is_concave(d);
  const auto digest = density_digest(d);
  Reports rows;
  for (int n = 2; n <= n_max; ++n)
    for (int m = 1; m < n; ++m) {
      double q = static_cast<double>(n) / m;
      rows.push_back(detail::row("ratio", digest, n, m, detail::nan, lam[n - 1] / lam[m - 1] - q * q,
                                 opt.ratio_tol, hyp, 0.0, hyp ? "" : "out of hypothesis: not concave"));
    }
  detail::spread_runtime(rows, 0, sw.elapsed_ms());
  return rows;
}

/// lambda_n - lambda_m - ((n/m)^2 - 1) (m pi)^2 / max(rho) for all n > m <= n_max.
inline Reports check_gap_bound(const Density& d, int n_max, const VerifyOptions& opt = {}) {
  detail::Stopwatch sw;
  const double pi = std::numbers::pi;
  auto lam = eigenvalues(d, n_max, opt.solver);
  const bool hyp = is_concave(d);
  const auto digest = density_digest(d);
  const double rho_max = d.ceiling();
  Reports rows;
  for (int n = 2; n <= n_max; ++n)
    for (int m = 1; m < n; ++m) {
      double q = static_cast<double>(n) / m;
      double bound = (q * q - 1.0) * (m * pi) * (m * pi) / rho_max;
      rows.push_back(detail::row("gap", digest, n, m, detail::nan, lam[n - 1] - lam[m - 1] - bound,
                                 opt.ratio_tol * (m * pi) * (m * pi), hyp, 0.0,
                                 hyp ? "" : "out of hypothesis: not concave"));
    }
  detail::spread_runtime(rows, 0, sw.elapsed_ms());
  return rows;
}

// --------------------------------------------------------------------------
// Eigenvalue derivative along a family

struct KellerResult {
  double lambda = 0.0;
  /// -lambda * int (d rho / d tau) u_n^2
  double formula = 0.0;
  /// finite difference of lambda_n(tau)
  double fd = 0.0;
  double step = 0.0;
  double quad_error = 0.0;
  bool one_sided = false;

  double relative_difference() const {
    double scale = std::max({std::abs(formula), std::abs(fd), 1e-6 * lambda});
    return std::abs(formula - fd) / scale;
  }
};

namespace detail {

// Finite-difference derivative of g on the family domain; central where possible,
// second-order one-sided at the domain boundary.
template <class G>
double family_derivative(const HomotopyFamily& f, double tau, double h0, G&& g, double& step,
                         bool& one_sided) {
  double h = h0;
  while (!(f.contains(tau + h) && f.contains(tau - h)) && h > h0 * 1e-3) h *= 0.5;
  if (f.contains(tau + h) && f.contains(tau - h)) {
    step = h;
    one_sided = false;
    return (g(tau + h) - g(tau - h)) / (2.0 * h);
  }
  step = h0;
  one_sided = true;
  if (f.contains(tau + 2.0 * h0))
    return (-3.0 * g(tau) + 4.0 * g(tau + h0) - g(tau + 2.0 * h0)) / (2.0 * h0);
  return (3.0 * g(tau) - 4.0 * g(tau - h0) + g(tau - 2.0 * h0)) / (2.0 * h0);
}

inline std::vector<double> family_breaks(const HomotopyFamily& f, const Density& at) {
  return merged_breaks(f.breakpoints(), at.breakpoints());
}

}  // namespace detail

inline KellerResult keller_derivative(const HomotopyFamily& f, double tau, int n,
                                      const VerifyOptions& opt = {}) {
  Density rho = f.at(tau);
  Eigenpair ep = eigenfunction(rho, n, opt.solver);
  auto breaks = detail::family_breaks(f, rho);
  auto integral = refined_simpson(
      [&](double x) {
        double y = ep.value(x);
        return f.dtau(x, tau) * y * y;
      },
      0.0, 1.0, breaks, opt.quad_density);

  KellerResult r;
  r.lambda = ep.lambda;
  r.formula = -ep.lambda * integral.value;
  r.quad_error = ep.lambda * integral.error;
  const SolverOptions fine = detail::precise(opt.solver);
  r.fd = detail::family_derivative(
      f, tau, opt.keller_step, [&](double t) { return eigenvalue(f.at(t), n, fine); }, r.step,
      r.one_sided);
  return r;
}

struct RatioDerivativeResult {
  double ratio = 0.0;
  /// (lambda_n / lambda_m) * int (d rho / d tau) (u_m^2 - u_n^2)
  double formula = 0.0;
  double fd = 0.0;
  double step = 0.0;
  double quad_error = 0.0;
  bool one_sided = false;

  double relative_difference() const {
    double scale = std::max({std::abs(formula), std::abs(fd), 1e-6 * ratio});
    return std::abs(formula - fd) / scale;
  }
};

inline RatioDerivativeResult ratio_derivative(const HomotopyFamily& f, double tau, int n, int m,
                                              const VerifyOptions& opt = {}) {
  if (!(n > m && m >= 1)) throw std::invalid_argument("ratio_derivative: need n > m >= 1");
  Density rho = f.at(tau);
  Eigenpair un = eigenfunction(rho, n, opt.solver);
  Eigenpair um = eigenfunction(rho, m, opt.solver);
  auto breaks = detail::family_breaks(f, rho);
  auto integral = refined_simpson(
      [&](double x) {
        double a = um.value(x), b = un.value(x);
        return f.dtau(x, tau) * (a * a - b * b);
      },
      0.0, 1.0, breaks, opt.quad_density);

  RatioDerivativeResult r;
  r.ratio = un.lambda / um.lambda;
  r.formula = r.ratio * integral.value;
  r.quad_error = r.ratio * integral.error;
  const SolverOptions fine = detail::precise(opt.solver);
  r.fd = detail::family_derivative(
      f, tau, opt.keller_step,
      [&](double t) {
        Density d = f.at(t);
        return eigenvalue(d, n, fine) / eigenvalue(d, m, fine);
      },
      r.step, r.one_sided);
  return r;
}

/// Formula vs finite difference for n <= n_max at each tau.
inline Reports check_keller(const HomotopyFamily& f, std::span<const double> taus, int n_max,
                            const VerifyOptions& opt = {}) {
  Reports rows;
  for (double tau : taus)
    for (int n = 1; n <= n_max; ++n) {
      detail::Stopwatch sw;
      auto k = keller_derivative(f, tau, n, opt);
      double scale = std::max({std::abs(k.formula), std::abs(k.fd), 1e-6 * k.lambda});
      rows.push_back(detail::row("keller", density_digest(f.at(tau)), n, 0, tau,
                                 -k.relative_difference(),
                                 detail::quad_tolerance(opt.keller_tol, k.quad_error / scale), true,
                                 sw.elapsed_ms(),
                                 k.one_sided ? "one-sided difference" : ""));
    }
  return rows;
}

// --------------------------------------------------------------------------
// Boundary identity
//   g(1) y'(1)^2 - g(0) y'(0)^2 = int [2 lambda g' rho + lambda g rho' + g'''/2] y^2

/// Polynomial test function of degree <= 4, coefficients in increasing degree.
struct TestFunction {
  std::vector<double> coeffs;

  static TestFunction monomial(int k) {
    if (k < 0 || k > 4) throw std::invalid_argument("test function degree must be in [0,4]");
    TestFunction g;
    g.coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
    g.coeffs.back() = 1.0;
    return g;
  }

  double derivative(double x, int order) const {
    double s = 0.0;
    for (std::size_t k = static_cast<std::size_t>(order); k < coeffs.size(); ++k) {
      double c = coeffs[k];
      for (int j = 0; j < order; ++j) c *= static_cast<double>(k - j);
      s += c * std::pow(x, static_cast<double>(k) - order);
    }
    return s;
  }
  double operator()(double x) const { return derivative(x, 0); }
};

struct HuangResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double quad_error = 0.0;

  double residual() const { return std::abs(lhs - rhs); }
  double relative_residual() const { return residual() / std::max(std::abs(lhs), 1.0); }
};

inline HuangResult huang_identity(const Eigenpair& ep, const TestFunction& g,
                                  const VerifyOptions& opt = {}, bool allow_piecewise = true) {
  if (g.coeffs.size() > 5) throw std::invalid_argument("test function degree must be <= 4");
  const Density& rho = ep.density();
  if (!allow_piecewise && !rho.breakpoints().empty())
    throw DensityError("boundary identity needs a differentiable density");
  const double lam = ep.lambda;
  HuangResult r;
  double d0 = ep.dy.front(), d1 = ep.dy.back();
  r.lhs = g(1.0) * d1 * d1 - g(0.0) * d0 * d0;
  // rho' jumps at kinks, so each piece is integrated with its own one-sided slope
  std::vector<double> ends{0.0};
  for (double b : rho.breakpoints())
    if (b > 0.0 && b < 1.0) ends.push_back(b);
  ends.push_back(1.0);
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const double a = ends[i], b = ends[i + 1];
    auto integral = refined_simpson(
        [&](double x) {
          double y = ep.value(x);
          double slope = rho.derivative(x >= b ? std::nextafter(b, a) : x);
          double w = 2.0 * lam * g.derivative(x, 1) * rho.value(x) + lam * g(x) * slope +
                     0.5 * g.derivative(x, 3);
          return w * y * y;
        },
        a, b, std::span<const double>{}, opt.quad_density);
    r.rhs += integral.value;
    r.quad_error += integral.error;
  }
  return r;
}

inline HuangResult huang_identity(const Density& d, int n, const TestFunction& g,
                                  const VerifyOptions& opt = {}, bool allow_piecewise = true) {
  return huang_identity(eigenfunction(d, n, opt.solver), g, opt, allow_piecewise);
}

/// |LHS - RHS| of the boundary identity.
inline double huang_identity_residual(const Density& d, int n, const TestFunction& g,
                                      const VerifyOptions& opt = {}) {
  return huang_identity(d, n, g, opt).residual();
}

/// Relative residuals |LHS - RHS| / max(|LHS|, 1) for g in {1, x, x^2, x^3}, n <= n_max.
inline Reports check_huang_identity(const Density& d, int n_max, const VerifyOptions& opt = {}) {
  Reports rows;
  const auto digest = density_digest(d);
  for (int n = 1; n <= n_max; ++n) {
    Eigenpair ep = eigenfunction(d, n, opt.solver);
    for (int k = 0; k <= 3; ++k) {
      detail::Stopwatch sw;
      auto h = huang_identity(ep, TestFunction::monomial(k), opt);
      double tol = detail::quad_tolerance(opt.huang_tol, h.quad_error / std::max(std::abs(h.lhs), 1.0));
      rows.push_back(detail::row("identity", digest, n, k, detail::nan, -h.relative_residual(), tol,
                                 true, sw.elapsed_ms(), "m = degree of g"));
    }
  }
  return rows;
}

// --------------------------------------------------------------------------
// Crossings of consecutive eigenfunction squares

struct CrossingInterval {
  /// consecutive zeros of u_{n-1} (with the endpoints 0 and 1)
  double a = 0.0;
  double b = 0.0;
  /// int_a^b x (u_{n-1}^2 - u_n^2) dx
  double moment = 0.0;
  double error = 0.0;
  std::vector<double> crossings;
  /// u_n^2 > u_{n-1}^2 near both ends, < in the middle band, two crossings
  bool pattern_ok = false;
};

struct CrossingAnalysis {
  int n = 0;
  std::vector<double> crossings;
  std::vector<CrossingInterval> per_interval;
  double total = 0.0;
  double total_error = 0.0;
  std::vector<double> zeros_n;
  std::vector<double> zeros_prev;

  bool sign_pattern_ok() const {
    return std::all_of(per_interval.begin(), per_interval.end(),
                       [](const CrossingInterval& c) { return c.pattern_ok; });
  }

  /// One crossing strictly between each pair of consecutive points of
  /// {0, zeros of u_n, zeros of u_{n-1}, 1}.
  bool crossings_separated_by_zeros() const {
    std::vector<double> pts{0.0, 1.0};
    pts.insert(pts.end(), zeros_n.begin(), zeros_n.end());
    pts.insert(pts.end(), zeros_prev.begin(), zeros_prev.end());
    std::sort(pts.begin(), pts.end());
    if (crossings.size() + 1 != pts.size()) return false;
    for (std::size_t i = 0; i < crossings.size(); ++i)
      if (!(crossings[i] > pts[i] && crossings[i] < pts[i + 1])) return false;
    return true;
  }
};

inline CrossingAnalysis crossing_analysis(const Eigenpair& prev, const Eigenpair& cur,
                                          const VerifyOptions& opt = {}) {
  if (cur.index < 2 || prev.index != cur.index - 1)
    throw std::invalid_argument("crossing_analysis: need consecutive eigenpairs with n >= 2");
  if (prev.grid.size() != cur.grid.size())
    throw std::invalid_argument("crossing_analysis: eigenpairs on different grids");
  CrossingAnalysis ca;
  ca.n = cur.index;
  ca.zeros_n = cur.zeros;
  ca.zeros_prev = prev.zeros;

  auto diff = [&](double x) {
    double a = cur.value(x), b = prev.value(x);
    return a * a - b * b;
  };
  std::vector<double> ends{0.0};
  ends.insert(ends.end(), prev.zeros.begin(), prev.zeros.end());
  ends.push_back(1.0);
  const auto& grid = cur.grid;
  const auto& breaks = cur.density().breakpoints();

  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    CrossingInterval iv;
    iv.a = ends[i];
    iv.b = ends[i + 1];
    std::vector<double> xs, fs;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid[k] <= iv.a || grid[k] >= iv.b) continue;
      double v = cur.y[k] * cur.y[k] - prev.y[k] * prev.y[k];
      if (v == 0.0) continue;
      xs.push_back(grid[k]);
      fs.push_back(v);
    }
    std::vector<int> signs;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      int s = fs[k] > 0.0 ? 1 : -1;
      if (signs.empty() || signs.back() != s) signs.push_back(s);
      if (k > 0 && (fs[k] > 0.0) != (fs[k - 1] > 0.0)) {
        double lo = xs[k - 1], hi = xs[k];
        bool lo_pos = fs[k - 1] > 0.0;
        for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
          double mid = 0.5 * (lo + hi);
          ((diff(mid) > 0.0) == lo_pos ? lo : hi) = mid;
        }
        iv.crossings.push_back(0.5 * (lo + hi));
      }
    }
    iv.pattern_ok = signs == std::vector<int>{1, -1, 1};
    auto mom = refined_simpson(
        [&](double x) {
          double a = prev.value(x), b = cur.value(x);
          return x * (a * a - b * b);
        },
        iv.a, iv.b, breaks, opt.quad_density);
    iv.moment = mom.value;
    iv.error = mom.error;
    ca.total += iv.moment;
    ca.total_error += iv.error;
    ca.crossings.insert(ca.crossings.end(), iv.crossings.begin(), iv.crossings.end());
    ca.per_interval.push_back(std::move(iv));
  }
  return ca;
}

inline CrossingAnalysis crossing_analysis(const Density& d, int n, const VerifyOptions& opt = {}) {
  if (n < 2) throw std::invalid_argument("crossing_analysis: need n >= 2");
  return crossing_analysis(eigenfunction(d, n - 1, opt.solver), eigenfunction(d, n, opt.solver), opt);
}

/// Sign pattern and crossing placement for 2 <= n <= n_max (gated on concave
/// densities), and the total first moment, gated on non-decreasing linear ones.
inline Reports check_crossings(const Density& d, int n_max, const VerifyOptions& opt = {}) {
  Reports rows;
  const auto digest = density_digest(d);
  const bool concave = is_concave(d);
  const auto* lin = std::get_if<forms::Linear>(&d.form());
  const bool affine = d.kind() == DensityKind::constant || (lin && lin->slope >= 0.0);
  const char* pattern_note = concave ? "" : "measured: density not concave";
  Eigenpair prev = eigenfunction(d, 1, opt.solver);
  for (int n = 2; n <= n_max; ++n) {
    detail::Stopwatch sw;
    Eigenpair cur = eigenfunction(d, n, opt.solver);
    auto ca = crossing_analysis(prev, cur, opt);
    double t = sw.elapsed_ms();
    rows.push_back(detail::row("crossing_pattern", digest, n, n - 1, detail::nan,
                               ca.sign_pattern_ok() ? 0.0 : -1.0, 0.0, concave, t, pattern_note));
    rows.push_back(detail::row("crossing_placement", digest, n, n - 1, detail::nan,
                               ca.crossings_separated_by_zeros() ? 0.0 : -1.0, 0.0, concave, 0.0, pattern_note));
    rows.push_back(detail::row("crossing_moment", digest, n, n - 1, detail::nan, ca.total,
                               detail::quad_tolerance(1e-10, ca.total_error), affine, 0.0,
                               affine ? "" : "measured: density not a non-decreasing linear"));
    prev = std::move(cur);
  }
  return rows;
}

// --------------------------------------------------------------------------
// Homotopy monotonicity

/// lambda_n(tau) / lambda_{n-1}(tau) along a family.
inline std::vector<double> ratio_sweep(const HomotopyFamily& f, std::span<const double> taus, int n,
                                       const SolverOptions& opt) {
  std::vector<double> out;
  for (double t : taus) {
    Density d = f.at(t);
    out.push_back(eigenvalue(d, n, opt) / eigenvalue(d, n - 1, opt));
  }
  return out;
}

/// Strict increase of the ratio on the slope family tau x + b: the smallest
/// successive difference must exceed ten times the ratio's solver tolerance.
inline VerificationReport linear_family_sweep(int n, double b, std::span<const double> taus,
                                              const VerifyOptions& opt = {}) {
  if (n < 2) throw std::invalid_argument("linear_family_sweep: need n >= 2");
  detail::Stopwatch sw;
  auto f = HomotopyFamily::slope(b);
  auto r = ratio_sweep(f, taus, n, opt.solver);
  double min_diff = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) min_diff = std::min(min_diff, r[i + 1] - r[i]);
  double solver_tol = 2.0 * opt.solver.rel_tol * *std::max_element(r.begin(), r.end());
  char note[96];
  std::snprintf(note, sizeof note, "b=%g min_step=%.6g", b, min_diff);
  return detail::row("linear_family", density_digest(make_constant(b)), n, n - 1, detail::nan,
                     min_diff - 10.0 * solver_tol, 0.0, true, sw.elapsed_ms(), note);
}

struct HomotopyResult {
  Density hat;
  std::vector<double> nodes;
  std::vector<double> taus;
  std::vector<double> ratios;
  VerificationReport sweep;
  VerificationReport linear;
  /// int_{z_i}^{z_{i+1}} (rho - hat)(u_{n-1}^2 - u_n^2) at each tau; measured only
  std::vector<VerificationReport> interval_log;

  Reports rows() const {
    Reports out{sweep, linear};
    out.insert(out.end(), interval_log.begin(), interval_log.end());
    return out;
  }
};

/// Sweeps rho(x, tau) = tau rho + (1 - tau) hat, where hat interpolates rho at the
/// zeros of its own (n-1)-th eigenfunction, and checks the ratio is non-decreasing.
inline HomotopyResult homotopy_monotonicity(const Density& rho, int n, int steps,
                                            const VerifyOptions& opt = {}) {
  if (n < 2) throw std::invalid_argument("homotopy_monotonicity: need n >= 2");
  if (steps < 2) throw std::invalid_argument("homotopy_monotonicity: need >= 2 tau steps");
  detail::Stopwatch sw;
  Eigenpair base = eigenfunction(rho, n - 1, opt.solver);
  std::vector<double> nodes{0.0};
  nodes.insert(nodes.end(), base.zeros.begin(), base.zeros.end());
  nodes.push_back(1.0);
  Density hat = hat_interpolant(rho, nodes);
  auto family = HomotopyFamily::affine(hat, rho);

  std::vector<double> taus(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) taus[i] = static_cast<double>(i) / (steps - 1);
  auto ratios = ratio_sweep(family, taus, n, opt.solver);
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i) min_step = std::min(min_step, ratios[i + 1] - ratios[i]);

  const auto digest = density_digest(rho);
  const bool hyp = is_concave(rho);
  HomotopyResult res{hat, nodes, taus, ratios,
                     detail::row("homotopy", digest, n, n - 1, detail::nan, min_step,
                                 opt.homotopy_step_tol, hyp, sw.elapsed_ms(),
                                 hyp ? "" : "out of hypothesis: not concave"),
                     {}, {}};

  std::vector<double> sweep_taus;
  for (int i = 0; i <= 10; ++i) sweep_taus.push_back(0.2 * i);
  res.linear = linear_family_sweep(n, 1.0, sweep_taus, opt);

  if (opt.log_homotopy_intervals) {
    for (double tau : taus) {
      Density d = family.at(tau);
      Eigenpair up = eigenfunction(d, n - 1, opt.solver);
      Eigenpair un = eigenfunction(d, n, opt.solver);
      auto breaks = detail::family_breaks(family, d);
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        auto I = refined_simpson(
            [&](double x) {
              double a = up.value(x), b = un.value(x);
              return (rho.value(x) - hat.value(x)) * (a * a - b * b);
            },
            nodes[i], nodes[i + 1], breaks, opt.quad_density);
        res.interval_log.push_back(detail::row("homotopy_interval", digest, n, static_cast<int>(i),
                                               tau, I.value, std::max(1e-12, 2.0 * I.error), false,
                                               0.0, "measured"));
      }
    }
  }
  return res;
}

// --------------------------------------------------------------------------
// Structural facts

/// Zeros of consecutive eigenfunctions strictly alternate:
/// 0 < y_1 < z_1 < y_2 < ... < z_{n-1} < y_n < 1.
inline Reports interlacing_check(const Spectrum& s) {
  Reports rows;
  const auto digest = density_digest(s.density);
  for (std::size_t k = 1; k < s.pairs.size(); ++k) {
    const auto& z = s.pairs[k - 1].zeros;
    const auto& y = s.pairs[k].zeros;
    double margin = std::numeric_limits<double>::infinity();
    bool shape_ok = y.size() == z.size() + 1;
    if (shape_ok) {
      std::vector<double> seq{0.0};
      for (std::size_t i = 0; i < y.size(); ++i) {
        seq.push_back(y[i]);
        if (i < z.size()) seq.push_back(z[i]);
      }
      seq.push_back(1.0);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) margin = std::min(margin, seq[i + 1] - seq[i]);
    }
    rows.push_back(detail::row("interlacing", digest, static_cast<int>(k + 1), static_cast<int>(k),
                               detail::nan, shape_ok ? margin : -1.0, 0.0, true));
  }
  if (rows.empty())
    rows.push_back(detail::row("interlacing", digest, 1, 0, detail::nan, 0.0, 0.0, true, 0.0, "vacuous"));
  return rows;
}

/// w = u_n' u_{n-1} - u_{n-1}' u_n must be negative inside (0,1). Checked on the
/// grid points of [1/64, 63/64]; closer to the ends w vanishes like dist^3 and
/// drops below the eigenfunction accuracy.
inline Reports wronskian_check(const Spectrum& s) {
  Reports rows;
  const auto digest = density_digest(s.density);
  for (std::size_t k = 1; k < s.pairs.size(); ++k) {
    const auto& a = s.pairs[k];
    const auto& b = s.pairs[k - 1];
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
      double x = a.grid[i];
      if (x < 1.0 / 64.0 || x > 63.0 / 64.0) continue;
      double w = a.dy[i] * b.y[i] - b.dy[i] * a.y[i];
      worst = std::min(worst, -w);
    }
    rows.push_back(detail::row("wronskian", digest, static_cast<int>(k + 1), static_cast<int>(k),
                               detail::nan, worst, 0.0, true));
  }
  return rows;
}

/// Zero counts and the normalization integral, the latter by an independent
/// breakpoint-aligned Simpson rule.
inline Reports eigenpair_checks(const Spectrum& s, const VerifyOptions& opt = {}) {
  Reports rows;
  const auto digest = density_digest(s.density);
  for (const auto& ep : s.pairs) {
    int expect = ep.index - 1;
    rows.push_back(detail::row("zero_count", digest, ep.index, 0, detail::nan,
                               -std::abs(static_cast<double>(ep.zeros.size()) - expect), 0.0, true));
    auto I = refined_simpson(
        [&](double x) {
          double y = ep.value(x);
          return s.density.value(x) * y * y;
        },
        0.0, 1.0, s.density.breakpoints(), opt.quad_density);
    rows.push_back(detail::row("normalization", digest, ep.index, 0, detail::nan, -std::abs(I.value - 1.0),
                               detail::quad_tolerance(opt.normalization_tol, I.error), true));
  }
  return rows;
}

/// lambda_n(c rho) = lambda_n(rho) / c and lambda_n(rho(1 - x)) = lambda_n(rho).
inline Reports covariance_checks(const Density& d, int n_max, const VerifyOptions& opt = {}) {
  Reports rows;
  const auto digest = density_digest(d);
  auto base = eigenvalues(d, n_max, opt.solver);
  const double tol = 2.0 * opt.solver.rel_tol;
  for (double c : {0.5, 2.0, 10.0}) {
    auto sc = eigenvalues(scaled(d, c), n_max, opt.solver);
    for (int n = 1; n <= n_max; ++n)
      rows.push_back(detail::row("scaling", digest, n, 0, c, -std::abs(sc[n - 1] * c / base[n - 1] - 1.0),
                                 tol, true, 0.0, "tau column holds the scale factor"));
  }
  auto rf = eigenvalues(reflected(d), n_max, opt.solver);
  for (int n = 1; n <= n_max; ++n)
    rows.push_back(detail::row("reflection", digest, n, 0, detail::nan,
                               -std::abs(rf[n - 1] / base[n - 1] - 1.0), tol, true));
  return rows;
}

inline Reports structural_checks(const Density& d, int n_max, const VerifyOptions& opt = {}) {
  detail::Stopwatch sw;
  Spectrum s = spectrum(d, n_max, opt.solver);
  Reports rows = eigenpair_checks(s, opt);
  auto add = [&](Reports r) { rows.insert(rows.end(), r.begin(), r.end()); };
  add(interlacing_check(s));
  add(wronskian_check(s));
  add(covariance_checks(d, n_max, opt));
  detail::spread_runtime(rows, 0, sw.elapsed_ms());
  return rows;
}

/// Solver vs Richardson-extrapolated finite-difference oracle.
inline Reports check_oracle(const Density& d, int n_max, const VerifyOptions& opt = {}) {
  detail::Stopwatch sw;
  auto lam = eigenvalues(d, n_max, opt.solver);
  auto ref = fd_reference(d, n_max, opt.oracle_mesh, opt.oracle_fine_mesh);
  const auto digest = density_digest(d);
  Reports rows;
  for (int n = 1; n <= n_max; ++n)
    rows.push_back(detail::row("oracle", digest, n, 0, detail::nan,
                               -std::abs(lam[n - 1] - ref[n - 1]) / ref[n - 1], opt.oracle_tol, true));
  detail::spread_runtime(rows, 0, sw.elapsed_ms());
  return rows;
}

// --------------------------------------------------------------------------
// Sturm-Liouville problems through the Legendre substitution

/// Transformed-problem eigenvalues against the flux-form oracle, plus the ratio
/// and gap bounds with the hypothesis "p rho concave in x".
/// "sl_gap" uses (m pi)^2 / max(p rho); "sl_gap_transported" uses
/// (m pi)^2 / (sigma^2 max(p rho)), the maximum of the transformed density.
inline Reports check_sturm_liouville(const Density& p, const Density& rho, int n_max,
                                     const VerifyOptions& opt = {}) {
  detail::Stopwatch sw;
  const double pi = std::numbers::pi;
  auto map = legendre_map(p, rho);
  auto lam = sl_eigenvalues(map, n_max, opt.solver);
  auto ref = fd_sl_reference(p, rho, n_max, opt.oracle_mesh, opt.oracle_fine_mesh);
  Density prod = make_product({p, rho});
  const bool hyp = is_concave(prod);
  const double pr_max = prod.ceiling();
  const double s2 = map.sigma() * map.sigma();
  const auto digest = density_digest(prod);
  const std::string oh = hyp ? "" : "out of hypothesis: p*rho not concave";
  Reports rows;
  for (int n = 1; n <= n_max; ++n)
    rows.push_back(detail::row("sl_oracle", digest, n, 0, detail::nan,
                               -std::abs(lam[n - 1] - ref[n - 1]) / ref[n - 1], opt.sl_oracle_tol, true));
  for (int n = 2; n <= n_max; ++n)
    for (int m = 1; m < n; ++m) {
      double q = static_cast<double>(n) / m;
      double gap = lam[n - 1] - lam[m - 1];
      double tol = opt.ratio_tol * (m * pi) * (m * pi);
      rows.push_back(detail::row("sl_ratio", digest, n, m, detail::nan, lam[n - 1] / lam[m - 1] - q * q,
                                 opt.ratio_tol, hyp, 0.0, oh));
      rows.push_back(detail::row("sl_gap", digest, n, m, detail::nan,
                                 gap - (q * q - 1.0) * (m * pi) * (m * pi) / pr_max, tol, hyp, 0.0, oh));
      rows.push_back(detail::row("sl_gap_transported", digest, n, m, detail::nan,
                                 gap - (q * q - 1.0) * (m * pi) * (m * pi) / (s2 * pr_max), tol, hyp, 0.0,
                                 oh));
    }
  detail::spread_runtime(rows, 0, sw.elapsed_ms());
  return rows;
}

/// Deterministic ordering: claim, then density digest; stable otherwise.
inline void sort_reports(Reports& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const VerificationReport& a, const VerificationReport& b) {
    if (a.claim != b.claim) return a.claim < b.claim;
    return a.density_digest < b.density_digest;
  });
}

inline bool all_in_hypothesis_pass(const Reports& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const VerificationReport& r) { return !r.in_hypothesis || r.pass; });
}

}  // namespace string_spectra
