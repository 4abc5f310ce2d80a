#pragma once

// Independent finite-difference oracle for -(p y')' = lambda rho y with
// Dirichlet ends. Central differences on a uniform mesh and a lumped (diagonal)
// mass give the pencil (K, M). After the similarity M^{-1/2} K M^{-1/2} the
// problem is a symmetric tridiagonal eigenproblem, solved here by bisection on
// Sturm-sequence counts.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "density.hpp"

namespace string_spectra {

/// Symmetric tridiagonal matrix: diag[0..n), offdiag[0..n-1).
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
};

/// Mesh discretization of the pencil on the N-1 interior nodes.
struct FdProblem {
  int mesh_size = 0;
  double h = 0.0;
  std::vector<double> stiffness_diag;
  std::vector<double> stiffness_offdiag;
  std::vector<double> mass;

  /// M^{-1/2} K M^{-1/2}
  SymTridiagonal symmetrized() const {
    SymTridiagonal t;
    std::size_t n = mass.size();
    t.diag.resize(n);
    t.offdiag.resize(n ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = stiffness_diag[i] / mass[i];
    for (std::size_t i = 0; i + 1 < n; ++i)
      t.offdiag[i] = stiffness_offdiag[i] / std::sqrt(mass[i] * mass[i + 1]);
    return t;
  }
};

/// Number of eigenvalues of t strictly less than shift.
inline int sturm_count(const SymTridiagonal& t, double shift) {
  const double pivmin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double q = t.diag[0] - shift;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    double e = t.offdiag[i - 1];
    q = t.diag[i] - shift - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

/// k smallest eigenvalues (ascending) by Sturm bisection.
inline std::vector<double> tridiagonal_smallest(const SymTridiagonal& t, int k) {
  const std::size_t n = t.diag.size();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("tridiagonal_smallest: invalid eigenvalue count");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(t.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.offdiag[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> out(static_cast<std::size_t>(k));
  double left = lo;
  for (int j = 0; j < k; ++j) {
    // eigenvalue j (0-based): smallest x with count(x) > j
    double a = left, b = hi;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (b - a <= 2.0 * eps * std::max(std::abs(a), std::abs(b))) break;
      (sturm_count(t, mid) > j ? b : a) = mid;
    }
    out[static_cast<std::size_t>(j)] = 0.5 * (a + b);
    left = a;
  }
  return out;
}

/// Flux-form discretization of -(p y')' = lambda rho y; the face coefficient
/// p_{i+1/2} is the harmonic mean of the nodal values.
inline FdProblem fd_problem(const Density& p, const Density& rho, int mesh_size) {
  if (mesh_size < 2) throw std::invalid_argument("mesh size must be >= 2");
  FdProblem prob;
  prob.mesh_size = mesh_size;
  prob.h = 1.0 / mesh_size;
  const double h2 = prob.h * prob.h;
  const int n = mesh_size - 1;
  std::vector<double> pn(static_cast<std::size_t>(mesh_size) + 1);
  for (int i = 0; i <= mesh_size; ++i) pn[i] = p.value(static_cast<double>(i) / mesh_size);
  std::vector<double> face(static_cast<std::size_t>(mesh_size));
  for (int i = 0; i < mesh_size; ++i) face[i] = 2.0 * pn[i] * pn[i + 1] / (pn[i] + pn[i + 1]);

  prob.stiffness_diag.resize(n);
  prob.stiffness_offdiag.resize(n > 0 ? n - 1 : 0);
  prob.mass.resize(n);
  for (int i = 0; i < n; ++i) {
    prob.stiffness_diag[i] = (face[i] + face[i + 1]) / h2;
    prob.mass[i] = rho.value(static_cast<double>(i + 1) / mesh_size);
    if (i + 1 < n) prob.stiffness_offdiag[i] = -face[i + 1] / h2;
  }
  return prob;
}

/// Central differences for the string equation: stiffness (2/h^2, -1/h^2), mass rho(x_i).
inline FdProblem fd_problem(const Density& rho, int mesh_size) {
  return fd_problem(make_constant(1.0), rho, mesh_size);
}

inline void check_resolution(int n_max, int mesh_size) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (mesh_size < 8 * n_max)
    throw std::invalid_argument("mesh size " + std::to_string(mesh_size) +
                                " too coarse for " + std::to_string(n_max) +
                                " eigenvalues (need >= 8 * n_max)");
}

/// First n_max eigenvalues of the string pencil on mesh N.
inline std::vector<double> fd_eigenvalues(const Density& rho, int n_max, int mesh_size) {
  check_resolution(n_max, mesh_size);
  return tridiagonal_smallest(fd_problem(rho, mesh_size).symmetrized(), n_max);
}

/// First n_max eigenvalues of the flux-form Sturm-Liouville pencil on mesh N.
inline std::vector<double> fd_sl_eigenvalues(const Density& p, const Density& rho, int n_max,
                                             int mesh_size) {
  check_resolution(n_max, mesh_size);
  return tridiagonal_smallest(fd_problem(p, rho, mesh_size).symmetrized(), n_max);
}

/// Cancels the O(h^2) term from values on meshes N and 2N.
inline double richardson(double lambda_n, double lambda_2n) {
  return (4.0 * lambda_2n - lambda_n) / 3.0;
}

inline std::vector<double> richardson(const std::vector<double>& coarse,
                                      const std::vector<double>& fine) {
  std::vector<double> out(std::min(coarse.size(), fine.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = richardson(coarse[i], fine[i]);
  return out;
}

/// Richardson step for meshes N1 < N2 with an O(h^2) leading error.
inline std::vector<double> richardson(const std::vector<double>& coarse, const std::vector<double>& fine,
                                      int coarse_mesh, int fine_mesh) {
  if (!(fine_mesh > coarse_mesh && coarse_mesh > 0))
    throw std::invalid_argument("richardson: need 0 < coarse mesh < fine mesh");
  double r2 = static_cast<double>(fine_mesh) / coarse_mesh;
  r2 *= r2;
  std::vector<double> out(std::min(coarse.size(), fine.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (r2 * fine[i] - coarse[i]) / (r2 - 1.0);
  return out;
}

inline std::vector<double> fd_reference(const Density& rho, int n_max, int coarse_mesh, int fine_mesh) {
  return richardson(fd_eigenvalues(rho, n_max, coarse_mesh), fd_eigenvalues(rho, n_max, fine_mesh),
                    coarse_mesh, fine_mesh);
}

inline std::vector<double> fd_sl_reference(const Density& p, const Density& rho, int n_max,
                                           int coarse_mesh, int fine_mesh) {
  return richardson(fd_sl_eigenvalues(p, rho, n_max, coarse_mesh),
                    fd_sl_eigenvalues(p, rho, n_max, fine_mesh), coarse_mesh, fine_mesh);
}

/// Richardson-extrapolated oracle values from meshes N and 2N.
inline std::vector<double> fd_reference(const Density& rho, int n_max, int mesh_size = 1000) {
  return richardson(fd_eigenvalues(rho, n_max, mesh_size),
                    fd_eigenvalues(rho, n_max, 2 * mesh_size));
}

inline std::vector<double> fd_sl_reference(const Density& p, const Density& rho, int n_max,
                                           int mesh_size = 1000) {
  return richardson(fd_sl_eigenvalues(p, rho, n_max, mesh_size),
                    fd_sl_eigenvalues(p, rho, n_max, 2 * mesh_size));
}

/// Exact eigenvalue k (1-based) of the unit-density pencil on mesh N.
inline double discrete_laplacian_eigenvalue(int k, int mesh_size) {
  double h = 1.0 / mesh_size;
  double s = std::sin(k * 3.14159265358979323846 * h / 2.0);
  return 4.0 / (h * h) * s * s;
}

}  // namespace string_spectra
