#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <string_spectra/corpus.hpp>
#include <string_spectra/fd_oracle.hpp>
#include <string_spectra/prufer.hpp>

using namespace string_spectra;
constexpr double pi = std::numbers::pi;

TEST(FdOracle, UnitDensityMatchesDiscreteLaplacian) {
  auto lam = fd_eigenvalues(make_constant(1.0), 6, 200);
  for (int k = 1; k <= 6; ++k)
    EXPECT_NEAR(lam[k - 1], discrete_laplacian_eigenvalue(k, 200), 1e-9 * lam[k - 1]);
}

TEST(FdOracle, SturmCountOnDiagonal) {
  SymTridiagonal t{{1.0, 3.0, 5.0}, {0.0, 0.0}};
  EXPECT_EQ(sturm_count(t, 0.5), 0);
  EXPECT_EQ(sturm_count(t, 2.0), 1);
  EXPECT_EQ(sturm_count(t, 4.0), 2);
  EXPECT_EQ(sturm_count(t, 9.0), 3);
}

TEST(FdOracle, TridiagonalSmallestKnownMatrix) {
  // tridiag(-1, 2, -1) of size 3: 2 - sqrt(2), 2, 2 + sqrt(2)
  SymTridiagonal t{{2.0, 2.0, 2.0}, {-1.0, -1.0}};
  auto ev = tridiagonal_smallest(t, 3);
  EXPECT_NEAR(ev[0], 2.0 - std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(ev[1], 2.0, 1e-14);
  EXPECT_NEAR(ev[2], 2.0 + std::sqrt(2.0), 1e-14);
  EXPECT_THROW(tridiagonal_smallest(t, 4), std::invalid_argument);
}

TEST(FdOracle, RichardsonRemovesSecondOrderError) {
  auto ref = fd_reference(make_constant(1.0), 3, 500);
  for (int n = 1; n <= 3; ++n) EXPECT_NEAR(ref[n - 1], n * n * pi * pi, 1e-7 * n * n * pi * pi);
  auto general = fd_reference(make_constant(1.0), 3, 500, 1500);
  EXPECT_NEAR(general[0], pi * pi, 1e-8 * pi * pi);
}

TEST(FdOracle, ErrorDecaysQuadratically) {
  auto d = make_linear(1.0, 1.0);
  double exact = 6.54839530600059;
  double e1 = std::abs(fd_eigenvalues(d, 1, 100)[0] - exact);
  double e2 = std::abs(fd_eigenvalues(d, 1, 200)[0] - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.05);
}

TEST(FdOracle, ResolutionGuard) {
  EXPECT_THROW(fd_eigenvalues(make_constant(1.0), 10, 40), std::invalid_argument);
  EXPECT_THROW(fd_eigenvalues(make_constant(1.0), 0, 100), std::invalid_argument);
}

TEST(FdOracle, SymmetrizationPreservesSpectrum) {
  auto p = fd_problem(make_linear(1.0, 1.0), 16);
  auto t = p.symmetrized();
  ASSERT_EQ(t.diag.size(), 15u);
  for (std::size_t i = 0; i < t.diag.size(); ++i)
    EXPECT_NEAR(t.diag[i], p.stiffness_diag[i] / p.mass[i], 1e-12);
}

TEST(FdOracle, FluxFormReducesToStringForUnitCoefficient) {
  auto rho = make_quadratic(-1.0, 1.0, 1.0);
  auto a = fd_eigenvalues(rho, 4, 300);
  auto b = fd_sl_eigenvalues(make_constant(1.0), rho, 4, 300);
  for (int n = 0; n < 4; ++n) EXPECT_DOUBLE_EQ(a[n], b[n]);
}

TEST(FdOracle, AgreesWithSolverAcrossCorpus) {
  for (const auto& d : oracle_corpus()) {
    auto ref = fd_reference(d, 4, 1000);
    auto lam = eigenvalues(d, 4);
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(lam[n], ref[n], 1e-6 * ref[n]);
  }
}
