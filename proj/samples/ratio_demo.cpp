// Prints lambda_n / lambda_1 against n^2 for a density file (default: 1 + x).

#include <cstdio>

#include <string_spectra/density_json.hpp>
#include <string_spectra/prufer.hpp>

int main(int argc, char** argv) {
  using namespace string_spectra;
  Density rho = argc > 1 ? load_density(argv[1]) : make_linear(1.0, 1.0);
  auto lam = eigenvalues(rho, 6);
  std::printf("density %s\n", density_to_json(rho).dump().c_str());
  std::printf("%2s %18s %14s %8s\n", "n", "lambda_n", "ratio", "n^2");
  for (int n = 1; n <= 6; ++n)
    std::printf("%2d %18.10f %14.10f %8d\n", n, lam[n - 1], lam[n - 1] / lam[0], n * n);
}
