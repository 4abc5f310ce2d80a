#pragma once

// string-spectra command line: solve, verify and transform subcommands.
//
// Exit codes: 0 success, 1 an in-hypothesis verification row failed,
// 2 bad input (flags, JSON, density), 3 solver failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corpus.hpp"
#include "density_json.hpp"
#include "fd_oracle.hpp"
#include "legendre.hpp"
#include "prufer.hpp"
#include "report_io.hpp"
#include "verify.hpp"

namespace string_spectra::cli {

enum ExitCode : int { kOk = 0, kHypothesisFailure = 1, kInputError = 2, kSolverError = 3 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& claim_names() {
  static const std::vector<std::string> names{"ratio",    "gap",         "keller",    "identity",
                                              "crossings", "homotopy",   "interlacing", "structure",
                                              "oracle",   "sl",          "all"};
  return names;
}

struct RunConfig {
  std::string command;
  std::vector<std::string> densities;
  int n_max = 4;
  double rel_tol = 1e-10;
  int grid = 4096;
  int mesh_coarse = 1000;
  int mesh_fine = 2000;
  int tau_steps = 21;
  std::uint64_t seed = kDefaultSeed;
  std::string claim = "all";
  std::string format = "csv";
  std::string out;
  bool timing = false;
  bool with_oracle = false;
  int random = 0;

  void validate() const {
    if (n_max < 1) throw ConfigError("--nmax must be >= 1");
    if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2)) throw ConfigError("--rel-tol must lie in [1e-14, 1e-2]");
    if (grid < 16) throw ConfigError("--grid must be >= 16");
    if (!(mesh_coarse >= 2 && mesh_fine > mesh_coarse)) throw ConfigError("--mesh needs 2 <= N1 < N2");
    if (tau_steps < 2) throw ConfigError("--tau-steps must be >= 2");
    if (random < 0) throw ConfigError("--random must be >= 0");
    if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
  }

  SolverOptions solver() const {
    SolverOptions s;
    s.steps = grid;
    s.rel_tol = rel_tol;
    return s;
  }

  VerifyOptions verify() const {
    VerifyOptions v;
    v.solver = solver();
    v.oracle_mesh = mesh_coarse;
    v.oracle_fine_mesh = mesh_fine;
    return v;
  }

  /// '#' provenance line with every effective setting.
  std::string header() const {
    std::ostringstream h;
    h.precision(17);
    h << "# string-spectra " << command << " nmax=" << n_max << " rel_tol=" << rel_tol << " grid=" << grid
      << " mesh=" << mesh_coarse << ',' << mesh_fine << " tau_steps=" << tau_steps << " seed=" << seed;
    if (command == "verify") h << " claim=" << claim << " random=" << random;
    h << " format=" << format;
    return h.str();
  }
};

namespace detail {

inline std::string number(double v) { return string_spectra::detail::format_number(v); }

inline std::vector<Density> load_all(const RunConfig& cfg) {
  std::vector<Density> out;
  for (const auto& path : cfg.densities) {
    try {
      out.push_back(load_density(path));
    } catch (const DensityError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return out;
}

inline Reports run_claims(const Density& d, const RunConfig& cfg, const VerifyOptions& opt,
                          const std::string& claim) {
  Reports rows;
  auto add = [&](Reports r) { rows.insert(rows.end(), r.begin(), r.end()); };
  auto want = [&](const char* c) { return claim == "all" || claim == c; };
  const int n = cfg.n_max;
  if (want("ratio")) add(check_ratio_bound(d, n, opt));
  if (want("gap")) add(check_gap_bound(d, n, opt));
  if (want("keller")) {
    auto family = HomotopyFamily::affine(hat_interpolant(d, std::vector<double>{}), d);
    const std::vector<double> taus{0.25, 0.5, 0.75};
    add(check_keller(family, taus, n, opt));
  }
  if (want("identity")) add(check_huang_identity(d, n, opt));
  if (want("crossings") && n >= 2) add(check_crossings(d, n, opt));
  if (want("homotopy"))
    for (int k = 2; k <= n; ++k) {
      auto h = homotopy_monotonicity(d, k, cfg.tau_steps, opt);
      rows.push_back(h.sweep);
      rows.insert(rows.end(), h.interval_log.begin(), h.interval_log.end());
    }
  if (want("interlacing") || want("structure")) {
    Spectrum s = spectrum(d, n, opt.solver);
    if (want("interlacing")) {
      add(interlacing_check(s));
      add(wronskian_check(s));
    }
    if (want("structure")) {
      add(eigenpair_checks(s, opt));
      add(covariance_checks(d, n, opt));
    }
  }
  if (want("oracle")) add(check_oracle(d, n, opt));
  return rows;
}

inline void emit(const RunConfig& cfg, const std::string& body, std::ostream& out) {
  if (cfg.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + cfg.out);
  f << body;
}

}  // namespace detail

/// Spectrum table: n, lambda and interior zeros (';'-separated) per density.
inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  auto densities = detail::load_all(cfg);
  if (densities.empty()) throw ConfigError("solve needs --density");
  std::ostringstream body;
  body << cfg.header() << '\n';
  if (cfg.format == "csv") {
    body << "density_digest,n,lambda,zeros";
    if (cfg.with_oracle) body << ",lambda_oracle,rel_diff";
    body << '\n';
  }
  for (const auto& d : densities) {
    Spectrum s = spectrum(d, cfg.n_max, cfg.solver());
    std::vector<double> ref;
    if (cfg.with_oracle) ref = fd_reference(d, cfg.n_max, cfg.mesh_coarse, cfg.mesh_fine);
    const auto digest = density_digest(d);
    for (const auto& p : s.pairs) {
      double oracle = cfg.with_oracle ? ref[p.index - 1] : 0.0;
      if (cfg.format == "csv") {
        body << digest << ',' << p.index << ',' << detail::number(p.lambda) << ',';
        for (std::size_t i = 0; i < p.zeros.size(); ++i) body << (i ? ";" : "") << detail::number(p.zeros[i]);
        if (cfg.with_oracle)
          body << ',' << detail::number(oracle) << ',' << detail::number(std::abs(p.lambda - oracle) / oracle);
        body << '\n';
      } else {
        nlohmann::json j{{"density_digest", digest}, {"n", p.index}, {"lambda", p.lambda}, {"zeros", p.zeros}};
        if (cfg.with_oracle) {
          j["lambda_oracle"] = oracle;
          j["rel_diff"] = std::abs(p.lambda - oracle) / oracle;
        }
        body << j.dump() << '\n';
      }
    }
  }
  detail::emit(cfg, body.str(), out);
  return kOk;
}

/// Verification rows for the selected claim set, sorted by claim then digest.
inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  auto densities = detail::load_all(cfg);
  auto random = random_concave_corpus(static_cast<std::size_t>(cfg.random), cfg.seed);
  densities.insert(densities.end(), random.begin(), random.end());
  const VerifyOptions opt = cfg.verify();

  Reports rows;
  if (cfg.claim == "sl") {
    if (cfg.densities.size() != 2) throw ConfigError("claim sl needs exactly two --density files (p, rho)");
    rows = check_sturm_liouville(densities[0], densities[1], cfg.n_max, opt);
  } else {
    if (densities.empty()) throw ConfigError("verify needs --density or --random");
    for (const auto& d : densities) {
      auto r = detail::run_claims(d, cfg, opt, cfg.claim);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if ((cfg.claim == "all" || cfg.claim == "homotopy") && cfg.n_max >= 2) {
      std::vector<double> taus;
      for (int i = 0; i <= 10; ++i) taus.push_back(0.2 * i);
      for (double b : {0.5, 1.0, 2.0})
        for (int k = 2; k <= cfg.n_max; ++k) rows.push_back(linear_family_sweep(k, b, taus, opt));
    }
  }
  sort_reports(rows);

  std::ostringstream body;
  body << cfg.header() << '\n';
  ReportFormat fmt{cfg.timing};
  if (cfg.format == "csv")
    write_csv(body, rows, fmt);
  else
    write_json_lines(body, rows, fmt);
  detail::emit(cfg, body.str(), out);
  return all_in_hypothesis_pass(rows) ? kOk : kHypothesisFailure;
}

/// Legendre substitution for (p, rho): sigma, a t(x) table, and the transformed
/// spectrum next to the direct flux-form oracle.
inline int cmd_transform(const RunConfig& cfg, std::ostream& out) {
  if (cfg.densities.size() != 2) throw ConfigError("transform needs two --density files (p, rho)");
  auto ds = detail::load_all(cfg);
  const Density& p = ds[0];
  const Density& rho = ds[1];
  auto map = legendre_map(p, rho);
  auto lam = sl_eigenvalues(map, cfg.n_max, cfg.solver());
  auto ref = fd_sl_reference(p, rho, cfg.n_max, cfg.mesh_coarse, cfg.mesh_fine);

  std::ostringstream body;
  body << cfg.header() << '\n';
  constexpr int kSamples = 10;
  if (cfg.format == "csv") {
    body << "# sigma=" << detail::number(map.sigma()) << '\n';
    body << "x,t\n";
    for (int i = 0; i <= kSamples; ++i) {
      double x = static_cast<double>(i) / kSamples;
      body << detail::number(x) << ',' << detail::number(map.t_of_x(x)) << '\n';
    }
    body << "n,lambda_transformed,lambda_flux_oracle,rel_diff\n";
    for (int n = 1; n <= cfg.n_max; ++n)
      body << n << ',' << detail::number(lam[n - 1]) << ',' << detail::number(ref[n - 1]) << ','
           << detail::number(std::abs(lam[n - 1] - ref[n - 1]) / ref[n - 1]) << '\n';
  } else {
    nlohmann::json table = nlohmann::json::array();
    for (int i = 0; i <= kSamples; ++i) {
      double x = static_cast<double>(i) / kSamples;
      table.push_back({x, map.t_of_x(x)});
    }
    body << nlohmann::json{{"sigma", map.sigma()}, {"t_of_x", table}}.dump() << '\n';
    for (int n = 1; n <= cfg.n_max; ++n)
      body << nlohmann::json{{"n", n},
                             {"lambda_transformed", lam[n - 1]},
                             {"lambda_flux_oracle", ref[n - 1]},
                             {"rel_diff", std::abs(lam[n - 1] - ref[n - 1]) / ref[n - 1]}}
                  .dump()
           << '\n';
  }
  detail::emit(cfg, body.str(), out);
  return kOk;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    if (cfg.command == "solve") return cmd_solve(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "transform") return cmd_transform(cfg, out);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DensityError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  }
}

/// Parses argv and runs the selected subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Eigenvalue ratios of the vibrating string -y'' = lambda rho y", "string-spectra"};
  app.require_subcommand(1);
  std::string mesh = "1000,2000";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--density", cfg.densities, "density JSON file (repeatable)");
    sub->add_option("--nmax", cfg.n_max, "number of eigenvalues")->capture_default_str();
    sub->add_option("--rel-tol", cfg.rel_tol, "relative eigenvalue tolerance in [1e-14, 1e-2]")
        ->capture_default_str();
    sub->add_option("--grid", cfg.grid, "RK4 integration steps on [0,1]")->capture_default_str();
    sub->add_option("--mesh", mesh, "oracle meshes N1,N2")->capture_default_str();
    sub->add_option("--tau-steps", cfg.tau_steps, "homotopy tau grid points")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for random corpora")->capture_default_str();
    sub->add_option("--format", cfg.format, "csv or json")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (default stdout)");
  };
  auto* solve = app.add_subcommand("solve", "eigenvalues and eigenfunction zeros");
  common(solve);
  solve->add_flag("--with-oracle", cfg.with_oracle, "add finite-difference oracle columns");
  auto* verify = app.add_subcommand("verify", "run verification claims");
  common(verify);
  verify->add_option("--claim", cfg.claim, "claim set")
      ->check(CLI::IsMember(claim_names()))
      ->capture_default_str();
  verify->add_option("--random", cfg.random, "add N seeded random concave densities");
  verify->add_flag("--timing", cfg.timing, "fill runtime_ms");
  auto* transform = app.add_subcommand("transform", "Legendre substitution for --density p --density rho");
  common(transform);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  auto comma = mesh.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(mesh);
    cfg.mesh_coarse = std::stoi(mesh.substr(0, comma));
    cfg.mesh_fine = std::stoi(mesh.substr(comma + 1));
  } catch (const std::exception&) {
    err << "error: --mesh expects INT,INT\n";
    return kInputError;
  }
  return dispatch(cfg, out, err);
}

}  // namespace string_spectra::cli
