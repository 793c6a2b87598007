#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kohnbound/errors.hpp"
#include "kohnbound/report.hpp"

namespace {

int exit_code_for(kohnbound::errc code) {
  switch (code) {
    case kohnbound::errc::config_error:
    case kohnbound::errc::parse_error:
    case kohnbound::errc::non_compact:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Upper bounds for the first positive eigenvalue of the Kohn-Laplacian "
      "on compact level sets of strictly plurisubharmonic functions"};

  kohnbound::RunConfig cfg;
  std::string surface = "sphere";
  std::string method = "mc";
  double nu = 0.0;
  long long n = 0;

  app.add_option("--surface", surface,
                 "Surface family: sphere | ellipsoid | fubini_study | "
                 "polynomial")
      ->check(CLI::IsMember({"sphere", "ellipsoid", "fubini_study",
                             "polynomial"}));
  app.add_option("--A", cfg.a,
                 "Ellipsoid coefficients A_1,...,A_{n+1} (0 <= A_j < 1)")
      ->delimiter(',');
  app.add_option("--hol", cfg.hol_text,
                 "Holomorphic part for fubini_study, e.g. \"0.1*z1^2\"");
  app.add_option("--rho", cfg.rho_text,
                 "Real-valued defining polynomial, e.g. "
                 "\"z1*c1 + z2*c2 + 0.25*z1^2 + 0.25*c1^2\"");
  CLI::Option* nu_opt = app.add_option("--nu", nu, "Level of the surface");
  app.add_option("--n", n, "CR dimension (inferred where possible)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--method", method, "Quadrature: mc | grid")
      ->check(CLI::IsMember({"mc", "grid"}));
  app.add_option("--samples", cfg.samples, "Sample count (default 100000)");
  app.add_option("--seed", cfg.seed, "Monte Carlo seed (default 42)");
  app.add_option("--rayleigh-degree", cfg.rayleigh_degree,
                 "Trial polynomial degree; 0 disables (default 1)");
  app.add_option("--report", cfg.report_path,
                 "Report output path (default: stdout)");
  app.add_option("--csv", cfg.csv_path, "Optional per-sample CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  if (surface == "sphere") cfg.surface = kohnbound::SurfaceKind::sphere;
  else if (surface == "ellipsoid") cfg.surface = kohnbound::SurfaceKind::ellipsoid;
  else if (surface == "fubini_study") cfg.surface = kohnbound::SurfaceKind::fubini_study;
  else cfg.surface = kohnbound::SurfaceKind::polynomial;
  cfg.method = method == "grid" ? kohnbound::QuadMethod::product_grid
                                : kohnbound::QuadMethod::monte_carlo;
  cfg.nu = nu;
  cfg.has_nu = nu_opt->count() > 0;
  cfg.n = static_cast<std::size_t>(n);

  try {
    const nlohmann::ordered_json doc = kohnbound::run_report(cfg);
    const std::string text = kohnbound::render_report(doc);
    if (cfg.report_path.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      std::ofstream out(cfg.report_path, std::ios::binary);
      if (!out) {
        std::cerr << "ConfigError: cannot open report path: "
                  << cfg.report_path << "\n";
        return 2;
      }
      out << text;
    }
    return 0;
  } catch (const kohnbound::error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
