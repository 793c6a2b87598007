#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "kohnbound/bounds.hpp"
#include "kohnbound/defining_function.hpp"
#include "kohnbound/surface.hpp"

namespace kohnbound {

enum class SurfaceKind { sphere, ellipsoid, fubini_study, polynomial };

/// A fully described run: surface family, level, quadrature, and outputs.
/// Defaults match the CLI documentation (seed 42, 1e5 samples, Rayleigh
/// degree 1).
struct RunConfig {
  SurfaceKind surface = SurfaceKind::sphere;
  RVec a;                // ellipsoid coefficients, one per coordinate
  std::string hol_text;  // fubini_study holomorphic part
  std::string rho_text;  // polynomial defining function
  double nu = 0.0;
  bool has_nu = false;
  std::size_t n = 0;  // CR dimension; 0 means "infer from the surface"
  QuadMethod method = QuadMethod::monte_carlo;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  unsigned rayleigh_degree = 1;
  std::string report_path;
  std::string csv_path;
};

/// Validates the config in place: requires nu, infers n where the surface
/// determines it, and enforces the sample-count floor. Throws ConfigError
/// or ParseError naming the offending field.
void validate_config(RunConfig& cfg);

/// Constructs the defining function the config describes. Assumes a
/// validated config.
DefiningFunction build_surface(const RunConfig& cfg);

/// Runs the full pipeline: surface, quadrature, every applicable bound,
/// consistency residuals. Writes the per-sample CSV when csv_path is set.
/// The returned document is byte-stable for identical configs. Errors from
/// any stage are rethrown with the stage named.
nlohmann::ordered_json run_report(const RunConfig& cfg);

/// Serializes with a fixed layout (2-space indent, trailing newline), the
/// form the determinism guarantee is stated for.
std::string render_report(const nlohmann::ordered_json& doc);

}  // namespace kohnbound
