#include "kohnbound/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "kohnbound/errors.hpp"
#include "kohnbound/metric.hpp"

namespace kohnbound {

namespace {

using nlohmann::ordered_json;

template <class F>
auto stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const error& e) {
    throw error(e.code(), std::string("in stage '") + name + "': " + e.what());
  }
}

const char* surface_name(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::ellipsoid: return "ellipsoid";
    case SurfaceKind::fubini_study: return "fubini_study";
    case SurfaceKind::polynomial: return "polynomial";
  }
  return "?";
}

ordered_json with_se(double value, double se) {
  return ordered_json{{"value", value}, {"stderr", se}};
}

ordered_json exact(double value) {
  return ordered_json{{"value", value}, {"exact", true}};
}

void write_csv(const std::string& path, const SurfaceQuadrature& quad,
               const DefiningFunction& f) {
  std::ofstream out(path);
  if (!out) fail(errc::config_error, "cannot open csv path: " + path);
  const std::size_t m = f.ambient_dim();
  for (std::size_t i = 0; i < 2 * m; ++i) out << "dir_" << i << ",";
  out << "t,";
  for (std::size_t j = 1; j <= m; ++j) out << "re_z" << j << ",im_z" << j << ",";
  out << "weight,grad_len_sq,r,s\n";
  char buf[32];
  const auto put = [&](double x, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf << sep;
  };
  for (const SurfaceSample& s : quad.samples) {
    for (double d : s.direction) put(d, ',');
    put(s.t, ',');
    for (const cplx& z : s.point) {
      put(z.real(), ',');
      put(z.imag(), ',');
    }
    const MetricPoint mp = metric_at(f, s.point);
    put(s.weight, ',');
    put(mp.grad_len_sq, ',');
    put(mp.r, ',');
    put(mp.s, '\n');
  }
}

}  // namespace

void validate_config(RunConfig& cfg) {
  if (!cfg.has_nu) fail(errc::config_error, "missing required field --nu");
  if (cfg.samples < 100)
    fail(errc::config_error, "--samples must be at least 100");

  switch (cfg.surface) {
    case SurfaceKind::sphere:
      if (cfg.n == 0)
        fail(errc::config_error, "--n is required for --surface sphere");
      break;
    case SurfaceKind::ellipsoid: {
      if (cfg.a.empty())
        fail(errc::config_error, "--A is required for --surface ellipsoid");
      const std::size_t inferred = cfg.a.size() - 1;
      if (inferred == 0)
        fail(errc::config_error, "--A needs at least two entries (n >= 1)");
      if (cfg.n != 0 && cfg.n != inferred)
        fail(errc::config_error, "--n contradicts the length of --A");
      cfg.n = inferred;
      break;
    }
    case SurfaceKind::fubini_study: {
      if (cfg.n == 0) {
        const ComplexPolynomial hol = parse_polynomial(cfg.hol_text);
        if (hol.n_vars() < 2)
          fail(errc::config_error,
               "--n is required when --hol does not determine the dimension");
        cfg.n = hol.n_vars() - 1;
      }
      break;
    }
    case SurfaceKind::polynomial: {
      if (cfg.rho_text.empty())
        fail(errc::config_error, "--rho is required for --surface polynomial");
      if (cfg.n == 0) {
        const ComplexPolynomial rho = parse_polynomial(cfg.rho_text);
        if (rho.n_vars() < 2)
          fail(errc::config_error,
               "--n is required when --rho does not determine the dimension");
        cfg.n = rho.n_vars() - 1;
      }
      break;
    }
  }

  const DefiningFunction f = build_surface(cfg);
  const CVec origin(f.ambient_dim(), cplx{});
  if (f.value(origin) >= cfg.nu)
    fail(errc::config_error,
         "--nu must exceed the value of rho at the center");
}

DefiningFunction build_surface(const RunConfig& cfg) {
  const std::size_t m = cfg.n + 1;
  switch (cfg.surface) {
    case SurfaceKind::sphere:
      return make_sphere(cfg.n);
    case SurfaceKind::ellipsoid:
      return make_ellipsoid(cfg.a);
    case SurfaceKind::fubini_study: {
      ComplexPolynomial hol = parse_polynomial(cfg.hol_text, m);
      return DefiningFunction::fubini_study(std::move(hol));
    }
    case SurfaceKind::polynomial: {
      ComplexPolynomial rho = parse_polynomial(cfg.rho_text, m);
      if (!rho.is_real_valued())
        fail(errc::config_error, "--rho must be a real-valued polynomial");
      return DefiningFunction::from_polynomial(std::move(rho));
    }
  }
  fail(errc::config_error, "unknown surface kind");
}

ordered_json run_report(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  stage("config", [&] { validate_config(cfg); return 0; });
  const DefiningFunction f =
      stage("surface", [&] { return build_surface(cfg); });

  QuadratureSpec spec;
  spec.method = cfg.method;
  spec.count = cfg.samples;
  spec.seed = cfg.seed;
  const SurfaceQuadrature quad =
      stage("quadrature", [&] { return sample_surface(f, cfg.nu, spec); });

  const bool exact_family = cfg.surface == SurfaceKind::sphere ||
                            cfg.surface == SurfaceKind::ellipsoid;
  const BoundReport bounds = stage("bounds", [&] {
    return compute_bounds(f, quad, cfg.rayleigh_degree, exact_family,
                          cfg.seed);
  });

  if (!cfg.csv_path.empty())
    stage("csv", [&] { write_csv(cfg.csv_path, quad, f); return 0; });

  ordered_json doc;
  doc["schema_version"] = 1;
  ordered_json jc;
  jc["surface"] = surface_name(cfg.surface);
  if (cfg.surface == SurfaceKind::ellipsoid) jc["A"] = cfg.a;
  if (cfg.surface == SurfaceKind::fubini_study) jc["hol"] = cfg.hol_text;
  if (cfg.surface == SurfaceKind::polynomial) jc["rho"] = cfg.rho_text;
  jc["nu"] = cfg.nu;
  jc["n"] = cfg.n;
  jc["method"] =
      cfg.method == QuadMethod::monte_carlo ? "mc" : "grid";
  jc["samples"] = quad.samples.size();
  jc["seed"] = cfg.seed;
  jc["rayleigh_degree"] = cfg.rayleigh_degree;
  doc["config"] = std::move(jc);

  doc["volume"] = with_se(bounds.volume.value, bounds.volume.se);

  ordered_json cond = ordered_json::array();
  for (std::size_t j = 0; j < bounds.bound_max_result.verdicts.size(); ++j) {
    const ConditionResult& v = bounds.bound_max_result.verdicts[j];
    cond.push_back(ordered_json{
        {"j", j + 1}, {"max_lhs", v.max_lhs}, {"satisfied", v.satisfied}});
  }
  doc["condition"] = std::move(cond);

  if (bounds.bound_max_result.applicable) {
    doc["bound_thm11"] = ordered_json{
        {"applicable", true},
        {"value", *bounds.bound_max_result.value},
        {"kind", "sampled_max"}};
  } else {
    doc["bound_thm11"] = ordered_json{{"applicable", false},
                                      {"reason", "ConditionViolated"}};
  }

  if (bounds.flat_average) {
    doc["bound_thm12"] = ordered_json{
        {"applicable", true},
        {"value", bounds.flat_average->value},
        {"stderr", bounds.flat_average->se}};
  } else {
    doc["bound_thm12"] =
        ordered_json{{"applicable", false}, {"reason", "NotFlat"}};
  }

  doc["bound_thm41"] =
      with_se(bounds.hessian_ratio.value, bounds.hessian_ratio.se);

  if (bounds.exact_sphere_value) {
    doc["bound_cor13"] = exact(*bounds.exact_sphere_value);
  } else {
    doc["bound_cor13"] = ordered_json{{"applicable", false}};
  }

  ordered_json cj = ordered_json::array();
  for (std::size_t j = 0; j < bounds.per_trial.size(); ++j) {
    const CjDj& e = bounds.per_trial[j];
    ordered_json row;
    row["j"] = j + 1;
    row["C_j"] = with_se(e.c.value, e.c.se);
    row["D_j"] = with_se(e.d.value, e.d.se);
    if (bounds.trial_is_cr[j]) {
      row["trial_is_cr"] = true;
    } else {
      row["ratio"] = e.ratio;
      row["ratio_stderr"] = e.ratio_se;
    }
    cj.push_back(std::move(row));
  }
  doc["cj_dj"] = std::move(cj);

  if (bounds.rayleigh) {
    doc["rayleigh"] = ordered_json{
        {"degree", bounds.rayleigh->degree},
        {"estimate", bounds.rayleigh->estimate},
        {"stderr", bounds.rayleigh->se},
        {"trial_dim", bounds.rayleigh->trial_dim},
        {"dropped_null_dim", bounds.rayleigh->dropped_null_dim}};
  } else {
    doc["rayleigh"] = ordered_json{{"enabled", false}};
  }

  doc["residuals"] = ordered_json{
      {"formula_equivalence_max", bounds.residual_formula_equiv},
      {"integration_by_parts",
       with_se(bounds.residual_ibp, bounds.residual_ibp_se)}};
  return doc;
}

std::string render_report(const ordered_json& doc) {
  return doc.dump(2) + "\n";
}

}  // namespace kohnbound
