#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "kohnbound/errors.hpp"
#include "kohnbound/report.hpp"

using namespace kohnbound;

namespace {

RunConfig small_sphere_config() {
  RunConfig cfg;
  cfg.surface = SurfaceKind::sphere;
  cfg.n = 1;
  cfg.nu = 1.0;
  cfg.has_nu = true;
  cfg.samples = 2000;
  cfg.seed = 42;
  cfg.rayleigh_degree = 1;
  return cfg;
}

errc validate_failure(RunConfig cfg) {
  try {
    validate_config(cfg);
  } catch (const error& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return errc::config_error;
}

#ifdef KOHNBOUND_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(KOHNBOUND_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
#endif

}  // namespace

TEST_CASE("validate_config rejects bad configurations") {
  {
    RunConfig cfg = small_sphere_config();
    cfg.has_nu = false;
    CHECK(validate_failure(cfg) == errc::config_error);
  }
  {
    RunConfig cfg = small_sphere_config();
    cfg.samples = 99;
    CHECK(validate_failure(cfg) == errc::config_error);
  }
  {
    RunConfig cfg = small_sphere_config();
    cfg.surface = SurfaceKind::ellipsoid;
    cfg.a = {0.5, 0.0, 0.0};
    cfg.n = 1;  // contradicts |A| - 1 = 2
    CHECK(validate_failure(cfg) == errc::config_error);
  }
  {
    RunConfig cfg = small_sphere_config();
    cfg.nu = -0.5;  // below rho at the center
    CHECK(validate_failure(cfg) == errc::config_error);
  }
  {
    RunConfig cfg = small_sphere_config();
    cfg.surface = SurfaceKind::polynomial;
    cfg.rho_text = "z1*c1 + z2*c2 + $";
    CHECK(validate_failure(cfg) == errc::parse_error);
  }
  {
    // imaginary-valued rho
    RunConfig cfg = small_sphere_config();
    cfg.surface = SurfaceKind::polynomial;
    cfg.rho_text = "z1*c1 + z2*c2 + i*z1^2";
    CHECK(validate_failure(cfg) == errc::config_error);
  }
}

TEST_CASE("validate_config fills inferred fields") {
  RunConfig cfg = small_sphere_config();
  cfg.surface = SurfaceKind::ellipsoid;
  cfg.a = {0.5, 0.0, 0.0};
  cfg.n = 0;
  validate_config(cfg);
  CHECK(cfg.n == 2);

  RunConfig fs = small_sphere_config();
  fs.surface = SurfaceKind::fubini_study;
  fs.hol_text = "0.1*z2^2";
  fs.n = 0;
  validate_config(fs);
  CHECK(fs.n == 1);
}

TEST_CASE("run_report document layout") {
  const nlohmann::ordered_json doc = run_report(small_sphere_config());
  CHECK(doc.at("schema_version") == 1);
  CHECK(doc.at("config").at("surface") == "sphere");
  CHECK(doc.at("config").at("n") == 1);
  CHECK(doc.at("config").at("samples") == 2000);
  CHECK(doc.at("volume").at("value").get<double>() > 0.0);
  CHECK(doc.at("condition").size() == 2);
  CHECK(doc.at("bound_thm11").at("applicable") == true);
  CHECK(doc.at("bound_thm11").at("value").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(doc.at("bound_thm12").at("applicable") == true);
  CHECK(doc.at("bound_thm41").contains("stderr"));
  CHECK(doc.at("bound_cor13").at("exact") == true);
  CHECK(doc.at("bound_cor13").at("value").get<double>() ==
        doctest::Approx(1.0));
  CHECK(doc.at("cj_dj").size() == 2);
  CHECK(doc.at("cj_dj")[0].at("j") == 1);
  CHECK(doc.at("rayleigh").at("degree") == 1);
  CHECK(doc.at("residuals").at("formula_equivalence_max").get<double>() <
        1e-10);

  // the condition fails on the logarithmic family and thm11 is withheld
  RunConfig fs = small_sphere_config();
  fs.surface = SurfaceKind::fubini_study;
  fs.hol_text = "0";
  fs.n = 1;
  fs.samples = 500;
  const nlohmann::ordered_json fsdoc = run_report(fs);
  CHECK(fsdoc.at("bound_thm11").at("applicable") == false);
  CHECK(fsdoc.at("bound_thm11").at("reason") == "ConditionViolated");
  CHECK(fsdoc.at("bound_thm12").at("reason") == "NotFlat");
  CHECK(fsdoc.at("bound_cor13").at("applicable") == false);

  // rayleigh_degree = 0 disables the estimate
  RunConfig off = small_sphere_config();
  off.rayleigh_degree = 0;
  CHECK(run_report(off).at("rayleigh").at("enabled") == false);
}

TEST_CASE("reports are byte-stable and thread-count independent") {
  const RunConfig cfg = small_sphere_config();
  const std::string a = render_report(run_report(cfg));
  const std::string b = render_report(run_report(cfg));
  CHECK(a == b);

  setenv("KOHNBOUND_THREADS", "1", 1);
  const std::string one = render_report(run_report(cfg));
  setenv("KOHNBOUND_THREADS", "3", 1);
  const std::string three = render_report(run_report(cfg));
  unsetenv("KOHNBOUND_THREADS");
  CHECK(one == a);
  CHECK(three == a);

  RunConfig other = cfg;
  other.seed = 43;
  CHECK(render_report(run_report(other)) != a);
}

#ifdef KOHNBOUND_CLI_PATH

TEST_CASE("CLI end-to-end: exit codes") {
  CHECK(run_cli("--surface sphere --n 1 --nu 1 --samples 500") == 0);
  CHECK(run_cli("--surface ellipsoid --A 0.5,0 --nu 1 --samples 500") == 0);
  // config errors
  CHECK(run_cli("--surface sphere --n 1 --samples 500") == 2);  // no --nu
  CHECK(run_cli("--surface ellipsoid --A 1.2,0 --nu 1 --samples 500") == 2);
  CHECK(run_cli("--surface polynomial --rho \"z1*c1 + (\" --nu 1") == 2);
  CHECK(run_cli("--no-such-flag") == 2);
  // numerical failure: the level set is not compact, the radial solve fails
  CHECK(run_cli("--surface fubini_study --hol \"z1^2\" --n 1 --nu 0.5 "
                "--samples 500") == 3);
}

TEST_CASE("CLI end-to-end: report files and CSV") {
  const std::string dir = "cli_artifacts";
  REQUIRE(std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0);
  const std::string r1 = dir + "/a.json";
  const std::string r2 = dir + "/b.json";
  const std::string csv = dir + "/samples.csv";
  const std::string base =
      "--surface ellipsoid --A 0.3,0.5 --nu 1 --samples 500 --seed 11 ";
  REQUIRE(run_cli(base + "--report " + r1 + " --csv " + csv) == 0);
  REQUIRE(run_cli(base + "--report " + r2) == 0);
  const std::string t1 = slurp(r1);
  CHECK(t1 == slurp(r2));
  CHECK(t1.back() == '\n');
  const nlohmann::ordered_json doc = nlohmann::ordered_json::parse(t1);
  CHECK(doc.at("config").at("surface") == "ellipsoid");
  CHECK(doc.at("config").at("seed") == 11);

  const std::string text = slurp(csv);
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 501);  // header + one line per sample
  CHECK(text.rfind("dir_0,", 0) == 0);
  CHECK(text.find("weight,grad_len_sq,r,s") != std::string::npos);
}

#endif  // KOHNBOUND_CLI_PATH
