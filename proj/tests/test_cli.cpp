#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frontforge/job.hpp"
#include "frontforge/report.hpp"

using namespace frontforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path d = fs::temp_directory_path() / "front_forge_tests";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FRONT_FORGE_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing: sections, quoting, numbers") {
  const auto cfg = cli::JobConfig::parse(R"(
# job
[input]
preset = "cosh_example"
[domain]
u_min = -1.0
u_max = 1.0
v_min = -0.4
v_max = 0.4
grid_u = 21
grid_v = 11
base_u = 0
base_v = 0
[output]
json = "out.json"
[tolerances]
check = 1e-10
)");
  CHECK(cfg.preset_name == "cosh_example");
  CHECK(cfg.has_domain);
  CHECK(cfg.domain.u0 == -1.0);
  CHECK(cfg.grid_v == 11);
  CHECK(cfg.has_base);
  CHECK(cfg.out_json == "out.json");
  CHECK(cfg.tol.check == 1e-10);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(cli::JobConfig::parse("[bogus]\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::JobConfig::parse("[domain]\nu_min = -1\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::JobConfig::parse("[input]\nE = 1\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::JobConfig::parse("key = 1\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::JobConfig::parse("[tolerances]\ncheck = soon\n"), cli::ConfigError);

  // exactly one of preset/inline
  CHECK_THROWS_AS(cli::resolve(cli::JobConfig::parse("[input]\n")), cli::ConfigError);
  CHECK_THROWS_AS(cli::resolve(cli::JobConfig::parse(
                      "[input]\npreset = \"cosh_example\"\nE = \"1\"\n")),
                  cli::ConfigError);
  // inline input missing nu
  CHECK_THROWS_AS(
      cli::resolve(cli::JobConfig::parse("[input]\nE = \"1\"\nF = \"0\"\nG = \"1\"\n"
                                         "lambda = \"1\"\nHhat = \"1\"\n"
                                         "[domain]\nu_min = -1\nu_max = 1\nv_min = -1\n"
                                         "v_max = 1\n")),
      cli::ConfigError);
  // grid floor
  auto cfg = cli::JobConfig::parse("[input]\npreset = \"cosh_example\"\n");
  cfg.grid_u = 4;
  CHECK_THROWS_AS(cli::resolve(cfg), cli::ConfigError);
}

TEST_CASE("cmd_check passes the cosh preset and reports per-check residuals") {
  auto cfg = cli::JobConfig::parse("[input]\npreset = \"cosh_example\"\n");
  std::ostringstream out;
  const int rc = cli::cmd_check(cli::resolve(cfg), out);
  CHECK(rc == 0);
  const std::string text = out.str();
  CHECK(text.find("\"frontal\"") != std::string::npos);
  CHECK(text.find("\"admissible\"") != std::string::npos);
  CHECK(text.find("\"integrability\"") != std::string::npos);
  CHECK(text.find("\"hhat_limit\"") != std::string::npos);
  CHECK(text.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("cmd_check fails on a forced frontal mismatch") {
  const auto cfg = cli::JobConfig::parse(
      "[input]\nE = \"1\"\nF = \"0\"\nG = \"1\"\nlambda = \"2\"\n"
      "nu_x = \"0\"\nnu_y = \"0\"\nnu_z = \"1\"\nHhat = \"1\"\n"
      "[domain]\nu_min = -1\nu_max = 1\nv_min = -1\nv_max = 1\n");
  std::ostringstream out;
  CHECK(cli::cmd_check(cli::resolve(cfg), out) == 1);
  CHECK(out.str().find("\"pass\": false") != std::string::npos);
}

TEST_CASE("cmd_build writes a mesh, a singular polyline, and the closed-form deviation") {
  const fs::path dir = temp_dir();
  const fs::path obj = dir / "trans.obj";
  std::ostringstream cfg_text;
  cfg_text << "[input]\npreset = \"translation_half_sin\"\n[domain]\n"
              "u_min = -2\nu_max = 2\nv_min = -0.5\nv_max = 0.5\ngrid_u = 17\ngrid_v = 9\n"
              "[output]\nobj = \"" << obj.string() << "\"\n";
  auto cfg = cli::JobConfig::parse(cfg_text.str());
  std::ostringstream out;
  const int rc = cli::cmd_build(cli::resolve(cfg), out);
  CHECK(rc == 0);
  const std::string report = out.str();
  CHECK(report.find("max_closed_form_deviation") != std::string::npos);

  const std::string mesh = slurp(obj);
  CHECK(mesh.find("v ") == 0);
  CHECK(mesh.find("\nf ") != std::string::npos);
  // one vertex per node
  std::size_t vcount = 0;
  for (std::size_t pos = 0; (pos = mesh.find("v ", pos)) != std::string::npos; pos += 2)
    if (pos == 0 || mesh[pos - 1] == '\n') ++vcount;
  CHECK(vcount == 17 * 9);

  const std::string curve = slurp(dir / "trans_singular.obj");
  CHECK(curve.find("\nl ") != std::string::npos);

  // deviation value parsed from the report
  const auto pos = report.find("max_closed_form_deviation");
  const double dev = std::strtod(report.c_str() + report.find(':', pos) + 1, nullptr);
  CHECK(dev < 1e-8);
}

TEST_CASE("reports are byte-stable across runs") {
  auto cfg = cli::JobConfig::parse("[input]\npreset = \"cosh_example\"\n[domain]\n"
                                   "u_min = -1\nu_max = 1\nv_min = -0.4\nv_max = 0.4\n"
                                   "grid_u = 13\ngrid_v = 9\n");
  std::ostringstream a, b;
  cli::cmd_check(cli::resolve(cfg), a);
  cli::cmd_check(cli::resolve(cfg), b);
  CHECK(a.str() == b.str());
  std::ostringstream ia, ib;
  cli::cmd_invariants(cli::resolve(cfg), ia);
  cli::cmd_invariants(cli::resolve(cfg), ib);
  CHECK(ia.str() == ib.str());
  CHECK(ia.str().find("kappa_s_direct") != std::string::npos);
}

TEST_CASE("cmd_classify labels the swallowtail preset") {
  auto cfg = cli::JobConfig::parse("[input]\npreset = \"swallowtail\"\n");
  std::ostringstream out;
  const int rc = cli::cmd_classify(cli::resolve(cfg), out);
  CHECK(rc == 0);
  const std::string text = out.str();
  CHECK(text.find("\"Swallowtail\"") != std::string::npos);
  CHECK(text.find("\"A_3\"") != std::string::npos);
  CHECK(text.find("\"A_2\"") != std::string::npos);
  CHECK(text.find("\"agree\": false") == std::string::npos);
}

TEST_CASE("cmd_classify on the flat metric finds nothing") {
  auto cfg = cli::JobConfig::parse("[input]\npreset = \"flat_plane\"\n");
  std::ostringstream out;
  CHECK(cli::cmd_classify(cli::resolve(cfg), out) == 0);
  CHECK(out.str().find("\"points\": []") != std::string::npos);
}

TEST_CASE("cmd_invariants emits the CSV schema with both routes") {
  const fs::path csv_path = temp_dir() / "inv.csv";
  std::ostringstream cfg_text;
  cfg_text << "[input]\npreset = \"cosh_example\"\n[domain]\n"
              "u_min = -1\nu_max = 1\nv_min = -0.4\nv_max = 0.4\ngrid_u = 13\ngrid_v = 9\n"
              "[output]\ncsv = \"" << csv_path.string() << "\"\n";
  auto cfg = cli::JobConfig::parse(cfg_text.str());
  std::ostringstream out;
  const int rc = cli::cmd_invariants(cli::resolve(cfg), out);
  CHECK(rc == 0);
  const std::string csv = slurp(csv_path);
  CHECK(csv.rfind("t,u,v,kappa_s_direct,kappa_s_closed,kappa_nu_direct,kappa_nu_closed,"
                  "kappa_t_direct,kappa_t_closed,kappa_c_direct,kappa_c_closed,line_flag,"
                  "plane_flag,mu_c_direct,mu_c_closed,tau_s_direct,tau_s_closed\n",
                  0) == 0);
  // a data row with kappa_s ~ 2; the edge circle is planar but not a line
  CHECK(csv.find("2.000000000000e+00") != std::string::npos);
  CHECK(csv.find(",false,true,") != std::string::npos);
}

TEST_CASE("cmd_build runs on the 8x8 minimal grid") {
  const fs::path obj = temp_dir() / "smoke.obj";
  std::ostringstream cfg_text;
  cfg_text << "[input]\npreset = \"cosh_example\"\n[domain]\n"
              "u_min = -0.5\nu_max = 0.5\nv_min = -0.3\nv_max = 0.3\ngrid_u = 8\ngrid_v = 8\n"
              "[output]\nobj = \"" << obj.string() << "\"\n";
  std::ostringstream out;
  CHECK(cli::cmd_build(cli::resolve(cli::JobConfig::parse(cfg_text.str())), out) == 0);
  CHECK(fs::exists(obj));
}

TEST_CASE("cmd_invariants exits nonzero when routes mismatch beyond tolerance") {
  auto cfg = cli::JobConfig::parse(
      "[input]\npreset = \"cosh_example\"\n[domain]\n"
      "u_min = -1\nu_max = 1\nv_min = -0.4\nv_max = 0.4\ngrid_u = 13\ngrid_v = 9\n"
      "[tolerances]\ninvariant_match = 1e-18\n");
  std::ostringstream out;
  CHECK(cli::cmd_invariants(cli::resolve(cfg), out) == 1);
}

TEST_CASE("binary: exit codes 0/1/2") {
  CHECK(run_binary("check --preset cosh_example") == 0);
  CHECK(run_binary("classify --preset cuspidal_beaks") == 0);
  CHECK(run_binary("check --preset no_such_preset") == 2);
  CHECK(run_binary("bogus-subcommand") == 2);
  CHECK(run_binary("check") == 2);

  // forced frontal failure through a config file -> exit 1
  const fs::path bad = temp_dir() / "bad.cfg";
  {
    std::ofstream f(bad);
    f << "[input]\nE = \"1\"\nF = \"0\"\nG = \"1\"\nlambda = \"2\"\n"
         "nu_x = \"0\"\nnu_y = \"0\"\nnu_z = \"1\"\nHhat = \"1\"\n"
         "[domain]\nu_min = -1\nu_max = 1\nv_min = -1\nv_max = 1\n";
  }
  CHECK(run_binary("check --config " + bad.string()) == 1);
}
