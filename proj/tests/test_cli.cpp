#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gradedgeo/cli/commands.hpp"
#include "gradedgeo/cli/config.hpp"
#include "gradedgeo/cli/validate.hpp"
#include "gradedgeo/riemann.hpp"

using namespace gradedgeo;
using namespace gradedgeo::cli;
using nlohmann::json;

namespace {

const std::string kConfigDir = GRADEDGEO_CONFIG_DIR;

RunConfig config(const std::string& name) { return load_config(kConfigDir + "/" + name); }

struct ToolRun {
  int code;
  std::string out;
};

ToolRun run_tool(const std::string& args) {
  const std::string cmd = std::string(GRADEDGEO_TOOL) + " " + args + " 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe.release());
  return {WEXITSTATUS(status), out};
}

std::string key_path_of(const std::string& text) {
  try {
    build_graded_metric(parse_config(text));
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
# comment
[chart]
coords = t, x
box.t = 0.5, 4
[params]
n = 3
[metric]
g_0_0 = -1
g_1_1 = t^(2/n)
[theta]
expr = ln(t)
[grid]
counts = 4, 1
[tolerances]
residual_tol = 1e-8
fd_tol = 1e-4
[quadrature]
nodes = 12
[output]
format = csv
)");
  CHECK(cfg.coords == std::vector<std::string>{"t", "x"});
  CHECK(cfg.box.at("t").lo == 0.5);
  CHECK(cfg.box.count("x") == 0);
  CHECK(cfg.params.at("n") == 3.0);
  CHECK(cfg.metric.at("g_1_1") == "t^(2/n)");
  CHECK(cfg.grid_counts == std::vector<int>{4, 1});
  CHECK(cfg.residual_tol == 1e-8);
  CHECK(cfg.fd_tol == 1e-4);
  CHECK(cfg.quad_nodes == 12);
  CHECK(cfg.format == "csv");
  CHECK_FALSE(cfg.variation);
  CHECK_FALSE(cfg.cosmo);

  const auto gm = build_graded_metric(cfg);
  CHECK(gm.theta()(std::vector{2.0, 0.0}) == doctest::Approx(std::log(2.0)));
  const auto g = metric_at(gm.g(), std::vector{3.375, 0.0}).g;
  CHECK(g[{0, 0}] == -1.0);
  CHECK(g[{1, 1}] == doctest::Approx(2.25));
}

TEST_CASE("config round trip and hash") {
  for (const char* name : {"eds3.ini", "eds2_action.ini", "curved_action.ini", "flat_theta_x.ini", "minkowski.ini",
                           "cosmo_n2.ini", "degenerate.ini"}) {
    CAPTURE(name);
    const auto cfg = config(name);
    const auto text = serialize_config(cfg);
    const auto back = parse_config(text);
    CHECK(back == cfg);
    CHECK(serialize_config(back) == text);
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(config_hash(cfg).size() == 16);
  }
  auto a = config("eds3.ini");
  auto b = a;
  b.residual_tol = 1e-8;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("config errors carry key paths") {
  CHECK(key_path_of("[theta]\nexpr = 1\n") == "chart.coords");
  CHECK(key_path_of("[metric]\ng_0_0 = 1\n") == "metric.g_0_0");
  CHECK(key_path_of("[chart]\ncoords = x\n[metric]\ng_0_0 = 1 +\n") == "metric.g_0_0");
  CHECK(key_path_of("[chart]\ncoords = x\n[metric]\ng_0_0 = 1\n[bogus]\n") == "bogus");
  CHECK(key_path_of("[chart]\ncoords = x\nbox.x = 2, 1\n[metric]\ng_0_0 = 1\n") == "chart.box.x");
  CHECK(key_path_of("[chart]\ncoords = x\n[metric]\ng_0_0 = 1\n[theta]\nexpr = y\n") == "theta.expr");
  CHECK(key_path_of("[chart]\ncoords = x\n[metric]\ng_0_0 = 1\n[quadrature]\nnodes = many\n") == "quadrature.nodes");
  CHECK(parse_config("[chart]\ncoords = x, y\n[metric]\ng_1_0 = 1\n").metric.count("g_0_1") == 1);
  CHECK(key_path_of("[chart]\ncoords = x, y\n[metric]\ng_0_1 = 1\ng_1_0 = 2\n") == "metric.g_1_0");
  CHECK(key_path_of("[chart]\ncoords = x, y\n[metric]\ng_0_2 = 1\n") == "metric.g_0_2");
  CHECK_THROWS_AS(load_config(kConfigDir + "/missing.ini"), ConfigError);
}

TEST_CASE("grid points") {
  auto cfg = config("flat_theta_x.ini");
  const auto pts = grid_points(cfg);
  REQUIRE(pts.size() == 9);
  CHECK(pts[0] == std::vector{0.0, 0.0});
  CHECK(pts[1] == std::vector{0.0, 0.5});
  CHECK(pts[8] == std::vector{1.0, 1.0});

  const auto eds = grid_points(config("eds3.ini"));
  REQUIRE(eds.size() == 20);
  CHECK(eds[0] == std::vector{0.0, 0.0, 0.0, 0.5});
  CHECK(eds[19][3] == 4.0);

  cfg.grid_points = {{0.25, 0.75}};
  CHECK(grid_points(cfg) == std::vector<std::vector<double>>{{0.25, 0.75}});
}

TEST_CASE("residuals command exit codes") {
  std::ostringstream out;
  CHECK(cmd_residuals(config("eds3.ini"), {}, out) == kExitPass);
  const auto j = json::parse(out.str());
  CHECK(j["summary"]["pass"] == true);
  CHECK(j["records"].size() == 20);
  CHECK(j["summary"]["max_e44"].get<double>() <= 1e-9);
  CHECK(j["provenance"]["command"] == "residuals");
  CHECK(j["provenance"]["config_hash"] == config_hash(config("eds3.ini")));

  std::ostringstream flat;
  CHECK(cmd_residuals(config("flat_theta_x.ini"), {}, flat) == kExitResidualFailure);
  const auto f = json::parse(flat.str());
  CHECK(f["summary"]["max_e29"] == 2.0);
  CHECK(f["records"][0]["graded_scalar"] == -2.0);

  std::ostringstream mk;
  CHECK(cmd_residuals(config("minkowski.ini"), {}, mk) == kExitPass);

  std::ostringstream csv;
  CommandOptions o;
  o.format = "csv";
  o.grid = std::vector{1, 1, 1, 3};
  CHECK(cmd_residuals(config("eds3.ini"), o, csv) == kExitPass);
  int lines = 0;
  for (char ch : csv.str()) lines += ch == '\n';
  CHECK(lines == 4);
}

TEST_CASE("run_guarded maps errors") {
  std::ostringstream err;
  const int rc = run_guarded([] { return cmd_report(config("degenerate.ini"), {}, std::cout); }, err);
  CHECK(rc == kExitDomainError);
  const auto j = json::parse(err.str());
  CHECK(j["error"] == "degenerate_metric");

  std::ostringstream err2;
  CHECK(run_guarded([]() -> int { throw ConfigError("grid.counts", "bad"); }, err2) == kExitConfigError);
  CHECK(json::parse(err2.str())["error"] == "config");
  CHECK(run_guarded([] { return 1; }, err2) == 1);
}

TEST_CASE("report output is deterministic") {
  std::ostringstream a, b;
  CHECK(cmd_report(config("flat_theta_x.ini"), {}, a) == kExitPass);
  CHECK(cmd_report(config("flat_theta_x.ini"), {}, b) == kExitPass);
  CHECK(a.str() == b.str());
  const auto j = json::parse(a.str());
  REQUIRE(j["points"].size() == 9);
  const auto& p = j["points"][0];
  CHECK(p["graded_scalar"] == -2.0);
  CHECK(p["scalar_curvature"] == 0.0);
  CHECK(p.contains("tilde_T"));
  CHECK(p.contains("graded_ricci"));
}

TEST_CASE("validate command") {
  std::ostringstream out;
  CHECK(cmd_validate(nullptr, {}, out) == kExitPass);
  const auto j = json::parse(out.str());
  CHECK(j["checks"].size() >= 5);
  for (const auto& c : j["checks"]) CHECK_MESSAGE(c["pass"] == true, c["name"]);

  const auto geo = random_geometry(42);
  CHECK(geo.points.size() == 5);
  CHECK(run_validation(geo.gm, geo.points, 42).pass());

  std::ostringstream eds;
  CHECK(cmd_validate(nullptr, {}, eds) == kExitPass);
  CHECK(eds.str() == out.str());
}

TEST_CASE("cosmo command") {
  std::ostringstream out;
  CommandOptions o;
  o.format = "json";
  CHECK(cmd_cosmo(nullptr, o, out) == kExitPass);
  const auto j = json::parse(out.str());
  CHECK(j["summary"]["n"] == 3);
  for (const auto& r : j["trajectory"]) {
    const double t = r["t"];
    CHECK(std::abs(r["a"].get<double>() - std::log(t) / 3.0) <= 1e-8);
  }

  std::ostringstream n2;
  const auto cfg = config("cosmo_n2.ini");
  CHECK(cmd_cosmo(&cfg, {}, n2) == kExitPass);
  CHECK(n2.str().rfind("t,a,a_dot,theta,eq41_residual,eq42_residual\n", 0) == 0);

  auto bad = cfg;
  bad.cosmo->step = 0.0;
  std::ostringstream sink;
  CHECK_THROWS_AS(cmd_cosmo(&bad, {}, sink), ConfigError);
}

TEST_CASE("action command") {
  auto cfg = config("flat_theta_x.ini");
  cfg.quad_nodes = 8;
  std::ostringstream out;
  CHECK(cmd_action(cfg, {}, out) == kExitPass);
  const auto j = json::parse(out.str());
  CHECK(j["variation"]["closed_form"] == 0.0);
  CHECK(j["variation"]["action"].get<double>() == doctest::Approx(-2.0).epsilon(1e-12));

  std::ostringstream curved;
  CHECK(cmd_action(config("curved_action.ini"), {}, curved) == kExitPass);
  const auto c = json::parse(curved.str());
  CHECK(c["variation"]["critical"] == false);
  CHECK(c["variation"]["pass"] == true);
}

TEST_CASE("tool binary") {
  const auto eds = run_tool("residuals --config " + kConfigDir + "/eds3.ini");
  CHECK(eds.code == 0);
  CHECK(json::parse(eds.out)["summary"]["pass"] == true);

  const auto flat = run_tool("residuals --config " + kConfigDir + "/flat_theta_x.ini");
  CHECK(flat.code == 1);

  const auto deg = run_tool("report --config " + kConfigDir + "/degenerate.ini");
  CHECK(deg.code == 3);
  CHECK(json::parse(deg.out)["error"] == "degenerate_metric");

  CHECK(run_tool("report --config " + kConfigDir + "/missing.ini").code == 2);
  CHECK(run_tool("report").code == 2);
  CHECK(run_tool("residuals --config " + kConfigDir + "/eds3.ini --grid 1,2").code == 2);

  const auto v = run_tool("validate --seed 42");
  CHECK(v.code == 0);
  CHECK(run_tool("validate --seed 42").out == v.out);

  const auto cosmo = run_tool("cosmo --format csv");
  CHECK(cosmo.code == 0);
  CHECK(cosmo.out.rfind("t,a,a_dot,theta", 0) == 0);
}
