#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "grandlux/experiment.hpp"
#include "grandlux/svg.hpp"

using namespace grandlux;
using namespace grandlux::experiment;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("grandlux_test_" + tag + "_" + std::to_string(getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

int run_cli(const std::string& args, const fs::path& cwd, std::string* output = nullptr) {
  fs::path out_file = cwd / "cli_output.txt";
  std::string cmd = "cd '" + cwd.string() + "' && '" + GRANDLUX_CLI_PATH + "' " + args + " > '" +
                    out_file.string() + "' 2>&1";
  int status = std::system(cmd.c_str());
  if (output) *output = slurp(out_file);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

json config_json(const char* name) {
  std::ifstream in(fs::path(GRANDLUX_CONFIG_DIR) / name);
  REQUIRE(in);
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  json j = config_json("two_cycle.json");

  j["theta"] = -1.0;
  try {
    ExperimentConfig::from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "theta");
  }

  j = config_json("two_cycle.json");
  j["exponent"] = {{"type", "constant"}, {"p", 1.0}};  // p- <= 1
  try {
    ExperimentConfig::from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "exponent");
  }

  j = config_json("two_cycle.json");
  j["n_schedule"] = {4, 2};
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  j = config_json("two_cycle.json");
  j["function"] = {{"type", "power"}, {"a", -0.5}};  // power on a finite space
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  // unregistered power singularity on an interval space
  j = config_json("power_grand.json");
  j["space"] = {{"type", "interval"}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
}

TEST_CASE("run_experiment writes deterministic artifacts and exits 0") {
  auto dir = make_temp_dir("run");
  json j = config_json("two_cycle.json");
  j["output"]["report"] = (dir / "report.json").string();
  j["output"]["csv"] = (dir / "convergence.csv").string();

  auto cfg = ExperimentConfig::from_json(j);
  CHECK(run_experiment(cfg) == 0);
  std::string report1 = slurp(dir / "report.json");
  std::string csv1 = slurp(dir / "convergence.csv");

  CHECK(run_experiment(cfg) == 0);
  CHECK(slurp(dir / "report.json") == report1);  // byte-identical
  CHECK(slurp(dir / "convergence.csv") == csv1);

  json rep = json::parse(report1);
  CHECK(rep["passed"] == true);
  CHECK(rep["part_ii"]["mean_f"] == 1.5);
  CHECK(rep["part_iii"]["rows"].size() == 3);

  std::istringstream csv(csv1);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,diff_grand_norm,argmax_eps");
  std::getline(csv, line);
  CHECK(line.rfind("3,0,", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("csv rendering is lossless for doubles") {
  std::vector<ergodic::ConvergenceRow> rows = {{3, 0.1 + 0.2, 0.3333333333333333},
                                               {6, 1e-17, 0.5}};
  std::string csv = convergence_csv(rows);
  std::istringstream ss(csv);
  std::string header, l1;
  std::getline(ss, header);
  std::getline(ss, l1);
  auto comma1 = l1.find(',');
  auto comma2 = l1.find(',', comma1 + 1);
  CHECK(std::stod(l1.substr(comma1 + 1, comma2 - comma1 - 1)) == 0.1 + 0.2);
  CHECK(std::stod(l1.substr(comma2 + 1)) == 0.3333333333333333);
}

TEST_CASE("svg rendering") {
  // exact 1/n data lands on a straight line in log-log pixel space
  std::vector<ergodic::ConvergenceRow> rows = {{1, 1.0, 0.5}, {10, 0.1, 0.5}, {100, 0.01, 0.5}};
  std::string svg = render_convergence_svg(rows);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("grand norm of difference") != std::string::npos);

  auto key = svg.find("stroke-width=\"1.5\" points=\"");
  REQUIRE(key != std::string::npos);
  auto start = svg.find("points=\"", key) + 8;
  auto end = svg.find('"', start);
  std::istringstream pts(svg.substr(start, end - start));
  double x[3], y[3];
  char comma;
  for (int i = 0; i < 3; ++i) pts >> x[i] >> comma >> y[i];
  double slope01 = (y[1] - y[0]) / (x[1] - x[0]);
  double slope12 = (y[2] - y[1]) / (x[2] - x[1]);
  CHECK(slope01 == doctest::Approx(slope12).epsilon(1e-6));

  // zeros are clamped, not dropped
  std::vector<ergodic::ConvergenceRow> zeros = {{1, 1.0, 0.5}, {10, 0.0, 0.5}};
  CHECK(render_convergence_svg(zeros).find("polyline") != std::string::npos);

  CHECK_THROWS_AS(render_convergence_svg({{1, 1.0, 0.5}}), std::invalid_argument);
}

TEST_CASE("every repository config validates, runs, and its report re-parses") {
  for (const auto& entry : fs::directory_iterator(GRANDLUX_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    auto dir = make_temp_dir("roundtrip");
    json j;
    {
      std::ifstream in(entry.path());
      in >> j;
    }
    j["output"]["report"] = (dir / "report.json").string();
    j["output"]["csv"] = (dir / "convergence.csv").string();
    if (j["output"].contains("svg")) j["output"]["svg"] = (dir / "convergence.svg").string();

    auto cfg = ExperimentConfig::from_json(j);
    INFO("config: ", entry.path().string());
    CHECK(run_experiment(cfg) == 0);
    json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.contains("passed"));
    CHECK(rep["hypothesis_checks"]["measure_preserving"]["preserved"] == true);
    fs::remove_all(dir);
  }
}

TEST_CASE("cli exit codes and error lines") {
  auto dir = make_temp_dir("cli");
  auto config_path = fs::path(GRANDLUX_CONFIG_DIR) / "two_cycle.json";

  // exit 0 with artifacts in the working directory
  std::string out;
  int code = run_cli("verify -c '" + config_path.string() + "'", dir, &out);
  CHECK(code == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "convergence.csv"));

  // invalid theta: exit 2, machine-readable line naming the field
  code = run_cli("verify -c '" + config_path.string() + "' --theta=-1", dir, &out);
  CHECK(code == 2);
  json err = json::parse(out);
  CHECK(err["error"] == "config");
  CHECK(err["field"] == "theta");

  // exponent not T-invariant: block swap against block exponent
  spit(dir / "bad.json", R"({
    "space": {"type": "uniform_finite", "atoms": 6},
    "exponent": {"type": "sampled", "values": [2, 2, 2, 3, 3, 3]},
    "function": {"type": "sampled", "values": [1, 2, 3, 4, 5, 6]},
    "transformation": {"type": "finite_map", "map": [3, 4, 5, 0, 1, 2]},
    "theta": 1.0
  })");
  code = run_cli("verify -c '" + (dir / "bad.json").string() + "'", dir, &out);
  CHECK(code == 2);
  err = json::parse(out);
  CHECK(err["error"] == "hypothesis");
  CHECK(err["field"] == "exponent_invariant");

  // non-bijective map: rejected as non-measure-preserving
  spit(dir / "collapse.json", R"({
    "space": {"type": "uniform_finite", "atoms": 2},
    "exponent": {"type": "constant", "p": 2.0},
    "function": {"type": "sampled", "values": [1, 2]},
    "transformation": {"type": "finite_map", "map": [0, 0]},
    "theta": 1.0
  })");
  code = run_cli("verify -c '" + (dir / "collapse.json").string() + "'", dir, &out);
  CHECK(code == 2);
  err = json::parse(out);
  CHECK(err["field"] == "measure_preserving");

  // a run whose convergence check genuinely fails exits 1: the two-step
  // residual of a 4-cycle exceeds the C/n envelope
  spit(dir / "slow.json", R"({
    "space": {"type": "uniform_finite", "atoms": 4},
    "exponent": {"type": "constant", "p": 2.0},
    "function": {"type": "sampled", "values": [1, 0, 0, 0]},
    "transformation": {"type": "finite_map", "map": [1, 2, 3, 0]},
    "theta": 1.0,
    "n_schedule": [1, 2]
  })");
  code = run_cli("verify -c '" + (dir / "slow.json").string() + "'", dir, &out);
  CHECK(code == 1);
  json failed_report = json::parse(slurp(dir / "report.json"));
  CHECK(failed_report["passed"] == false);
  CHECK(failed_report["part_iii"]["ok"] == false);

  // norm subcommand emits a one-line JSON result
  auto power_path = fs::path(GRANDLUX_CONFIG_DIR) / "power_grand.json";
  code = run_cli("norm -c '" + power_path.string() + "' --eps 0.5", dir, &out);
  CHECK(code == 0);
  json nj = json::parse(out);
  CHECK(nj["luxemburg_norm"].get<double>() == doctest::Approx(2.5198420997897464).epsilon(1e-9));

  code = run_cli("grand-norm -c '" + power_path.string() + "'", dir, &out);
  CHECK(code == 0);
  json gj = json::parse(out);
  CHECK(gj["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-3));

  code = run_cli("membership -c '" + power_path.string() + "' --theta 2", dir, &out);
  CHECK(code == 0);
  json mj = json::parse(out);
  CHECK(mj["is_member"] == true);

  code = run_cli("membership -c '" + power_path.string() + "'", dir, &out);
  CHECK(code == 0);
  mj = json::parse(out);
  CHECK(mj["is_member"] == false);
  CHECK(mj["limit_estimate"].get<double>() == doctest::Approx(1.4142135623730951).epsilon(1e-6));

  fs::remove_all(dir);
}
