#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grandlux/experiment.hpp"
#include "grandlux/norms.hpp"

namespace {

using grandlux::experiment::ConfigError;
using grandlux::experiment::ExperimentConfig;
using nlohmann::json;
using nlohmann::ordered_json;

struct Overrides {
  std::string config_path;
  double theta = 0.0;
  bool theta_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string space_json, exponent_json, function_json, transformation_json;
  std::string schedule;
  std::string report_path, csv_path, svg_path;
  double eps = 0.0;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("-c,--config", ov.config_path, "experiment config file (JSON)")->required();
  cmd->add_option("--theta", ov.theta, "override theta")->each([&](const std::string&) {
    ov.theta_set = true;
  });
  cmd->add_option("--seed", ov.seed, "override seed")->each([&](const std::string&) {
    ov.seed_set = true;
  });
  cmd->add_option("--space", ov.space_json, "override the space descriptor (inline JSON)");
  cmd->add_option("--exponent", ov.exponent_json, "override the exponent descriptor (inline JSON)");
  cmd->add_option("--function", ov.function_json, "override the function descriptor (inline JSON)");
  cmd->add_option("--transformation", ov.transformation_json,
                  "override the transformation descriptor (inline JSON)");
}

json inline_json(const std::string& text, const std::string& field) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(field, std::string("inline descriptor is not valid JSON: ") + e.what());
  }
}

json load_merged(const Overrides& ov) {
  std::ifstream in(ov.config_path);
  if (!in) throw ConfigError("config", "cannot open config file '" + ov.config_path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("config is not valid JSON: ") + e.what());
  }
  if (ov.theta_set) j["theta"] = ov.theta;
  if (ov.seed_set) j["seed"] = ov.seed;
  if (!ov.space_json.empty()) j["space"] = inline_json(ov.space_json, "space");
  if (!ov.exponent_json.empty()) j["exponent"] = inline_json(ov.exponent_json, "exponent");
  if (!ov.function_json.empty()) j["function"] = inline_json(ov.function_json, "function");
  if (!ov.transformation_json.empty()) {
    j["transformation"] = inline_json(ov.transformation_json, "transformation");
  }
  if (!ov.schedule.empty()) {
    std::vector<long> ns;
    std::string cur;
    for (char ch : ov.schedule + ",") {
      if (ch == ',') {
        if (!cur.empty()) ns.push_back(std::stol(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    j["n_schedule"] = ns;
  }
  if (!ov.report_path.empty()) j["output"]["report"] = ov.report_path;
  if (!ov.csv_path.empty()) j["output"]["csv"] = ov.csv_path;
  if (!ov.svg_path.empty()) j["output"]["svg"] = ov.svg_path;
  return j;
}

void print_config_error(const ConfigError& e) {
  ordered_json out;
  out["error"] = "config";
  out["field"] = e.field();
  out["message"] = e.what();
  std::cout << out.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "grandlux: variable-exponent and grand Lebesgue norms, Birkhoff averages,\n"
      "and an ergodic-average verification harness on probability spaces"};
  app.require_subcommand(1);

  Overrides ov;

  auto* norm_cmd = app.add_subcommand("norm", "Luxemburg norm of the configured function");
  add_common(norm_cmd, ov);
  norm_cmd->add_option("--eps", ov.eps, "exponent shift eps in [0, p- - 1)");

  auto* grand_cmd = app.add_subcommand("grand-norm", "grand norm estimate (sup over eps)");
  add_common(grand_cmd, ov);

  auto* member_cmd =
      app.add_subcommand("membership", "vanishing-limit closure membership verdict");
  add_common(member_cmd, ov);

  auto* verify_cmd =
      app.add_subcommand("verify", "run the full ergodic-theorem verification experiment");
  add_common(verify_cmd, ov);
  verify_cmd->add_option("--schedule", ov.schedule, "comma-separated n schedule, e.g. 3,6,9");
  verify_cmd->add_option("--report", ov.report_path, "report.json output path");
  verify_cmd->add_option("--csv", ov.csv_path, "convergence.csv output path");
  verify_cmd->add_option("--svg", ov.svg_path, "convergence.svg output path");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = ExperimentConfig::from_json(load_merged(ov));
    if (norm_cmd->parsed()) {
      auto value = grandlux::norms::luxemburg_norm(cfg.space, cfg.f, cfg.p, ov.eps);
      ordered_json out;
      out["eps"] = ov.eps;
      out["luxemburg_norm"] =
          value.is_finite() ? ordered_json(value.value()) : ordered_json("inf");
      std::cout << out.dump() << std::endl;
      return 0;
    }
    if (grand_cmd->parsed()) {
      auto est = grandlux::norms::grand_norm(cfg.space, cfg.f, cfg.p, cfg.theta, cfg.grid);
      std::cout << grandlux::experiment::grand_norm_to_json(est).dump() << std::endl;
      return 0;
    }
    if (member_cmd->parsed()) {
      auto verdict = grandlux::norms::vanishing_limit(cfg.space, cfg.f, cfg.p, cfg.theta);
      std::cout << grandlux::experiment::verdict_to_json(verdict).dump() << std::endl;
      return 0;
    }
    return grandlux::experiment::run_experiment(cfg);
  } catch (const ConfigError& e) {
    print_config_error(e);
    return 2;
  } catch (const std::exception& e) {
    ordered_json out;
    out["error"] = "runtime";
    out["field"] = "";
    out["message"] = e.what();
    std::cout << out.dump() << std::endl;
    return 2;
  }
}
