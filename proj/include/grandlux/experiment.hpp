#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "grandlux/dynamics.hpp"
#include "grandlux/ergodic.hpp"
#include "grandlux/exponent.hpp"
#include "grandlux/functions.hpp"
#include "grandlux/norms.hpp"
#include "grandlux/space.hpp"

namespace grandlux::experiment {

// Config/descriptor validation failure; `field` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A seeded finite system whose permutation preserves the weights (weights
// are constant along cycles) and whose exponent is constant on each cycle,
// hence T-invariant. The space, transformation, exponent and function
// descriptors of type random_* draw from the same seed and therefore fit
// together.
struct RandomSystem {
  std::vector<double> weights;
  std::vector<int> permutation;
  std::vector<double> exponent_values;  // in [1.5, 4], constant per cycle
  std::vector<double> f_values;         // in [-5, 5]
};

RandomSystem make_random_system(std::uint64_t seed, int atoms);

struct ExperimentConfig {
  ProbabilitySpace space = ProbabilitySpace::interval();
  Exponent p = Exponent::constant(2.0);
  FunctionRep f = FunctionRep::constant(0.0);
  dynamics::Transformation T = dynamics::Transformation::identity();
  double theta = 1.0;
  std::vector<long> n_schedule;  // empty = default doubling schedule
  norms::GrandGridSpec grid{};
  std::uint64_t seed = 0;
  std::string report_path = "report.json";
  std::string csv_path = "convergence.csv";
  std::string svg_path;  // empty = no plot

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
};

// Descriptor parsers, shared by all subcommands.
ProbabilitySpace parse_space(const nlohmann::json& j, std::uint64_t seed);
Exponent parse_exponent(const nlohmann::json& j, const ProbabilitySpace& space,
                        std::uint64_t seed);
FunctionRep parse_function(const nlohmann::json& j, const ProbabilitySpace& space,
                           std::uint64_t seed);
dynamics::Transformation parse_transformation(const nlohmann::json& j,
                                              const ProbabilitySpace& space, std::uint64_t seed);

// Runs the full theorem experiment and writes report.json, convergence.csv
// and optionally convergence.svg. Returns 0 when every check passes, 1 on a
// theorem-check violation, 2 on a config or hypothesis error (after
// printing a single-line machine-readable description to stdout).
int run_experiment(const ExperimentConfig& cfg);
int run_experiment(const std::string& config_path);

nlohmann::ordered_json report_to_json(const ergodic::TheoremReport& report);
nlohmann::ordered_json grand_norm_to_json(const norms::GrandNormEstimate& est);
nlohmann::ordered_json verdict_to_json(const norms::VanishingVerdict& verdict);

// CSV with header n,diff_grand_norm,argmax_eps; 17 significant digits.
std::string convergence_csv(const std::vector<ergodic::ConvergenceRow>& rows);

}  // namespace grandlux::experiment
