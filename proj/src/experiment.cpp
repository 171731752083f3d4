#include "grandlux/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "grandlux/svg.hpp"

namespace grandlux::experiment {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// json cannot carry non-finite numbers; divergent values serialize as "inf"
ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  return "inf";
}

const json& need(const json& j, const char* key, const std::string& field) {
  if (!j.contains(key)) {
    throw ConfigError(field, std::string("missing required key '") + key + "'");
  }
  return j.at(key);
}

std::string type_of(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "descriptor must be a JSON object");
  return need(j, "type", field).get<std::string>();
}

}  // namespace

RandomSystem make_random_system(std::uint64_t seed, int atoms) {
  if (atoms < 1) throw ConfigError("space", "random system needs at least one atom");
  std::mt19937_64 rng(seed);
  RandomSystem sys;
  const auto n = static_cast<std::size_t>(atoms);

  // shuffled atom order (Fisher-Yates)
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }

  sys.weights.assign(n, 0.0);
  sys.permutation.assign(n, 0);
  sys.exponent_values.assign(n, 0.0);
  sys.f_values.assign(n, 0.0);

  // split into cycles of length 1..6; each cycle gets one mass, one exponent
  std::vector<double> raw(n, 0.0);
  std::size_t at = 0;
  while (at < n) {
    std::size_t len = 1 + static_cast<std::size_t>(rng() % 6);
    len = std::min(len, n - at);
    const double mass = 0.5 + unit_uniform(rng);
    const double pval = 1.5 + 2.5 * unit_uniform(rng);
    const double per_atom = mass / static_cast<double>(len);
    for (std::size_t k = 0; k < len; ++k) {
      const auto a = static_cast<std::size_t>(order[at + k]);
      const auto b = static_cast<std::size_t>(order[at + (k + 1) % len]);
      raw[a] = per_atom;
      sys.permutation[a] = static_cast<int>(b);
      sys.exponent_values[a] = pval;
    }
    at += len;
  }
  double total = 0.0;
  for (double r : raw) total += r;
  for (std::size_t i = 0; i < n; ++i) sys.weights[i] = raw[i] / total;
  for (std::size_t i = 0; i < n; ++i) sys.f_values[i] = -5.0 + 10.0 * unit_uniform(rng);
  return sys;
}

ProbabilitySpace parse_space(const json& j, std::uint64_t seed) {
  const std::string type = type_of(j, "space");
  try {
    if (type == "finite") {
      return ProbabilitySpace::finite(need(j, "weights", "space").get<std::vector<double>>());
    }
    if (type == "uniform_finite") {
      int atoms = need(j, "atoms", "space").get<int>();
      if (atoms < 1) throw ConfigError("space", "atoms must be positive");
      return ProbabilitySpace::finite(
          std::vector<double>(static_cast<std::size_t>(atoms), 1.0 / atoms));
    }
    if (type == "random_finite") {
      int atoms = need(j, "atoms", "space").get<int>();
      return ProbabilitySpace::finite(make_random_system(seed, atoms).weights);
    }
    if (type == "interval") {
      QuadratureSpec q;
      if (j.contains("quadrature")) {
        const json& jq = j.at("quadrature");
        q.panels = jq.value("panels", q.panels);
        q.nodes_per_panel = jq.value("nodes_per_panel", q.nodes_per_panel);
        q.grading_ratio = jq.value("grading_ratio", q.grading_ratio);
        q.singular_points = jq.value("singular_points", q.singular_points);
      }
      return ProbabilitySpace::interval(std::move(q));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("space", e.what());
  }
  throw ConfigError("space", "unknown space type '" + type + "'");
}

Exponent parse_exponent(const json& j, const ProbabilitySpace& space, std::uint64_t seed) {
  const std::string type = type_of(j, "exponent");
  try {
    Exponent p = [&]() {
      if (type == "constant") return Exponent::constant(need(j, "p", "exponent").get<double>());
      if (type == "piecewise") {
        std::vector<Exponent::Piece> pieces;
        for (const json& jp : need(j, "pieces", "exponent")) {
          pieces.push_back({need(jp, "lo", "exponent").get<double>(),
                            need(jp, "hi", "exponent").get<double>(),
                            need(jp, "p", "exponent").get<double>()});
        }
        return Exponent::piecewise(std::move(pieces));
      }
      if (type == "sampled") {
        return Exponent::sampled(need(j, "values", "exponent").get<std::vector<double>>());
      }
      if (type == "random_blocks") {
        if (!space.is_finite()) {
          throw ConfigError("exponent", "random_blocks needs a finite space");
        }
        return Exponent::sampled(make_random_system(seed, space.atom_count()).exponent_values);
      }
      throw ConfigError("exponent", "unknown exponent type '" + type + "'");
    }();
    if (!p.valid_on(space)) throw ConfigError("exponent", "exponent not valid on this space");
    return p;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("exponent", e.what());
  }
}

FunctionRep parse_function(const json& j, const ProbabilitySpace& space, std::uint64_t seed) {
  const std::string type = type_of(j, "function");
  try {
    FunctionRep f = [&]() {
      if (type == "sampled") {
        return FunctionRep::sampled(need(j, "values", "function").get<std::vector<double>>());
      }
      if (type == "power") return FunctionRep::power(need(j, "a", "function").get<double>());
      if (type == "cosine") return FunctionRep::cosine(need(j, "k", "function").get<int>());
      if (type == "indicator") {
        return FunctionRep::indicator(need(j, "lo", "function").get<double>(),
                                      need(j, "hi", "function").get<double>());
      }
      if (type == "constant") {
        return FunctionRep::constant(need(j, "value", "function").get<double>());
      }
      if (type == "random_sampled") {
        if (!space.is_finite()) {
          throw ConfigError("function", "random_sampled needs a finite space");
        }
        return FunctionRep::sampled(make_random_system(seed, space.atom_count()).f_values);
      }
      throw ConfigError("function", "unknown function type '" + type + "'");
    }();
    if (space.is_finite() && !f.valid_on_finite()) {
      throw ConfigError("function", "function not evaluable on a finite space");
    }
    if (!space.is_finite() && !f.valid_on_interval()) {
      throw ConfigError("function", "sampled function on an interval space");
    }
    if (!space.is_finite() && f.kind() == FunctionRep::Kind::Sampled) {
      throw ConfigError("function", "sampled function on an interval space");
    }
    if (space.is_finite() && f.kind() == FunctionRep::Kind::Sampled &&
        static_cast<int>(f.samples().size()) != space.atom_count()) {
      throw ConfigError("function", "sampled values must match the atom count");
    }
    if (!space.is_finite() && f.kind() == FunctionRep::Kind::Power && f.power_exponent() < 0.0) {
      const auto& sp = space.quadrature().singular_points;
      bool registered = false;
      for (double s : sp) registered = registered || s == 0.0;
      if (!registered) {
        throw ConfigError("function",
                          "power singularity at 0 must be registered in singular_points");
      }
    }
    return f;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("function", e.what());
  }
}

dynamics::Transformation parse_transformation(const json& j, const ProbabilitySpace& space,
                                              std::uint64_t seed) {
  const std::string type = type_of(j, "transformation");
  try {
    dynamics::Transformation T = [&]() {
      if (type == "identity") return dynamics::Transformation::identity();
      if (type == "finite_map") {
        return dynamics::Transformation::finite_map(
            need(j, "map", "transformation").get<std::vector<int>>());
      }
      if (type == "rotation") {
        return dynamics::Transformation::rotation(need(j, "alpha", "transformation").get<double>(),
                                                  j.value("rational", false));
      }
      if (type == "doubling") return dynamics::Transformation::doubling();
      if (type == "random_permutation") {
        if (!space.is_finite()) {
          throw ConfigError("transformation", "random_permutation needs a finite space");
        }
        return dynamics::Transformation::finite_map(
            make_random_system(seed, space.atom_count()).permutation);
      }
      throw ConfigError("transformation", "unknown transformation type '" + type + "'");
    }();
    if (!T.valid_on(space)) {
      throw ConfigError("transformation", "transformation not valid on this space");
    }
    return T;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("transformation", e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.space = parse_space(need(j, "space", "space"), cfg.seed);
  cfg.p = parse_exponent(need(j, "exponent", "exponent"), cfg.space, cfg.seed);
  cfg.f = parse_function(need(j, "function", "function"), cfg.space, cfg.seed);
  cfg.T = parse_transformation(need(j, "transformation", "transformation"), cfg.space, cfg.seed);
  cfg.theta = j.value("theta", 1.0);
  if (!(cfg.theta > 0.0)) throw ConfigError("theta", "theta must be positive");
  if (j.contains("n_schedule")) {
    cfg.n_schedule = j.at("n_schedule").get<std::vector<long>>();
    for (std::size_t i = 0; i < cfg.n_schedule.size(); ++i) {
      if (cfg.n_schedule[i] < 1 || (i > 0 && cfg.n_schedule[i] <= cfg.n_schedule[i - 1])) {
        throw ConfigError("n_schedule", "n_schedule must be strictly increasing and positive");
      }
    }
  }
  if (j.contains("eps_grid")) {
    const json& jg = j.at("eps_grid");
    cfg.grid.geometric_points = jg.value("geometric_points", cfg.grid.geometric_points);
    cfg.grid.uniform_points = jg.value("uniform_points", cfg.grid.uniform_points);
    cfg.grid.edge_offset = jg.value("edge_offset", cfg.grid.edge_offset);
    cfg.grid.refine_tol = jg.value("refine_tol", cfg.grid.refine_tol);
    if (cfg.grid.geometric_points < 2 || cfg.grid.uniform_points < 2 ||
        !(cfg.grid.edge_offset > 0.0 && cfg.grid.edge_offset < 0.5) ||
        !(cfg.grid.refine_tol > 0.0)) {
      throw ConfigError("eps_grid", "invalid eps grid parameters");
    }
  }
  if (j.contains("output")) {
    const json& jo = j.at("output");
    cfg.report_path = jo.value("report", cfg.report_path);
    cfg.csv_path = jo.value("csv", cfg.csv_path);
    cfg.svg_path = jo.value("svg", cfg.svg_path);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

ordered_json grand_norm_to_json(const norms::GrandNormEstimate& est) {
  ordered_json j;
  j["value"] = jnum(est.value.value());
  j["argmax_eps"] = est.argmax_eps;
  j["theta"] = est.theta;
  j["grid_spec"] = est.grid_spec;
  j["sample_count"] = est.samples.size();
  return j;
}

ordered_json verdict_to_json(const norms::VanishingVerdict& verdict) {
  ordered_json j;
  j["limit_estimate"] = jnum(verdict.limit_estimate.value());
  j["is_member"] = verdict.is_member;
  j["converged"] = verdict.converged;
  ordered_json trace = ordered_json::array();
  for (const auto& [eps, v] : verdict.trace) trace.push_back({eps, jnum(v)});
  j["trace"] = std::move(trace);
  return j;
}

ordered_json report_to_json(const ergodic::TheoremReport& report) {
  ordered_json j;
  {
    ordered_json h;
    h["measure_preserving"] = {{"preserved", report.hypothesis.measure_preserving.preserved},
                               {"method", report.hypothesis.measure_preserving.method},
                               {"worst_violation", report.hypothesis.measure_preserving.worst_violation},
                               {"worst_atom", report.hypothesis.measure_preserving.worst_atom}};
    h["exponent_invariant"] = {{"invariant", report.hypothesis.exponent_invariant.invariant},
                               {"worst_violation", report.hypothesis.exponent_invariant.worst_violation},
                               {"worst_atom", report.hypothesis.exponent_invariant.worst_atom},
                               {"worst_point", report.hypothesis.exponent_invariant.worst_point}};
    j["hypothesis_checks"] = std::move(h);
  }
  j["part_i"] = {{"fav_grand_norm", jnum(report.part_i.fav_grand_norm.value())},
                 {"f_grand_norm", jnum(report.part_i.f_grand_norm.value())},
                 {"fav_argmax_eps", report.part_i.fav_argmax_eps},
                 {"f_argmax_eps", report.part_i.f_argmax_eps},
                 {"norm_contraction_ok", report.part_i.norm_contraction_ok},
                 {"finiteness_ok", report.part_i.finiteness_ok}};
  j["part_ii"] = {{"invariance_residual", report.part_ii.invariance_residual},
                  {"mean_residual", report.part_ii.mean_residual},
                  {"mean_f", report.part_ii.mean_f},
                  {"mean_fav", report.part_ii.mean_fav},
                  {"ok", report.part_ii.ok}};
  {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.contraction) {
      rows.push_back({{"eps", r.eps},
                      {"modular_fav", jnum(r.modular_fav)},
                      {"modular_f", jnum(r.modular_f)},
                      {"ok", r.ok},
                      {"informational", r.informational}});
    }
    j["contraction"] = std::move(rows);
  }
  {
    ordered_json p3;
    p3["checked"] = report.part_iii.checked;
    p3["ok"] = report.part_iii.ok;
    p3["envelope"] = jnum(report.part_iii.envelope);
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.part_iii.rows) {
      rows.push_back({{"n", r.n},
                      {"diff_grand_norm", jnum(r.diff_grand_norm)},
                      {"argmax_eps", r.argmax_eps}});
    }
    p3["rows"] = std::move(rows);
    j["part_iii"] = std::move(p3);
  }
  j["closure_member"] = verdict_to_json(report.closure_member);
  j["passed"] = report.passed;
  return j;
}

std::string convergence_csv(const std::vector<ergodic::ConvergenceRow>& rows) {
  std::string out = "n,diff_grand_norm,argmax_eps\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += fmt17(r.diff_grand_norm);
    out += ',';
    out += fmt17(r.argmax_eps);
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
  out << content;
}

void print_error_line(const std::string& kind, const std::string& field,
                      const std::string& message) {
  ordered_json j;
  j["error"] = kind;
  j["field"] = field;
  j["message"] = message;
  std::cout << j.dump() << std::endl;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
  ergodic::TheoremOptions options;
  options.theta = cfg.theta;
  options.grid = cfg.grid;
  options.n_schedule = cfg.n_schedule;
  ergodic::TheoremReport report;
  try {
    report = ergodic::verify_theorem(cfg.space, cfg.f, cfg.T, cfg.p, options);
  } catch (const ergodic::HypothesisError& e) {
    print_error_line("hypothesis", e.which(), e.what());
    return 2;
  }
  write_file(cfg.report_path, report_to_json(report).dump(2) + "\n");
  write_file(cfg.csv_path, convergence_csv(report.part_iii.rows));
  if (!cfg.svg_path.empty()) {
    write_file(cfg.svg_path, render_convergence_svg(report.part_iii.rows));
  }
  return report.passed ? 0 : 1;
}

int run_experiment(const std::string& config_path) {
  try {
    return run_experiment(ExperimentConfig::from_file(config_path));
  } catch (const ConfigError& e) {
    print_error_line("config", e.field(), e.what());
    return 2;
  }
}

}  // namespace grandlux::experiment
