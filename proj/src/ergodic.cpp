#include "grandlux/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grandlux/exec.hpp"
#include "grandlux/integrate.hpp"

namespace grandlux::ergodic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_hypotheses(const ProbabilitySpace& space, const dynamics::Transformation& T,
                        const Exponent& p) {
  auto mp = dynamics::check_measure_preserving(T, space);
  if (!mp.preserved) {
    throw HypothesisError("measure_preserving",
                          "transformation is not measure-preserving (worst atom " +
                              std::to_string(mp.worst_atom) + ", violation " +
                              std::to_string(mp.worst_violation) + ")");
  }
  auto inv = dynamics::check_exponent_invariant(T, p, space);
  if (!inv.invariant) {
    throw HypothesisError("exponent_invariant",
                          "exponent is not T-invariant (violation " +
                              std::to_string(inv.worst_violation) + ")");
  }
}

}  // namespace

std::vector<long> default_schedule() {
  std::vector<long> s;
  for (long n = 1; n <= (1L << 14); n *= 2) s.push_back(n);
  return s;
}

PartI verify_pointwise_limit(const ProbabilitySpace& space, const FunctionRep& f,
                             const dynamics::Transformation& T, const Exponent& p, double theta,
                             const norms::GrandGridSpec& grid) {
  require_hypotheses(space, T, p);
  auto fav = dynamics::exact_limit_average(space, f, T);
  auto nf = norms::grand_norm(space, f, p, theta, grid);
  auto nfav = norms::grand_norm(space, fav.rep, p, theta, grid);
  PartI out;
  out.fav_grand_norm = nfav.value;
  out.f_grand_norm = nf.value;
  out.fav_argmax_eps = nfav.argmax_eps;
  out.f_argmax_eps = nf.argmax_eps;
  out.finiteness_ok = !nf.value.is_finite() || nfav.value.is_finite();
  out.norm_contraction_ok =
      !nf.value.is_finite() || nfav.value <= ExtendedReal(nf.value.value() + 1e-8);
  return out;
}

PartII verify_invariance(const ProbabilitySpace& space, const FunctionRep& f,
                         const dynamics::Transformation& T, [[maybe_unused]] const Exponent& p,
                         double tol_finite, double tol_interval) {
  auto fav = dynamics::exact_limit_average(space, f, T);
  PartII out;
  if (space.is_finite()) {
    for (int i = 0; i < space.atom_count(); ++i) {
      double v = std::fabs(fav.rep.at_atom(dynamics::apply_map(T, space, i)) - fav.rep.at_atom(i));
      out.invariance_residual = std::max(out.invariance_residual, v);
    }
  } else {
    auto nodes = build_mesh(space.quadrature(), anchors_for(fav.rep));
    for (const auto& q : nodes) {
      double v = std::fabs(fav.rep(dynamics::apply_map(T, space, q.x)) - fav.rep(q.x));
      out.invariance_residual = std::max(out.invariance_residual, v);
    }
  }
  out.mean_f = integrate(space, f).value();
  out.mean_fav = integrate(space, fav.rep).value();
  out.mean_residual = std::fabs(out.mean_fav - out.mean_f);
  const double tol = space.is_finite() ? tol_finite : tol_interval;
  out.ok = out.invariance_residual <= tol && out.mean_residual <= tol;
  return out;
}

std::vector<ContractionRow> verify_modular_contraction(const ProbabilitySpace& space,
                                                       const FunctionRep& f,
                                                       const dynamics::Transformation& T,
                                                       const Exponent& p,
                                                       std::vector<double> eps_grid, double tol) {
  auto fav = dynamics::exact_limit_average(space, f, T);
  const double width = p.pminus() - 1.0;
  if (eps_grid.empty()) {
    for (int k = 1; k <= 50; ++k) eps_grid.push_back(width * k / 51.0);
  }
  norms::ModularEvaluator ev_f(space, f, p);
  norms::ModularEvaluator ev_fav(space, fav.rep, p);

  std::vector<ContractionRow> rows(eps_grid.size() + 1);
  // eps = 0 boundary probe: informational only, the grand range is open
  rows[0].eps = 0.0;
  rows[0].informational = true;
  rows[0].modular_fav = ev_fav.at_scale(1.0, 0.0).value();
  rows[0].modular_f = ev_f.at_scale(1.0, 0.0).value();
  rows[0].ok = true;
  exec::for_index_capture(eps_grid.size(), [&](std::size_t i) {
    ContractionRow& r = rows[i + 1];
    r.eps = eps_grid[i];
    r.informational = false;
    r.modular_fav = ev_fav.at_scale(1.0, r.eps).value();
    r.modular_f = ev_f.at_scale(1.0, r.eps).value();
    r.ok = !(r.modular_fav > r.modular_f + tol);
  });
  return rows;
}

ConvergencePart verify_norm_convergence(const ProbabilitySpace& space, const FunctionRep& f,
                                        const dynamics::Transformation& T, const Exponent& p,
                                        double theta, std::vector<long> n_schedule,
                                        const norms::VanishingVerdict& membership,
                                        const norms::GrandGridSpec& grid) {
  if (n_schedule.empty()) n_schedule = default_schedule();
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 1 || (i > 0 && n_schedule[i] <= n_schedule[i - 1])) {
      throw std::invalid_argument("n schedule must be strictly increasing and positive");
    }
  }
  auto fav = dynamics::exact_limit_average(space, f, T);

  ConvergencePart out;
  out.rows.resize(n_schedule.size());
  // Each n is independent; grand_norm runs its own eps sweep inside.
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    auto diff = fn_difference(fav.rep, dynamics::birkhoff_average(space, f, T, n_schedule[i]));
    auto est = norms::grand_norm(space, diff, p, theta, grid);
    out.rows[i] = {n_schedule[i], est.value.value(), est.argmax_eps};
  }

  out.checked = membership.converged && membership.is_member;
  if (out.checked && !out.rows.empty()) {
    const double first = out.rows.front().diff_grand_norm;
    const double last = out.rows.back().diff_grand_norm;
    out.envelope =
        std::max(1e-6, std::isfinite(first)
                           ? first / static_cast<double>(out.rows.back().n)
                           : kInf);
    out.ok = last <= out.envelope;
  }
  return out;
}

TheoremReport verify_theorem(const ProbabilitySpace& space, const FunctionRep& f,
                             const dynamics::Transformation& T, const Exponent& p,
                             const TheoremOptions& options) {
  TheoremReport rep;
  rep.hypothesis.measure_preserving = dynamics::check_measure_preserving(T, space);
  rep.hypothesis.exponent_invariant = dynamics::check_exponent_invariant(T, p, space);
  if (!rep.hypothesis.ok()) {
    if (!rep.hypothesis.measure_preserving.preserved) {
      throw HypothesisError("measure_preserving", "transformation is not measure-preserving");
    }
    throw HypothesisError("exponent_invariant", "exponent is not T-invariant");
  }

  rep.part_i = verify_pointwise_limit(space, f, T, p, options.theta, options.grid);
  rep.part_ii = verify_invariance(space, f, T, p, options.residual_tol_finite,
                                  options.residual_tol_interval);

  std::vector<double> eps_grid;
  const double width = p.pminus() - 1.0;
  for (int k = 1; k <= options.contraction_points; ++k) {
    eps_grid.push_back(width * k / (options.contraction_points + 1.0));
  }
  rep.contraction =
      verify_modular_contraction(space, f, T, p, std::move(eps_grid), options.contraction_tol);

  rep.closure_member = norms::vanishing_limit(space, f, p, options.theta);
  rep.part_iii = verify_norm_convergence(space, f, T, p, options.theta, options.n_schedule,
                                         rep.closure_member, options.grid);

  bool contraction_ok = true;
  for (const auto& r : rep.contraction) {
    if (!r.informational && !r.ok) contraction_ok = false;
  }
  rep.passed = rep.part_i.norm_contraction_ok && rep.part_i.finiteness_ok && rep.part_ii.ok &&
               contraction_ok && (!rep.part_iii.checked || rep.part_iii.ok);
  return rep;
}

}  // namespace grandlux::ergodic
