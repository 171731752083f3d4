#include "grandlux/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "grandlux/exec.hpp"
#include "grandlux/integrate.hpp"

namespace grandlux::norms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambdaLimit = 8.98846567431158e307;  // 2^1023
constexpr int kBisectionCap = 200;

void check_eps(double eps, double pminus, bool allow_zero) {
  if (eps == 0.0 && allow_zero) return;
  if (!(eps > 0.0 && eps < pminus - 1.0)) {
    throw std::invalid_argument("eps shift must lie in (0, p- - 1), got " + std::to_string(eps));
  }
}

}  // namespace

ModularEvaluator::ModularEvaluator(const ProbabilitySpace& space, const FunctionRep& f,
                                   const Exponent& p) {
  if (!p.valid_on(space)) throw std::invalid_argument("exponent not valid on this space");
  pminus_ = p.pminus();
  pplus_ = p.pplus();
  if (space.is_finite()) {
    if (!f.valid_on_finite() || !f.matches_atom_count(space.atom_count())) {
      throw std::invalid_argument("function not evaluable on a finite space");
    }
    path_ = Path::FiniteAtoms;
    const int n = space.atom_count();
    w_.resize(static_cast<std::size_t>(n));
    absf_.resize(static_cast<std::size_t>(n));
    pexp_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto iu = static_cast<std::size_t>(i);
      w_[iu] = space.weights()[iu];
      absf_[iu] = std::fabs(f.at_atom(i));
      pexp_[iu] = p.at_atom(i);
    }
    return;
  }
  if (!f.valid_on_interval()) {
    throw std::invalid_argument("sampled function on an interval space");
  }
  if (auto fpieces = f.power_pieces(); !fpieces.empty()) {
    path_ = Path::PowerPieces;
    std::vector<Exponent::Piece> ppieces;
    if (p.kind() == Exponent::Kind::PiecewiseConstant) {
      ppieces = p.pieces();
    } else {
      ppieces = {{0.0, 1.0, p.pminus()}};
    }
    for (const auto& fp : fpieces) {
      if (!(fp.origin <= fp.lo) || fp.scale == 0.0 || fp.coef < 0.0) {
        throw std::invalid_argument("invalid power piece");
      }
      for (const auto& pp : ppieces) {
        const double lo = std::max(fp.lo, pp.lo);
        const double hi = std::min(fp.hi, pp.hi);
        if (hi > lo) pieces_.push_back({lo, hi, fp.origin, fp.scale, fp.exponent, fp.coef, pp.p});
      }
    }
    return;
  }
  path_ = Path::NodeTable;
  auto anchors = anchors_for(f);
  for (double z : f.zero_points()) anchors.push_back({z, AnchorGrade::Kink});
  for (double b : p.breakpoints()) anchors.push_back({b, AnchorGrade::None});
  auto nodes = build_mesh(space.quadrature(), anchors);
  auto values = evaluate_at_nodes(nodes, f);
  w_.resize(nodes.size());
  absf_.resize(nodes.size());
  pexp_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    w_[i] = nodes[i].w;
    absf_[i] = std::fabs(values[i]);
    pexp_[i] = p(nodes[i].x);
  }
}

ExtendedReal ModularEvaluator::at_scale(double lambda, double eps_shift) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("modular scale must be positive");
  if (path_ == Path::PowerPieces) {
    ExtendedReal acc = 0.0;
    for (const auto& pc : pieces_) {
      if (pc.coef == 0.0) continue;
      const double q = pc.p - eps_shift;
      const double c = pc.a * q;
      ExtendedReal base = power_piece_integral(c, pc.lo - pc.origin, pc.hi - pc.origin);
      if (!base.is_finite()) return ExtendedReal::infinity();
      acc = acc + base.value() * std::pow(std::fabs(pc.scale), c) *
                      std::pow(pc.coef / lambda, q);
    }
    return acc;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (absf_[i] == 0.0) continue;
    acc += w_[i] * std::pow(absf_[i] / lambda, pexp_[i] - eps_shift);
    if (acc == kInf) return ExtendedReal::infinity();
  }
  return acc;
}

bool ModularEvaluator::always_divergent(double eps_shift) const {
  if (path_ != Path::PowerPieces) return false;
  for (const auto& pc : pieces_) {
    if (pc.coef > 0.0 && pc.lo - pc.origin == 0.0 && pc.a * (pc.p - eps_shift) <= -1.0) {
      return true;
    }
  }
  return false;
}

bool ModularEvaluator::is_zero() const {
  if (path_ == Path::PowerPieces) {
    for (const auto& pc : pieces_) {
      if (pc.coef != 0.0) return false;
    }
    return true;
  }
  for (double v : absf_) {
    if (v != 0.0) return false;
  }
  return true;
}

ExtendedReal modular(const ProbabilitySpace& space, const FunctionRep& f, const Exponent& p,
                     double eps_shift) {
  check_eps(eps_shift, p.pminus(), /*allow_zero=*/true);
  return ModularEvaluator(space, f, p).at_scale(1.0, eps_shift);
}

ExtendedReal luxemburg_norm(const ModularEvaluator& ev, double eps_shift, double rel_tol) {
  check_eps(eps_shift, ev.pminus(), /*allow_zero=*/true);
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
    throw std::invalid_argument("luxemburg rel_tol must lie in (0, 1e-3]");
  }
  if (ev.is_zero()) return 0.0;
  if (ev.always_divergent(eps_shift)) return ExtendedReal::infinity();

  // Bracket the root of rho(f/lambda) = 1 by doubling/halving from 1.
  double lo = 1.0, hi = 1.0;
  ExtendedReal at_one = ev.at_scale(1.0, eps_shift);
  if (at_one == ExtendedReal(1.0)) return 1.0;
  if (at_one.value() == 0.0) return 0.0;  // zero modular at finite scale: zero function
  if (at_one > ExtendedReal(1.0)) {
    while (ev.at_scale(hi, eps_shift) > ExtendedReal(1.0)) {
      hi *= 2.0;
      if (hi > kLambdaLimit) {
        throw std::runtime_error("luxemburg norm: bracketing exceeded 2^1023");
      }
    }
    lo = hi / 2.0;
  } else {
    while (ev.at_scale(lo, eps_shift) < ExtendedReal(1.0)) {
      lo /= 2.0;
      if (lo < 1.0 / kLambdaLimit) {
        throw std::runtime_error("luxemburg norm: bracketing exceeded 2^-1023");
      }
    }
    hi = lo * 2.0;
  }

  int iters = 0;
  while (hi - lo > rel_tol * hi) {
    if (++iters > kBisectionCap) {
      throw std::runtime_error("luxemburg norm: bisection iteration cap reached");
    }
    double mid = 0.5 * (lo + hi);
    if (ev.at_scale(mid, eps_shift) > ExtendedReal(1.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ExtendedReal luxemburg_norm(const ProbabilitySpace& space, const FunctionRep& f, const Exponent& p,
                            double eps_shift, double rel_tol) {
  return luxemburg_norm(ModularEvaluator(space, f, p), eps_shift, rel_tol);
}

double grand_weight(double eps, double pminus, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (!(eps > 0.0 && eps < pminus - 1.0)) {
    throw std::invalid_argument("grand weight: eps must lie in (0, p- - 1)");
  }
  return std::pow(eps, theta / (pminus - eps));
}

namespace {

struct ProductEval {
  double eps, weight, norm, product;
};

ProductEval eval_product(const ModularEvaluator& ev, double eps, double theta) {
  double w = grand_weight(eps, ev.pminus(), theta);
  ExtendedReal nu = luxemburg_norm(ev, eps);
  double n = nu.value();
  return {eps, w, n, std::isfinite(n) ? w * n : kInf};
}

}  // namespace

GrandNormEstimate grand_norm(const ProbabilitySpace& space, const FunctionRep& f,
                             const Exponent& p, double theta, const GrandGridSpec& grid) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (grid.geometric_points < 2 || grid.uniform_points < 2) {
    throw std::invalid_argument("grand grid needs at least 2 points per family");
  }
  ModularEvaluator ev(space, f, p);
  const double width = ev.pminus() - 1.0;
  const double lo_eps = grid.edge_offset * width;
  const double hi_eps = (1.0 - grid.edge_offset) * width;

  std::vector<double> eps_grid;
  eps_grid.reserve(static_cast<std::size_t>(grid.geometric_points + grid.uniform_points));
  const double ratio = std::pow(hi_eps / lo_eps, 1.0 / (grid.geometric_points - 1));
  for (int k = 0; k < grid.geometric_points; ++k) {
    eps_grid.push_back(lo_eps * std::pow(ratio, k));
  }
  for (int k = 0; k < grid.uniform_points; ++k) {
    eps_grid.push_back(lo_eps + (hi_eps - lo_eps) * k / (grid.uniform_points - 1));
  }
  std::sort(eps_grid.begin(), eps_grid.end());
  eps_grid.erase(std::unique(eps_grid.begin(), eps_grid.end(),
                             [&](double x, double y) { return y - x < 1e-12 * width; }),
                 eps_grid.end());

  GrandNormEstimate out;
  out.theta = theta;
  {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "geometric%d+uniform%d on (0,p--1) inset %g, golden refine to %g",
                  grid.geometric_points, grid.uniform_points, grid.edge_offset, grid.refine_tol);
    out.grid_spec = buf;
  }
  out.samples.resize(eps_grid.size());

  // Independent eps slots; exact max reduction below keeps this
  // deterministic under any execution mode.
  exec::for_index_capture(eps_grid.size(), [&](std::size_t i) {
    ProductEval pe = eval_product(ev, eps_grid[i], theta);
    out.samples[i] = {pe.eps, pe.weight, pe.norm, pe.product};
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    if (out.samples[i].product > out.samples[best].product) best = i;
  }
  double best_product = out.samples[best].product;
  double best_eps = out.samples[best].eps;
  if (best_product == kInf) {
    out.value = ExtendedReal::infinity();
    out.argmax_eps = best_eps;
    return out;
  }

  // Golden-section refinement around the best grid point.
  double a = best > 0 ? out.samples[best - 1].eps : out.samples[best].eps;
  double b = best + 1 < out.samples.size() ? out.samples[best + 1].eps : out.samples[best].eps;
  constexpr double kGolden = 0.6180339887498949;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  ProductEval f1 = eval_product(ev, x1, theta);
  ProductEval f2 = eval_product(ev, x2, theta);
  out.samples.push_back({f1.eps, f1.weight, f1.norm, f1.product});
  out.samples.push_back({f2.eps, f2.weight, f2.norm, f2.product});
  if (f1.product > best_product) {
    best_product = f1.product;
    best_eps = f1.eps;
  }
  if (f2.product > best_product) {
    best_product = f2.product;
    best_eps = f2.eps;
  }
  while (b - a > grid.refine_tol) {
    if (f1.product >= f2.product) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = eval_product(ev, x1, theta);
      out.samples.push_back({f1.eps, f1.weight, f1.norm, f1.product});
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = eval_product(ev, x2, theta);
      out.samples.push_back({f2.eps, f2.weight, f2.norm, f2.product});
    }
    if (f1.product > best_product) {
      best_product = f1.product;
      best_eps = f1.eps;
    }
    if (f2.product > best_product) {
      best_product = f2.product;
      best_eps = f2.eps;
    }
  }

  out.value = best_product;
  out.argmax_eps = best_eps;
  return out;
}

VanishingVerdict vanishing_limit(const ProbabilitySpace& space, const FunctionRep& f,
                                 const Exponent& p, double theta,
                                 std::vector<double> eps_sequence) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  ModularEvaluator ev(space, f, p);
  const double width = ev.pminus() - 1.0;
  if (eps_sequence.empty()) {
    for (int k = 1; k <= 40; ++k) {
      eps_sequence.push_back(width * std::pow(2.0, -k) / 2.0);
    }
  }
  if (eps_sequence.size() < 3) {
    throw std::invalid_argument("vanishing limit needs at least 3 eps values");
  }
  for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
    check_eps(eps_sequence[i], ev.pminus(), /*allow_zero=*/false);
    if (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1])) {
      throw std::invalid_argument("eps sequence must decrease strictly toward 0");
    }
  }

  VanishingVerdict out;
  out.trace.resize(eps_sequence.size());
  exec::for_index_capture(eps_sequence.size(), [&](std::size_t i) {
    ProductEval pe = eval_product(ev, eps_sequence[i], theta);
    out.trace[i] = {pe.eps, pe.product};
  });

  const std::size_t m = out.trace.size() - 1;
  const double v0 = out.trace[m - 2].second;
  const double v1 = out.trace[m - 1].second;
  const double v2 = out.trace[m].second;
  if (!std::isfinite(v0) || !std::isfinite(v1) || !std::isfinite(v2)) {
    // shifted norms only grow as eps decreases, so an infinite tail means
    // genuine divergence
    out.limit_estimate = ExtendedReal::infinity();
    out.converged = true;
    out.is_member = false;
    return out;
  }
  const double top = std::max({v0, v1, v2});
  const double bottom = std::min({v0, v1, v2});
  if (top - bottom <= 0.10 * top || top == 0.0) {
    out.converged = true;
    out.limit_estimate = v2;
  } else if (v2 < v1 && v1 < v0 && v2 <= 0.81 * v0) {
    // steady geometric decay: the tail extrapolates to 0
    out.converged = true;
    out.limit_estimate = 0.0;
  } else {
    out.converged = false;
    out.limit_estimate = v2;
  }
  out.is_member = out.limit_estimate <= ExtendedReal(kMembershipTol);
  return out;
}

}  // namespace grandlux::norms
