#pragma once

#include <string>
#include <utility>
#include <vector>

#include "grandlux/exponent.hpp"
#include "grandlux/extended_real.hpp"
#include "grandlux/functions.hpp"
#include "grandlux/space.hpp"

namespace grandlux::norms {

// Precomputed view of the modular rho(f/lambda) with exponent p(.) - eps.
// Finite spaces keep exact per-atom terms; interval spaces keep either the
// closed-form power pieces (pure Power integrands, where divergence is
// decided analytically) or a quadrature node table built once and reused
// across every (lambda, eps) query.
class ModularEvaluator {
 public:
  ModularEvaluator(const ProbabilitySpace& space, const FunctionRep& f, const Exponent& p);

  ExtendedReal at_scale(double lambda, double eps_shift) const;
  // True when the modular diverges for every lambda (pure-power only).
  bool always_divergent(double eps_shift) const;
  double pminus() const { return pminus_; }
  bool is_zero() const;  // f vanishes (a.e.) on the space

 private:
  enum class Path { FiniteAtoms, PowerPieces, NodeTable } path_;
  double pminus_, pplus_;
  // FiniteAtoms / NodeTable: per-term weight, |f| value and exponent.
  std::vector<double> w_, absf_, pexp_;
  // PowerPieces: |f| = coef * |scale (x - origin)|^a with constant p per piece.
  struct Piece {
    double lo, hi, origin, scale, a, coef, p;
  };
  std::vector<Piece> pieces_;
};

// rho_{p(.) - eps}(f): the modular integral; +inf when divergent.
ExtendedReal modular(const ProbabilitySpace& space, const FunctionRep& f, const Exponent& p,
                     double eps_shift = 0.0);

// Luxemburg norm of f in L^{p(.) - eps}: inf{lambda > 0 : rho(f/lambda) <= 1},
// located by doubling/halving from lambda = 1 and bisection to relative
// width rel_tol. 0 when the modular vanishes, +inf when it diverges for
// every lambda.
ExtendedReal luxemburg_norm(const ProbabilitySpace& space, const FunctionRep& f, const Exponent& p,
                            double eps_shift = 0.0, double rel_tol = 1e-10);
ExtendedReal luxemburg_norm(const ModularEvaluator& ev, double eps_shift = 0.0,
                            double rel_tol = 1e-10);

// eps^(theta / (pminus - eps)) for eps in (0, pminus - 1).
double grand_weight(double eps, double pminus, double theta);

struct GrandGridSpec {
  int geometric_points = 64;
  int uniform_points = 64;
  double edge_offset = 1e-6;  // relative inset from both ends of (0, p- - 1)
  double refine_tol = 1e-8;   // golden-section bracket width target
};

struct GrandNormSample {
  double eps;
  double weight;
  double shifted_norm;  // may be +inf
  double product;       // weight * shifted_norm
};

struct GrandNormEstimate {
  ExtendedReal value;  // max over samples; a lower bound for the true sup
  double argmax_eps = 0.0;
  std::vector<GrandNormSample> samples;
  double theta = 0.0;
  std::string grid_spec;
};

// sup over eps in (0, p- - 1) of grand_weight(eps) * ||f||_{p(.)-eps},
// approximated on a geometric+uniform grid and refined by golden section
// around the best grid point. The eps sweep runs as a parallel kernel;
// the final reduction is an exact max, so results do not depend on the
// execution mode.
GrandNormEstimate grand_norm(const ProbabilitySpace& space, const FunctionRep& f,
                             const Exponent& p, double theta,
                             const GrandGridSpec& grid = GrandGridSpec{});

struct VanishingVerdict {
  ExtendedReal limit_estimate;
  bool is_member = false;
  bool converged = false;
  std::vector<std::pair<double, double>> trace;  // (eps, weighted shifted norm)
};

inline constexpr double kMembershipTol = 1e-6;

// Limit of grand_weight(eps) * ||f||_{p(.)-eps} as eps -> 0 along the given
// sequence (default: (p- - 1) * 2^-k / 2 for k = 1..40). A plateau of the
// last three values (within 10%) reports that value; a steady geometric
// decay extrapolates to 0; anything else is flagged as non-convergent.
VanishingVerdict vanishing_limit(const ProbabilitySpace& space, const FunctionRep& f,
                                 const Exponent& p, double theta,
                                 std::vector<double> eps_sequence = {});

}  // namespace grandlux::norms
