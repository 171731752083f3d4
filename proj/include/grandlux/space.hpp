#pragma once

#include <vector>

namespace grandlux {

// Composite Gauss-Legendre settings for the unit-interval space. Panels are
// graded geometrically (width ratio `grading_ratio`) toward every anchor in
// `singular_points`; segments with no singular endpoint use uniform panels.
struct QuadratureSpec {
  int panels = 64;           // panels per mesh segment
  int nodes_per_panel = 8;   // Gauss-Legendre nodes per panel
  double grading_ratio = 0.5;
  std::vector<double> singular_points;  // points of algebraic singularity in [0,1]
};

// A probability space: either finitely many atoms with positive weights
// summing to one, or the unit interval (0,1) with Lebesgue measure and a
// quadrature recipe.
class ProbabilitySpace {
 public:
  enum class Kind { Finite, Interval };

  static ProbabilitySpace finite(std::vector<double> weights);
  static ProbabilitySpace interval(QuadratureSpec quad = QuadratureSpec{});

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }

  int atom_count() const;
  const std::vector<double>& weights() const;
  const QuadratureSpec& quadrature() const;

 private:
  ProbabilitySpace() = default;
  Kind kind_ = Kind::Finite;
  std::vector<double> weights_;
  QuadratureSpec quad_;
};

}  // namespace grandlux
