#include "grandlux/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace grandlux {

ProbabilitySpace ProbabilitySpace::finite(std::vector<double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("finite space needs at least one atom");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("finite space weights must be strictly positive");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("finite space weights must sum to 1 within 1e-12, got " +
                                std::to_string(sum));
  }
  ProbabilitySpace s;
  s.kind_ = Kind::Finite;
  s.weights_ = std::move(weights);
  return s;
}

ProbabilitySpace ProbabilitySpace::interval(QuadratureSpec quad) {
  if (quad.panels < 1) throw std::invalid_argument("quadrature panels must be >= 1");
  if (quad.nodes_per_panel < 2) throw std::invalid_argument("nodes_per_panel must be >= 2");
  if (!(quad.grading_ratio > 0.0 && quad.grading_ratio < 1.0)) {
    throw std::invalid_argument("grading_ratio must lie in (0,1)");
  }
  for (double s : quad.singular_points) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument("singular points must lie in [0,1]");
    }
  }
  ProbabilitySpace s;
  s.kind_ = Kind::Interval;
  s.quad_ = std::move(quad);
  return s;
}

int ProbabilitySpace::atom_count() const {
  if (kind_ != Kind::Finite) throw std::logic_error("atom_count: not a finite space");
  return static_cast<int>(weights_.size());
}

const std::vector<double>& ProbabilitySpace::weights() const {
  if (kind_ != Kind::Finite) throw std::logic_error("weights: not a finite space");
  return weights_;
}

const QuadratureSpec& ProbabilitySpace::quadrature() const {
  if (kind_ != Kind::Interval) throw std::logic_error("quadrature: not an interval space");
  return quad_;
}

}  // namespace grandlux
