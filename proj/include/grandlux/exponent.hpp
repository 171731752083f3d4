#pragma once

#include <utility>
#include <vector>

#include "grandlux/space.hpp"

namespace grandlux {

// A variable exponent p(.) with cached essential bounds. The grand-norm
// machinery needs the range (0, p- - 1) nonempty, so p- > 1 is enforced
// at construction.
class Exponent {
 public:
  enum class Kind { Constant, PiecewiseConstant, Sampled };

  struct Piece {
    double lo, hi, p;
  };

  static Exponent constant(double p);
  static Exponent piecewise(std::vector<Piece> pieces);  // pieces partition [0,1)
  static Exponent sampled(std::vector<double> values);   // finite spaces

  Kind kind() const { return kind_; }
  double pminus() const { return pminus_; }
  double pplus() const { return pplus_; }

  double at_atom(int atom) const;
  double operator()(double x) const;

  // Interior piece boundaries, used as mesh anchors on interval spaces.
  std::vector<double> breakpoints() const;

  bool valid_on(const ProbabilitySpace& space) const;
  const std::vector<double>& values() const;
  const std::vector<Piece>& pieces() const;

 private:
  Exponent() = default;
  Kind kind_ = Kind::Constant;
  double pminus_ = 0.0, pplus_ = 0.0;
  std::vector<double> values_;
  std::vector<Piece> pieces_;
  double p_ = 0.0;
};

// Essential bounds of p over the given space (min/max over atoms of positive
// weight, or over pieces of positive length).
std::pair<double, double> exponent_bounds(const Exponent& p, const ProbabilitySpace& space);

}  // namespace grandlux
