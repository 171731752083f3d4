#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace grandlux {

// A measurable function on a probability space. The catalog variants
// (Sampled, Power, Cosine, Indicator, Constant) are constructible from
// descriptors; Pointwise wraps derived functions such as Birkhoff averages,
// compositions with a transformation, and differences.
class FunctionRep {
 public:
  enum class Kind { Sampled, Power, Cosine, Indicator, Constant, Pointwise };

  // Evaluation near a graded mesh anchor. `side` is +1 when approaching the
  // anchor from the right (x = anchor + delta) and -1 from the left. Needed
  // so singular factors can be computed from the offset itself instead of
  // the absolute coordinate, where sub-ulp offsets would collapse.
  using NearFn = std::function<double(double anchor, double delta, int side)>;

  // Structural form |f(x)| = coef * |scale * (x - origin)|^exponent on
  // [lo, hi), with origin <= lo. Compositions of the power catalog with
  // rotations and the doubling map stay in this class, which keeps their
  // modulars on the exact closed-form path (quadrature can neither reach
  // full accuracy nor detect divergence as the shifted exponent nears -1).
  struct PowerPiece {
    double lo, hi, origin, scale, exponent;
    double coef = 1.0;
  };

  struct PointwiseSpec {
    std::function<double(double)> eval;
    NearFn eval_near;                     // optional
    std::vector<double> jump_points;      // discontinuities in (0,1)
    std::vector<double> kink_points;      // non-smooth points of f itself
    std::vector<double> zero_points;      // known sign changes (kinks of |f|^q)
    std::vector<double> singular_points;  // algebraic singularities in (0,1)
    std::vector<PowerPiece> power_pieces; // nonempty iff |f| is piecewise power
    bool bounded = true;
  };

  static FunctionRep sampled(std::vector<double> values);
  static FunctionRep power(double exponent);      // f(x) = x^a on (0,1)
  static FunctionRep cosine(int frequency);       // f(x) = cos(2 pi k x)
  static FunctionRep indicator(double lo, double hi);  // 1 on [lo,hi) subset of [0,1)
  static FunctionRep constant(double value);
  static FunctionRep pointwise(PointwiseSpec spec);

  Kind kind() const { return kind_; }

  // Finite-space evaluation at an atom index.
  double at_atom(int atom) const;
  // Interval evaluation at x in (0,1).
  double operator()(double x) const;
  // Singular-aware evaluation at anchor + side*delta.
  double near(double anchor, double delta, int side) const;

  // Mesh metadata for quadrature over this function on (0,1).
  std::vector<double> jump_points() const;
  std::vector<double> kink_points() const;
  std::vector<double> zero_points() const;
  std::vector<double> singular_points() const;
  // Nonempty when |f| is a piecewise shifted power (exact modular path).
  std::vector<PowerPiece> power_pieces() const;

  bool is_bounded() const;
  bool valid_on_finite() const { return kind_ == Kind::Sampled || kind_ == Kind::Constant; }
  bool valid_on_interval() const { return kind_ != Kind::Sampled; }
  bool matches_atom_count(int atoms) const {
    return kind_ != Kind::Sampled || static_cast<int>(samples_.size()) == atoms;
  }

  const std::vector<double>& samples() const;
  double power_exponent() const;
  int cosine_frequency() const;
  double constant_value() const;
  std::pair<double, double> indicator_bounds() const;

 private:
  FunctionRep() = default;
  Kind kind_ = Kind::Constant;
  std::vector<double> samples_;
  double a_ = 0.0;       // Power exponent
  int k_ = 0;            // Cosine frequency
  double lo_ = 0.0, hi_ = 0.0;
  double c_ = 0.0;       // Constant value
  std::shared_ptr<const PointwiseSpec> pw_;
};

// f - g for combinations the verification harness needs: two Sampled
// functions (exact), or any two interval-evaluable functions (pointwise).
FunctionRep fn_difference(const FunctionRep& f, const FunctionRep& g);

// c * f.
FunctionRep fn_scale(const FunctionRep& f, double c);

// max_i |f_i| for finite-space functions.
double sup_abs_finite(const FunctionRep& f, int atom_count);

}  // namespace grandlux
