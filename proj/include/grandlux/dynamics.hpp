#pragma once

#include <string>
#include <vector>

#include "grandlux/exponent.hpp"
#include "grandlux/functions.hpp"
#include "grandlux/space.hpp"

namespace grandlux::dynamics {

// A measure-preserving transformation candidate: the identity, an index map
// on a finite space, x + alpha mod 1, or 2x mod 1.
class Transformation {
 public:
  enum class Kind { Identity, FiniteMap, Rotation, Doubling };

  static Transformation identity();
  static Transformation finite_map(std::vector<int> image);
  // Whether alpha is rational is declared by the caller, not detected.
  static Transformation rotation(double alpha, bool rational = false);
  static Transformation doubling();

  Kind kind() const { return kind_; }
  const std::vector<int>& image() const;
  double alpha() const;
  bool rational_alpha() const;
  bool valid_on(const ProbabilitySpace& space) const;

 private:
  Transformation() = default;
  Kind kind_ = Kind::Identity;
  std::vector<int> image_;
  double alpha_ = 0.0;
  bool rational_ = false;
};

int apply_map(const Transformation& T, const ProbabilitySpace& space, int atom);
double apply_map(const Transformation& T, const ProbabilitySpace& space, double x);

struct PreservationReport {
  bool preserved = false;
  std::string method;       // "atom mass balance", "analytic", "identity"
  double worst_violation = 0.0;
  int worst_atom = -1;
};

// Finite maps: checks sum of weights over each preimage against the target
// weight. Rotation and doubling preserve Lebesgue measure analytically.
PreservationReport check_measure_preserving(const Transformation& T,
                                            const ProbabilitySpace& space, double tol = 1e-12);

struct ExponentInvarianceReport {
  bool invariant = false;
  double worst_violation = 0.0;
  int worst_atom = -1;       // finite spaces
  double worst_point = -1.0; // interval spaces
};

// max |p(T(x)) - p(x)| over atoms (finite) or quadrature probe points
// (interval), compared against tol.
ExponentInvarianceReport check_exponent_invariant(const Transformation& T, const Exponent& p,
                                                  const ProbabilitySpace& space,
                                                  double tol = 1e-12);

// A_n f = (1/n) sum_{j<n} f o T^j. Finite spaces iterate the index map
// exactly; interval transformations return a pointwise composite evaluated
// along orbits (doubling orbits run in exact rational arithmetic over k/q
// with odd q, since floating-point doubling orbits collapse to 0).
FunctionRep birkhoff_average(const ProbabilitySpace& space, const FunctionRep& f,
                             const Transformation& T, long n);

enum class AverageMethod { CycleDecomposition, UniqueErgodicity, Identity };

struct LimitAverage {
  FunctionRep rep;
  AverageMethod method;
};

// The a.e. limit of A_n f: per-cycle weighted means for finite bijections,
// f itself for the identity, and the space mean for irrational rotations
// and the doubling map.
LimitAverage exact_limit_average(const ProbabilitySpace& space, const FunctionRep& f,
                                 const Transformation& T);

// f o T, with mesh metadata transported through the map.
FunctionRep compose_with_map(const ProbabilitySpace& space, const FunctionRep& f,
                             const Transformation& T);

// Orbit partition of a finite bijection.
std::vector<std::vector<int>> cycle_decomposition(const std::vector<int>& image);
bool is_bijection(const std::vector<int>& image);

}  // namespace grandlux::dynamics
