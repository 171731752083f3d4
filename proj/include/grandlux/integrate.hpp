#pragma once

#include <vector>

#include "grandlux/extended_real.hpp"
#include "grandlux/functions.hpp"
#include "grandlux/space.hpp"

namespace grandlux {

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// One quadrature node of a composite mesh on [0,1]. Nodes attached to a
// graded anchor also carry the offset from that anchor, so integrands with
// an algebraic singularity there can be evaluated from the offset directly
// (the absolute coordinate collapses once the offset drops below one ulp).
struct QuadratureNode {
  double x;       // absolute coordinate
  double w;       // weight, jacobian included
  double anchor;  // graded anchor, meaningful iff side != 0
  double delta;   // distance from the anchor
  int side;       // +1: x = anchor + delta, -1: x = anchor - delta, 0: plain
};

// How panels approach a mesh anchor. Singular anchors get geometric grading
// plus a power substitution that absorbs integrable x^a blowups; kink
// anchors (zero crossings of |f|^q, non-smooth points) get grading alone;
// jump anchors just split the mesh.
enum class AnchorGrade { None, Kink, Singular };

struct MeshAnchor {
  double x;
  AnchorGrade grade;
};

// Builds the composite Gauss-Legendre mesh for the given anchors. Anchors
// outside (0,1) adjust the endpoint grades; duplicates keep the strongest
// grade.
std::vector<QuadratureNode> build_mesh(const QuadratureSpec& spec,
                                       std::vector<MeshAnchor> anchors);

// Evaluates f at every node (parallel kernel; slot-independent).
std::vector<double> evaluate_at_nodes(const std::vector<QuadratureNode>& nodes,
                                      const FunctionRep& f);

// Ordered weighted sum over the node table; fixed order keeps results
// independent of the execution mode.
double weighted_sum(const std::vector<QuadratureNode>& nodes, const std::vector<double>& values);

// integral of x^c over [lo, hi], 0 <= lo < hi; +inf when divergent at 0.
ExtendedReal power_piece_integral(double c, double lo, double hi);

// Integral of f over the space. Finite spaces sum exactly; pure Power
// integrands use the closed form 1/(a+1) (or +inf for a <= -1); everything
// else runs the composite quadrature with f's own anchors.
ExtendedReal integrate(const ProbabilitySpace& space, const FunctionRep& f);

// Forces the quadrature path even for pure Power integrands (the closed
// form is the test oracle for this path).
double integrate_quadrature(const ProbabilitySpace& space, const FunctionRep& f);

// Mesh anchors for integrating f itself (jumps, kinks, singularities).
std::vector<MeshAnchor> anchors_for(const FunctionRep& f);

}  // namespace grandlux
