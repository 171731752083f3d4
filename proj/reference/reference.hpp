#pragma once

#include <functional>
#include <string>

namespace grandlux_reference {

// Closed-form oracles used to validate the main library from an independent
// route. This module must stay free of any dependency on the library it
// checks; values are plain doubles with +inf marking divergence.

struct OracleResult {
  double value;
  std::string formula_id;
};

// || x^a ||_{L^{p0 - eps}(0,1)} = (1 / (a(p0-eps) + 1))^(1/(p0-eps)) when
// a(p0-eps) > -1, +inf otherwise. Requires p0 - eps >= 1.
OracleResult closed_form_shifted_norm(double a, double p0, double eps);

// Dense-grid evaluation of sup_{0<eps<pminus-1} eps^(theta/(pminus-eps)) * norm(eps).
// The shifted norm is supplied as a callable so the oracle stays independent
// of how norms are produced. grid_size >= 1e5.
double brute_force_grand_sup(const std::function<double(double)>& shifted_norm, double pminus,
                             double theta, long grid_size = 100000);

// |sin(pi n alpha)| / (n |sin(pi alpha)|): the amplitude of the n-step
// Birkhoff average of cos(2 pi x) under rotation by alpha.
double dirichlet_kernel_average(double alpha, long n);

}  // namespace grandlux_reference
