#include "reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace grandlux_reference {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

OracleResult closed_form_shifted_norm(double a, double p0, double eps) {
  const double q = p0 - eps;
  if (!(q >= 1.0)) throw std::invalid_argument("closed_form_shifted_norm: p0 - eps >= 1 required");
  const double c = a * q;
  if (c <= -1.0) return {kInf, "power-norm-divergent"};
  return {std::pow(1.0 / (c + 1.0), 1.0 / q), "power-norm-closed-form"};
}

double brute_force_grand_sup(const std::function<double(double)>& shifted_norm, double pminus,
                             double theta, long grid_size) {
  if (grid_size < 100000) throw std::invalid_argument("brute_force_grand_sup: grid_size >= 1e5");
  const double width = pminus - 1.0;
  if (!(width > 0.0)) throw std::invalid_argument("brute_force_grand_sup: pminus > 1 required");
  double best = 0.0;
  for (long i = 1; i <= grid_size; ++i) {
    const double eps = width * static_cast<double>(i) / static_cast<double>(grid_size + 1);
    const double v = std::pow(eps, theta / (pminus - eps)) * shifted_norm(eps);
    if (v > best) best = v;
  }
  return best;
}

double dirichlet_kernel_average(double alpha, long n) {
  if (n < 1) throw std::invalid_argument("dirichlet_kernel_average: n >= 1 required");
  const double s = std::sin(M_PI * alpha);
  if (s == 0.0) {
    throw std::invalid_argument("dirichlet_kernel_average: sin(pi alpha) = 0");
  }
  return std::fabs(std::sin(M_PI * static_cast<double>(n) * alpha)) /
         (static_cast<double>(n) * std::fabs(s));
}

}  // namespace grandlux_reference
