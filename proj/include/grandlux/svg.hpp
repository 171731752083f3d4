#pragma once

#include <string>
#include <vector>

#include "grandlux/ergodic.hpp"

namespace grandlux::experiment {

// Self-contained SVG 1.1 document with a log-log polyline of
// diff_grand_norm against n, axis labels and a C/n guide line. Values at or
// below 1e-16 are clamped to 1e-16 so exact zeros stay plottable. Needs at
// least two rows with positive n.
std::string render_convergence_svg(const std::vector<ergodic::ConvergenceRow>& rows);

}  // namespace grandlux::experiment
