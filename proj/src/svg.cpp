#include "grandlux/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace grandlux::experiment {

namespace {

constexpr double kFloor = 1e-16;
constexpr double kCeil = 1e16;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string render_convergence_svg(const std::vector<ergodic::ConvergenceRow>& rows) {
  if (rows.size() < 2) {
    throw std::invalid_argument("convergence plot needs at least 2 rows");
  }
  for (const auto& r : rows) {
    if (r.n <= 0) throw std::invalid_argument("convergence plot needs positive n");
  }

  const double width = 640.0, height = 440.0;
  const double ml = 80.0, mr = 24.0, mt = 24.0, mb = 56.0;
  const double pw = width - ml - mr, ph = height - mt - mb;

  auto clamp_v = [](double v) {
    if (!std::isfinite(v)) return kCeil;
    return std::min(std::max(v, kFloor), kCeil);
  };

  double lx0 = std::log10(static_cast<double>(rows.front().n));
  double lx1 = std::log10(static_cast<double>(rows.back().n));
  if (lx1 - lx0 < 1e-12) lx1 = lx0 + 1.0;
  double ly0 = 1e300, ly1 = -1e300;
  for (const auto& r : rows) {
    double lv = std::log10(clamp_v(r.diff_grand_norm));
    ly0 = std::min(ly0, lv);
    ly1 = std::max(ly1, lv);
  }
  // include the C/n guide endpoints in the range
  const double guide_c = clamp_v(rows.front().diff_grand_norm) * rows.front().n;
  ly0 = std::min(ly0, std::log10(clamp_v(guide_c / rows.back().n)));
  ly1 = std::max(ly1, std::log10(clamp_v(guide_c / rows.front().n)));
  if (ly1 - ly0 < 1e-12) {
    ly0 -= 1.0;
    ly1 += 1.0;
  }

  auto px = [&](double n) { return ml + pw * (std::log10(n) - lx0) / (lx1 - lx0); };
  auto py = [&](double v) {
    return mt + ph * (1.0 - (std::log10(clamp_v(v)) - ly0) / (ly1 - ly0));
  };

  std::string points, guide;
  for (const auto& r : rows) {
    if (!points.empty()) points += ' ';
    points += fmt(px(static_cast<double>(r.n))) + "," + fmt(py(r.diff_grand_norm));
  }
  guide = fmt(px(static_cast<double>(rows.front().n))) + "," +
          fmt(py(guide_c / rows.front().n)) + " " + fmt(px(static_cast<double>(rows.back().n))) +
          "," + fmt(py(guide_c / rows.back().n));

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) +
         "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" fill=\"white\"/>\n";
  // axes
  svg += "  <line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(ml + pw) +
         "\" y2=\"" + fmt(mt + ph) + "\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
         fmt(mt + ph) + "\" stroke=\"black\"/>\n";
  // decade ticks
  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    double x = ml + pw * (d - lx0) / (lx1 - lx0);
    svg += "  <line x1=\"" + fmt(x) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(mt + ph + 6) + "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"" + fmt(x) + "\" y=\"" + fmt(mt + ph + 20) +
           "\" font-size=\"11\" text-anchor=\"middle\">1e" + std::to_string(d) + "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
    double y = mt + ph * (1.0 - (d - ly0) / (ly1 - ly0));
    svg += "  <line x1=\"" + fmt(ml - 6) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(ml) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"" + fmt(ml - 10) + "\" y=\"" + fmt(y + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">1e" + std::to_string(d) + "</text>\n";
  }
  // labels
  svg += "  <text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 12) +
         "\" font-size=\"13\" text-anchor=\"middle\">n</text>\n";
  svg += "  <text x=\"18\" y=\"" + fmt(mt + ph / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt(mt + ph / 2) + ")\">grand norm of difference</text>\n";
  // C/n guide
  svg += "  <polyline fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"5,4\" points=\"" +
         guide + "\"/>\n";
  svg += "  <text x=\"" + fmt(ml + pw - 4) + "\" y=\"" + fmt(py(guide_c / rows.back().n) - 6) +
         "\" font-size=\"11\" text-anchor=\"end\" fill=\"#999999\">C/n</text>\n";
  // data
  svg += "  <polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"" + points +
         "\"/>\n";
  for (const auto& r : rows) {
    svg += "  <circle cx=\"" + fmt(px(static_cast<double>(r.n))) + "\" cy=\"" +
           fmt(py(r.diff_grand_norm)) + "\" r=\"2.5\" fill=\"#1f5fbf\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace grandlux::experiment
