#include "grandlux/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "grandlux/exec.hpp"
#include "grandlux/integrate.hpp"

namespace grandlux::dynamics {

namespace {

// Odd denominator for exact doubling orbits: k/q -> 2k mod q / q.
constexpr std::uint64_t kDoublingDenom = (std::uint64_t{1} << 40) + 1;

double frac_unit(double y) {
  if (y >= 1.0) y -= 1.0;
  if (y >= 1.0 || y < 0.0) y -= std::floor(y);
  return y;
}

std::vector<double> shifted_mod1(const std::vector<double>& pts, double shift) {
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) out.push_back(frac_unit(p + shift));
  return out;
}

}  // namespace

Transformation Transformation::identity() { return Transformation{}; }

Transformation Transformation::finite_map(std::vector<int> image) {
  if (image.empty()) throw std::invalid_argument("finite map needs at least one entry");
  for (int v : image) {
    if (v < 0 || v >= static_cast<int>(image.size())) {
      throw std::invalid_argument("finite map image out of range");
    }
  }
  Transformation t;
  t.kind_ = Kind::FiniteMap;
  t.image_ = std::move(image);
  return t;
}

Transformation Transformation::rotation(double alpha, bool rational) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("rotation alpha must lie in (0,1)");
  Transformation t;
  t.kind_ = Kind::Rotation;
  t.alpha_ = alpha;
  t.rational_ = rational;
  return t;
}

Transformation Transformation::doubling() {
  Transformation t;
  t.kind_ = Kind::Doubling;
  return t;
}

const std::vector<int>& Transformation::image() const {
  if (kind_ != Kind::FiniteMap) throw std::logic_error("image: not a finite map");
  return image_;
}

double Transformation::alpha() const {
  if (kind_ != Kind::Rotation) throw std::logic_error("alpha: not a rotation");
  return alpha_;
}

bool Transformation::rational_alpha() const {
  if (kind_ != Kind::Rotation) throw std::logic_error("rational_alpha: not a rotation");
  return rational_;
}

bool Transformation::valid_on(const ProbabilitySpace& space) const {
  switch (kind_) {
    case Kind::Identity:
      return true;
    case Kind::FiniteMap:
      return space.is_finite() && static_cast<int>(image_.size()) == space.atom_count();
    case Kind::Rotation:
    case Kind::Doubling:
      return !space.is_finite();
  }
  return false;
}

int apply_map(const Transformation& T, const ProbabilitySpace& space, int atom) {
  if (!space.is_finite()) throw std::invalid_argument("atom map applied on an interval space");
  if (atom < 0 || atom >= space.atom_count()) throw std::out_of_range("atom index out of range");
  switch (T.kind()) {
    case Transformation::Kind::Identity:
      return atom;
    case Transformation::Kind::FiniteMap:
      if (!T.valid_on(space)) throw std::invalid_argument("finite map size mismatch");
      return T.image()[static_cast<std::size_t>(atom)];
    default:
      throw std::invalid_argument("interval transformation applied to an atom");
  }
}

double apply_map(const Transformation& T, const ProbabilitySpace& space, double x) {
  if (space.is_finite()) throw std::invalid_argument("point map applied on a finite space");
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("point must lie in [0,1)");
  switch (T.kind()) {
    case Transformation::Kind::Identity:
      return x;
    case Transformation::Kind::Rotation:
      return frac_unit(x + T.alpha());
    case Transformation::Kind::Doubling:
      return frac_unit(2.0 * x);
    default:
      throw std::invalid_argument("finite map applied to an interval point");
  }
}

PreservationReport check_measure_preserving(const Transformation& T,
                                            const ProbabilitySpace& space, double tol) {
  if (!T.valid_on(space)) throw std::invalid_argument("transformation not valid on this space");
  PreservationReport rep;
  switch (T.kind()) {
    case Transformation::Kind::Identity:
      rep.preserved = true;
      rep.method = "identity";
      return rep;
    case Transformation::Kind::Rotation:
    case Transformation::Kind::Doubling:
      // both preserve Lebesgue measure on (0,1)
      rep.preserved = true;
      rep.method = "analytic";
      return rep;
    case Transformation::Kind::FiniteMap: {
      rep.method = "atom mass balance";
      const auto& w = space.weights();
      std::vector<double> mass(w.size(), 0.0);
      for (std::size_t x = 0; x < w.size(); ++x) {
        mass[static_cast<std::size_t>(T.image()[x])] += w[x];
      }
      rep.preserved = true;
      for (std::size_t y = 0; y < w.size(); ++y) {
        double v = std::fabs(mass[y] - w[y]);
        if (v > rep.worst_violation) {
          rep.worst_violation = v;
          rep.worst_atom = static_cast<int>(y);
        }
      }
      if (rep.worst_violation > tol) rep.preserved = false;
      return rep;
    }
  }
  throw std::logic_error("unreachable");
}

ExponentInvarianceReport check_exponent_invariant(const Transformation& T, const Exponent& p,
                                                  const ProbabilitySpace& space, double tol) {
  if (!T.valid_on(space)) throw std::invalid_argument("transformation not valid on this space");
  if (!p.valid_on(space)) throw std::invalid_argument("exponent not valid on this space");
  ExponentInvarianceReport rep;
  if (space.is_finite()) {
    for (int i = 0; i < space.atom_count(); ++i) {
      double v = std::fabs(p.at_atom(apply_map(T, space, i)) - p.at_atom(i));
      if (v > rep.worst_violation) {
        rep.worst_violation = v;
        rep.worst_atom = i;
      }
    }
  } else {
    std::vector<MeshAnchor> anchors;
    for (double b : p.breakpoints()) anchors.push_back({b, AnchorGrade::None});
    auto nodes = build_mesh(space.quadrature(), std::move(anchors));
    for (const auto& q : nodes) {
      double v = std::fabs(p(apply_map(T, space, q.x)) - p(q.x));
      if (v > rep.worst_violation) {
        rep.worst_violation = v;
        rep.worst_point = q.x;
      }
    }
  }
  rep.invariant = rep.worst_violation <= tol;
  return rep;
}

namespace {

FunctionRep finite_birkhoff(const ProbabilitySpace& space, const FunctionRep& f,
                            const Transformation& T, long n) {
  const int N = space.atom_count();
  std::vector<double> out(static_cast<std::size_t>(N));
  exec::for_index_capture(static_cast<std::size_t>(N), [&](std::size_t i) {
    double acc = 0.0;
    int idx = static_cast<int>(i);
    for (long j = 0; j < n; ++j) {
      acc += f.at_atom(idx);
      idx = T.image()[static_cast<std::size_t>(idx)];
    }
    out[i] = acc / static_cast<double>(n);
  });
  return FunctionRep::sampled(std::move(out));
}

double rotation_orbit_average(const FunctionRep& f, double x, double alpha, long n) {
  double acc = 0.0, y = x;
  for (long j = 0; j < n; ++j) {
    acc += f(y);
    y = frac_unit(y + alpha);
  }
  return acc / static_cast<double>(n);
}

double doubling_orbit_average(const FunctionRep& f, double x, long n) {
  const std::uint64_t q = kDoublingDenom;
  auto k = static_cast<std::uint64_t>(std::llround(x * static_cast<double>(q)));
  k = std::min(std::max<std::uint64_t>(k, 1), q - 1);
  double acc = 0.0;
  for (long j = 0; j < n; ++j) {
    acc += f(static_cast<double>(k) / static_cast<double>(q));
    k = (2 * k) % q;
  }
  return acc / static_cast<double>(n);
}

// Pull anchor sets back through the first n steps of the orbit, dropping
// them when the union would exceed the cap (they only tune mesh accuracy).
constexpr std::size_t kAnchorCap = 64;

std::vector<double> pulled_back_anchors(const std::vector<double>& pts, double alpha, long n) {
  if (pts.empty() || static_cast<std::size_t>(n) * pts.size() > kAnchorCap) return {};
  std::vector<double> out;
  for (long j = 0; j < n; ++j) {
    for (double p : pts) out.push_back(frac_unit(p - frac_unit(j * alpha - std::floor(j * alpha))));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FunctionRep interval_birkhoff(const FunctionRep& f, const Transformation& T, long n) {
  FunctionRep::PointwiseSpec spec;
  FunctionRep fc = f;
  if (T.kind() == Transformation::Kind::Rotation) {
    const double alpha = T.alpha();
    spec.eval = [fc, alpha, n](double x) { return rotation_orbit_average(fc, x, alpha, n); };
    spec.jump_points = pulled_back_anchors(f.jump_points(), alpha, n);
    spec.kink_points = pulled_back_anchors(f.kink_points(), alpha, n);
    // singular preimages are not propagated: orbit arithmetic cannot
    // resolve offsets below one ulp of the anchor, so graded nodes there
    // would evaluate garbage
  } else {  // Doubling
    spec.eval = [fc, n](double x) { return doubling_orbit_average(fc, x, n); };
  }
  spec.bounded = f.is_bounded();
  return FunctionRep::pointwise(std::move(spec));
}

}  // namespace

FunctionRep birkhoff_average(const ProbabilitySpace& space, const FunctionRep& f,
                             const Transformation& T, long n) {
  if (n < 1) throw std::invalid_argument("birkhoff average needs n >= 1");
  if (!T.valid_on(space)) throw std::invalid_argument("transformation not valid on this space");
  if (n == 1 || T.kind() == Transformation::Kind::Identity) return f;
  if (space.is_finite()) {
    if (!f.valid_on_finite() || !f.matches_atom_count(space.atom_count())) {
      throw std::invalid_argument("function not evaluable on a finite space");
    }
    if (f.kind() == FunctionRep::Kind::Constant) return f;
    return finite_birkhoff(space, f, T, n);
  }
  switch (f.kind()) {
    case FunctionRep::Kind::Power:
    case FunctionRep::Kind::Cosine:
    case FunctionRep::Kind::Indicator:
      break;
    case FunctionRep::Kind::Constant:
      return f;
    default:
      throw std::invalid_argument(
          "interval Birkhoff averages need catalog functions (orbits leave the node set)");
  }
  return interval_birkhoff(f, T, n);
}

std::vector<std::vector<int>> cycle_decomposition(const std::vector<int>& image) {
  if (!is_bijection(image)) throw std::invalid_argument("cycle decomposition needs a bijection");
  std::vector<std::vector<int>> cycles;
  std::vector<bool> seen(image.size(), false);
  for (std::size_t start = 0; start < image.size(); ++start) {
    if (seen[start]) continue;
    std::vector<int> cycle;
    int idx = static_cast<int>(start);
    while (!seen[static_cast<std::size_t>(idx)]) {
      seen[static_cast<std::size_t>(idx)] = true;
      cycle.push_back(idx);
      idx = image[static_cast<std::size_t>(idx)];
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

bool is_bijection(const std::vector<int>& image) {
  std::vector<bool> hit(image.size(), false);
  for (int v : image) {
    if (v < 0 || v >= static_cast<int>(image.size()) || hit[static_cast<std::size_t>(v)]) {
      return false;
    }
    hit[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

LimitAverage exact_limit_average(const ProbabilitySpace& space, const FunctionRep& f,
                                 const Transformation& T) {
  if (!T.valid_on(space)) throw std::invalid_argument("transformation not valid on this space");
  switch (T.kind()) {
    case Transformation::Kind::Identity:
      return {f, AverageMethod::Identity};
    case Transformation::Kind::FiniteMap: {
      if (!is_bijection(T.image())) {
        throw std::invalid_argument(
            "limit average needs a bijective finite map (measure preservation)");
      }
      if (!f.valid_on_finite() || !f.matches_atom_count(space.atom_count())) {
        throw std::invalid_argument("function not evaluable on a finite space");
      }
      const auto& w = space.weights();
      std::vector<double> out(w.size(), 0.0);
      for (const auto& cycle : cycle_decomposition(T.image())) {
        double num = 0.0, den = 0.0;
        for (int idx : cycle) {
          num += w[static_cast<std::size_t>(idx)] * f.at_atom(idx);
          den += w[static_cast<std::size_t>(idx)];
        }
        const double mean = num / den;
        for (int idx : cycle) out[static_cast<std::size_t>(idx)] = mean;
      }
      return {FunctionRep::sampled(std::move(out)), AverageMethod::CycleDecomposition};
    }
    case Transformation::Kind::Rotation:
      if (T.rational_alpha()) {
        throw std::invalid_argument(
            "rotation with rational alpha is not ergodic; limit average rejected");
      }
      [[fallthrough]];
    case Transformation::Kind::Doubling: {
      ExtendedReal mean = integrate(space, f);
      if (!mean.is_finite()) {
        throw std::invalid_argument("limit average needs an integrable function");
      }
      return {FunctionRep::constant(mean.value()), AverageMethod::UniqueErgodicity};
    }
  }
  throw std::logic_error("unreachable");
}

FunctionRep compose_with_map(const ProbabilitySpace& space, const FunctionRep& f,
                             const Transformation& T) {
  if (!T.valid_on(space)) throw std::invalid_argument("transformation not valid on this space");
  if (T.kind() == Transformation::Kind::Identity) return f;
  if (space.is_finite()) {
    if (f.kind() == FunctionRep::Kind::Constant) return f;
    std::vector<double> out(static_cast<std::size_t>(space.atom_count()));
    for (int i = 0; i < space.atom_count(); ++i) {
      out[static_cast<std::size_t>(i)] = f.at_atom(apply_map(T, space, i));
    }
    return FunctionRep::sampled(std::move(out));
  }
  if (f.kind() == FunctionRep::Kind::Constant) return f;
  FunctionRep::PointwiseSpec spec;
  FunctionRep fc = f;
  if (T.kind() == Transformation::Kind::Rotation) {
    const double alpha = T.alpha();
    spec.eval = [fc, alpha](double x) { return fc(frac_unit(x + alpha)); };
    spec.jump_points = shifted_mod1(f.jump_points(), -alpha);
    spec.kink_points = shifted_mod1(f.kink_points(), -alpha);
    spec.zero_points = shifted_mod1(f.zero_points(), -alpha);
    spec.singular_points = shifted_mod1(f.singular_points(), -alpha);
    // the wrap point of frac(x + alpha) is a jump unless f is continuous
    // across 0/1; harmless as a mesh split either way
    spec.jump_points.push_back(1.0 - alpha);
    if (f.kind() == FunctionRep::Kind::Power) {
      const double a = f.power_exponent();
      const double s0 = 1.0 - alpha;
      // frac(x + alpha) is delta just right of s0 and 1 - delta just left
      // of it; sub-ulp offsets collapse in absolute coordinates
      spec.eval_near = [fc, alpha, a, s0](double anchor, double delta, int side) {
        if (anchor == s0) {
          return side > 0 ? std::pow(delta, a) : std::pow(1.0 - delta, a);
        }
        return fc(frac_unit(anchor + side * delta + alpha));
      };
      // |f(T x)| = (x + alpha)^a left of the wrap, (x - (1-alpha))^a right
      spec.power_pieces = {{0.0, s0, -alpha, 1.0, a, 1.0}, {s0, 1.0, s0, 1.0, a, 1.0}};
    }
  } else {  // Doubling
    spec.eval = [fc](double x) { return fc(frac_unit(2.0 * x)); };
    auto halved = [](const std::vector<double>& pts) {
      std::vector<double> out;
      for (double p : pts) {
        out.push_back(p / 2.0);
        out.push_back(p / 2.0 + 0.5);
      }
      return out;
    };
    spec.jump_points = halved(f.jump_points());
    spec.jump_points.push_back(0.5);
    spec.kink_points = halved(f.kink_points());
    spec.zero_points = halved(f.zero_points());
    spec.singular_points = halved(f.singular_points());
    if (f.kind() == FunctionRep::Kind::Power) {
      const double a = f.power_exponent();
      // frac(2x) is 2*delta just right of 0 and 0.5, and 1 - 2*delta just
      // left of 0.5 and 1
      spec.eval_near = [fc, a](double anchor, double delta, int side) {
        if ((anchor == 0.0 || anchor == 0.5) && side > 0) return std::pow(2.0 * delta, a);
        if ((anchor == 0.5 || anchor == 1.0) && side < 0) return std::pow(1.0 - 2.0 * delta, a);
        return fc(frac_unit(2.0 * (anchor + side * delta)));
      };
      spec.power_pieces = {{0.0, 0.5, 0.0, 2.0, a, 1.0}, {0.5, 1.0, 0.5, 2.0, a, 1.0}};
    }
  }
  spec.bounded = f.is_bounded();
  return FunctionRep::pointwise(std::move(spec));
}

}  // namespace grandlux::dynamics
