#include "grandlux/functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grandlux {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

FunctionRep FunctionRep::sampled(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sampled function needs values");
  FunctionRep f;
  f.kind_ = Kind::Sampled;
  f.samples_ = std::move(values);
  return f;
}

FunctionRep FunctionRep::power(double exponent) {
  FunctionRep f;
  f.kind_ = Kind::Power;
  f.a_ = exponent;
  return f;
}

FunctionRep FunctionRep::cosine(int frequency) {
  if (frequency < 1) throw std::invalid_argument("cosine frequency must be a positive integer");
  FunctionRep f;
  f.kind_ = Kind::Cosine;
  f.k_ = frequency;
  return f;
}

FunctionRep FunctionRep::indicator(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0)) {
    throw std::invalid_argument("indicator needs 0 <= lo < hi <= 1");
  }
  FunctionRep f;
  f.kind_ = Kind::Indicator;
  f.lo_ = lo;
  f.hi_ = hi;
  return f;
}

FunctionRep FunctionRep::constant(double value) {
  FunctionRep f;
  f.kind_ = Kind::Constant;
  f.c_ = value;
  return f;
}

FunctionRep FunctionRep::pointwise(PointwiseSpec spec) {
  if (!spec.eval) throw std::invalid_argument("pointwise function needs an evaluator");
  FunctionRep f;
  f.kind_ = Kind::Pointwise;
  f.pw_ = std::make_shared<const PointwiseSpec>(std::move(spec));
  return f;
}

double FunctionRep::at_atom(int atom) const {
  switch (kind_) {
    case Kind::Sampled:
      if (atom < 0 || atom >= static_cast<int>(samples_.size())) {
        throw std::out_of_range("atom index out of range");
      }
      return samples_[static_cast<std::size_t>(atom)];
    case Kind::Constant:
      return c_;
    default:
      throw std::invalid_argument("function has no atom values");
  }
}

double FunctionRep::operator()(double x) const {
  switch (kind_) {
    case Kind::Sampled:
      throw std::invalid_argument("sampled function evaluated at a non-atom point");
    case Kind::Power:
      if (x <= 0.0 && a_ < 0.0) {
        throw std::domain_error("power function evaluated at its singular point");
      }
      return std::pow(x, a_);
    case Kind::Cosine:
      return std::cos(kTwoPi * k_ * x);
    case Kind::Indicator:
      return (x >= lo_ && x < hi_) ? 1.0 : 0.0;
    case Kind::Constant:
      return c_;
    case Kind::Pointwise:
      return pw_->eval(x);
  }
  throw std::logic_error("unreachable");
}

double FunctionRep::near(double anchor, double delta, int side) const {
  if (kind_ == Kind::Power && anchor == 0.0 && side > 0) {
    if (delta <= 0.0 && a_ < 0.0) {
      throw std::domain_error("power function evaluated at its singular point");
    }
    return std::pow(delta, a_);
  }
  if (kind_ == Kind::Pointwise && pw_->eval_near) {
    return pw_->eval_near(anchor, delta, side);
  }
  return (*this)(anchor + side * delta);
}

std::vector<double> FunctionRep::jump_points() const {
  switch (kind_) {
    case Kind::Indicator: {
      std::vector<double> pts;
      if (lo_ > 0.0) pts.push_back(lo_);
      if (hi_ < 1.0) pts.push_back(hi_);
      return pts;
    }
    case Kind::Pointwise:
      return pw_->jump_points;
    default:
      return {};
  }
}

std::vector<double> FunctionRep::kink_points() const {
  if (kind_ == Kind::Pointwise) return pw_->kink_points;
  return {};
}

std::vector<double> FunctionRep::zero_points() const {
  switch (kind_) {
    case Kind::Cosine: {
      // zeros of cos(2 pi k x): x = (2j+1)/(4k)
      std::vector<double> pts;
      for (int j = 0; j < 2 * k_; ++j) {
        pts.push_back((2.0 * j + 1.0) / (4.0 * k_));
      }
      return pts;
    }
    case Kind::Pointwise:
      return pw_->zero_points;
    default:
      return {};
  }
}

std::vector<double> FunctionRep::singular_points() const {
  switch (kind_) {
    case Kind::Power:
      return a_ < 0.0 ? std::vector<double>{0.0} : std::vector<double>{};
    case Kind::Pointwise:
      return pw_->singular_points;
    default:
      return {};
  }
}

std::vector<FunctionRep::PowerPiece> FunctionRep::power_pieces() const {
  switch (kind_) {
    case Kind::Power:
      return {{0.0, 1.0, 0.0, 1.0, a_, 1.0}};
    case Kind::Pointwise:
      return pw_->power_pieces;
    default:
      return {};
  }
}

bool FunctionRep::is_bounded() const {
  switch (kind_) {
    case Kind::Power:
      return a_ >= 0.0;
    case Kind::Pointwise:
      return pw_->bounded;
    default:
      return true;
  }
}

const std::vector<double>& FunctionRep::samples() const {
  if (kind_ != Kind::Sampled) throw std::logic_error("samples: not a sampled function");
  return samples_;
}

double FunctionRep::power_exponent() const {
  if (kind_ != Kind::Power) throw std::logic_error("power_exponent: not a power function");
  return a_;
}

int FunctionRep::cosine_frequency() const {
  if (kind_ != Kind::Cosine) throw std::logic_error("cosine_frequency: not a cosine");
  return k_;
}

double FunctionRep::constant_value() const {
  if (kind_ != Kind::Constant) throw std::logic_error("constant_value: not a constant");
  return c_;
}

std::pair<double, double> FunctionRep::indicator_bounds() const {
  if (kind_ != Kind::Indicator) throw std::logic_error("indicator_bounds: not an indicator");
  return {lo_, hi_};
}

namespace {

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

FunctionRep fn_difference(const FunctionRep& f, const FunctionRep& g) {
  if (f.kind() == FunctionRep::Kind::Constant && g.kind() == FunctionRep::Kind::Constant) {
    return FunctionRep::constant(f.constant_value() - g.constant_value());
  }
  if (f.kind() == FunctionRep::Kind::Sampled && g.kind() == FunctionRep::Kind::Sampled) {
    const auto& fv = f.samples();
    const auto& gv = g.samples();
    if (fv.size() != gv.size()) throw std::invalid_argument("sampled difference: size mismatch");
    std::vector<double> d(fv.size());
    for (std::size_t i = 0; i < fv.size(); ++i) d[i] = fv[i] - gv[i];
    return FunctionRep::sampled(std::move(d));
  }
  if (f.kind() == FunctionRep::Kind::Sampled || g.kind() == FunctionRep::Kind::Sampled) {
    // Constant - Sampled and friends on a finite space
    if (f.valid_on_finite() && g.valid_on_finite()) {
      int n = static_cast<int>(f.kind() == FunctionRep::Kind::Sampled ? f.samples().size()
                                                                      : g.samples().size());
      std::vector<double> d(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = f.at_atom(i) - g.at_atom(i);
      return FunctionRep::sampled(std::move(d));
    }
    throw std::invalid_argument("difference: incompatible representations");
  }
  FunctionRep::PointwiseSpec spec;
  FunctionRep fc = f, gc = g;
  spec.eval = [fc, gc](double x) { return fc(x) - gc(x); };
  spec.jump_points = merged(f.jump_points(), g.jump_points());
  spec.kink_points = merged(f.kink_points(), g.kink_points());
  spec.singular_points = merged(f.singular_points(), g.singular_points());
  // zero crossings of a difference are not known in general
  spec.bounded = f.is_bounded() && g.is_bounded();
  return FunctionRep::pointwise(std::move(spec));
}

FunctionRep fn_scale(const FunctionRep& f, double c) {
  switch (f.kind()) {
    case FunctionRep::Kind::Sampled: {
      std::vector<double> v = f.samples();
      for (double& x : v) x *= c;
      return FunctionRep::sampled(std::move(v));
    }
    case FunctionRep::Kind::Constant:
      return FunctionRep::constant(c * f.constant_value());
    default: {
      FunctionRep::PointwiseSpec spec;
      FunctionRep fc = f;
      spec.eval = [fc, c](double x) { return c * fc(x); };
      spec.eval_near = [fc, c](double anchor, double delta, int side) {
        return c * fc.near(anchor, delta, side);
      };
      spec.jump_points = f.jump_points();
      spec.kink_points = f.kink_points();
      spec.zero_points = f.zero_points();
      spec.singular_points = f.singular_points();
      spec.power_pieces = f.power_pieces();
      for (auto& pp : spec.power_pieces) pp.coef *= std::fabs(c);
      spec.bounded = f.is_bounded();
      return FunctionRep::pointwise(std::move(spec));
    }
  }
}

double sup_abs_finite(const FunctionRep& f, int atom_count) {
  double m = 0.0;
  for (int i = 0; i < atom_count; ++i) m = std::max(m, std::fabs(f.at_atom(i)));
  return m;
}

}  // namespace grandlux
