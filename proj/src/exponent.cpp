#include "grandlux/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace grandlux {

namespace {

void check_bounds(double pminus, double pplus) {
  if (!(pminus > 1.0)) {
    throw std::invalid_argument("exponent requires p- > 1 (grand range (0, p- - 1) empty), got p- = " +
                                std::to_string(pminus));
  }
  if (!std::isfinite(pplus)) {
    throw std::invalid_argument("exponent requires p+ < infinity");
  }
}

}  // namespace

Exponent Exponent::constant(double p) {
  check_bounds(p, p);
  Exponent e;
  e.kind_ = Kind::Constant;
  e.p_ = p;
  e.pminus_ = e.pplus_ = p;
  return e;
}

Exponent Exponent::piecewise(std::vector<Piece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("piecewise exponent needs pieces");
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  constexpr double tol = 1e-12;
  if (std::fabs(pieces.front().lo) > tol || std::fabs(pieces.back().hi - 1.0) > tol) {
    throw std::invalid_argument("piecewise exponent pieces must cover [0,1)");
  }
  double pmin = std::numeric_limits<double>::infinity();
  double pmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!(pieces[i].hi > pieces[i].lo)) {
      throw std::invalid_argument("piecewise exponent pieces must have positive length");
    }
    if (i + 1 < pieces.size() && std::fabs(pieces[i].hi - pieces[i + 1].lo) > tol) {
      throw std::invalid_argument("piecewise exponent pieces must be contiguous");
    }
    pmin = std::min(pmin, pieces[i].p);
    pmax = std::max(pmax, pieces[i].p);
  }
  check_bounds(pmin, pmax);
  Exponent e;
  e.kind_ = Kind::PiecewiseConstant;
  e.pieces_ = std::move(pieces);
  e.pminus_ = pmin;
  e.pplus_ = pmax;
  return e;
}

Exponent Exponent::sampled(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sampled exponent needs values");
  double pmin = *std::min_element(values.begin(), values.end());
  double pmax = *std::max_element(values.begin(), values.end());
  check_bounds(pmin, pmax);
  Exponent e;
  e.kind_ = Kind::Sampled;
  e.values_ = std::move(values);
  e.pminus_ = pmin;
  e.pplus_ = pmax;
  return e;
}

double Exponent::at_atom(int atom) const {
  switch (kind_) {
    case Kind::Constant:
      return p_;
    case Kind::Sampled:
      if (atom < 0 || atom >= static_cast<int>(values_.size())) {
        throw std::out_of_range("exponent atom index out of range");
      }
      return values_[static_cast<std::size_t>(atom)];
    default:
      throw std::invalid_argument("piecewise exponent has no atom values");
  }
}

double Exponent::operator()(double x) const {
  switch (kind_) {
    case Kind::Constant:
      return p_;
    case Kind::PiecewiseConstant:
      for (const Piece& pc : pieces_) {
        if (x >= pc.lo && x < pc.hi) return pc.p;
      }
      return pieces_.back().p;  // x == 1 edge
    default:
      throw std::invalid_argument("sampled exponent evaluated at a non-atom point");
  }
}

std::vector<double> Exponent::breakpoints() const {
  std::vector<double> pts;
  if (kind_ == Kind::PiecewiseConstant) {
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) pts.push_back(pieces_[i].hi);
  }
  return pts;
}

bool Exponent::valid_on(const ProbabilitySpace& space) const {
  switch (kind_) {
    case Kind::Constant:
      return true;
    case Kind::PiecewiseConstant:
      return !space.is_finite();
    case Kind::Sampled:
      return space.is_finite() &&
             static_cast<int>(values_.size()) == space.atom_count();
  }
  return false;
}

const std::vector<double>& Exponent::values() const {
  if (kind_ != Kind::Sampled) throw std::logic_error("values: not a sampled exponent");
  return values_;
}

const std::vector<Exponent::Piece>& Exponent::pieces() const {
  if (kind_ != Kind::PiecewiseConstant) throw std::logic_error("pieces: not piecewise");
  return pieces_;
}

std::pair<double, double> exponent_bounds(const Exponent& p, const ProbabilitySpace& space) {
  if (!p.valid_on(space)) throw std::invalid_argument("exponent not valid on this space");
  // Weights are strictly positive and pieces have positive length by
  // construction, so the cached bounds are the essential bounds.
  return {p.pminus(), p.pplus()};
}

}  // namespace grandlux
