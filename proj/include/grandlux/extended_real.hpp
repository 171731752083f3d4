#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace grandlux {

// A real number extended with +infinity, used for modulars, norms and
// integrals that may diverge. +inf propagates through sums and positive
// scalings; NaN and -inf are rejected. Modulars and norms only ever
// produce nonnegative values; signed values appear for plain integrals
// of signed functions.
class ExtendedReal {
 public:
  ExtendedReal() : v_(0.0) {}
  ExtendedReal(double v) : v_(v) {  // NOLINT: implicit by design
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("ExtendedReal: value must be finite or +inf");
    }
  }

  static ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(v_); }
  double value() const { return v_; }

  ExtendedReal operator+(const ExtendedReal& o) const { return ExtendedReal(v_ + o.v_); }

  // Positive scalings only: 0 * inf has no consistent meaning here.
  ExtendedReal operator*(double c) const {
    if (c < 0.0 || std::isnan(c)) {
      throw std::invalid_argument("ExtendedReal: scale must be >= 0");
    }
    if (c == 0.0 && !is_finite()) {
      throw std::invalid_argument("ExtendedReal: 0 * inf is undefined");
    }
    return ExtendedReal(c * v_);
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ == b.v_; }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ < b.v_; }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ <= b.v_; }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ > b.v_; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ >= b.v_; }

 private:
  double v_;
};

}  // namespace grandlux
