#pragma once

#include <cmath>
#include <limits>

#include "fockskin/types.hpp"

namespace fockskin {

/// A complex number stored as exp(log_mag + i*phase). The phase is accumulated
/// across products and never reduced, so it keeps winding information.
struct LogComplex {
  double log_mag = 0.0;
  double phase = 0.0;
  bool zero = false;

  static LogComplex one() { return {}; }
  static LogComplex zero_value() { return {-std::numeric_limits<double>::infinity(), 0.0, true}; }

  /// Principal-branch log of z.
  static LogComplex from(Complex z) {
    if (z == Complex{0.0, 0.0}) return zero_value();
    return {std::log(std::abs(z)), std::arg(z), false};
  }

  /// exp(log_mag + i*phase); overflows to infinity for huge magnitudes.
  Complex value() const {
    if (zero) return 0.0;
    return std::polar(std::exp(log_mag), phase);
  }

  /// Phase reduced to (-pi, pi].
  double principal_phase() const {
    double r = std::remainder(phase, kTwoPi);
    return r == -kPi ? kPi : r;
  }

  LogComplex& operator*=(const LogComplex& o) {
    if (zero || o.zero) {
      *this = zero_value();
    } else {
      log_mag += o.log_mag;
      phase += o.phase;
    }
    return *this;
  }

  LogComplex& operator/=(const LogComplex& o) {
    if (zero) return *this;
    log_mag -= o.log_mag;
    phase -= o.phase;
    if (o.zero) log_mag = std::numeric_limits<double>::infinity();
    return *this;
  }

  friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
  friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }
};

}  // namespace fockskin
