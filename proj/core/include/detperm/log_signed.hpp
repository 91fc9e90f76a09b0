#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace detperm {

/// A real number stored as (sign, log |value|), so products of n! scale
/// survive far beyond native double range. Zero has the canonical form
/// (0, -infinity).
struct LogSignedValue {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static LogSignedValue zero() { return {}; }

  static LogSignedValue from_value(double v) {
    if (v == 0.0) return zero();
    return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
  }

  static LogSignedValue from_log(int sign, double log_abs) {
    if (sign == 0) return zero();
    return {sign, log_abs};
  }

  bool is_zero() const { return sign == 0; }

  LogSignedValue squared() const {
    if (sign == 0) return zero();
    return {1, 2.0 * log_abs};
  }

  /// May overflow to +-infinity or underflow to 0 outside double range.
  double to_double() const {
    if (sign == 0) return 0.0;
    return static_cast<double>(sign) * std::exp(log_abs);
  }

  friend LogSignedValue operator*(const LogSignedValue& a,
                                  const LogSignedValue& b) {
    if (a.sign == 0 || b.sign == 0) return zero();
    return {a.sign * b.sign, a.log_abs + b.log_abs};
  }
};

/// log(sum exp(logs_i)) with the usual max-shift; -infinity terms contribute
/// nothing, and the result is -infinity when every term is.
double log_sum_exp(std::span<const double> logs);

}  // namespace detperm
