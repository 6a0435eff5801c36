#pragma once

#include <cmath>
#include <compare>
#include <limits>

namespace weierdim {

// Nonnegative real stored as its natural logarithm. Frequencies such as
// 2^(n^n) leave the double range after a handful of terms, while their logs
// stay comfortably representable.
class LogReal {
 public:
  static constexpr double kZeroLog = -std::numeric_limits<double>::infinity();

  constexpr LogReal() = default;

  static LogReal zero() { return LogReal(); }
  static LogReal one() { return from_log(0.0); }
  static LogReal from_log(double log_magnitude) {
    LogReal r;
    r.log_ = log_magnitude;
    return r;
  }
  // x must be >= 0.
  static LogReal from_value(double x) {
    return x > 0.0 ? from_log(std::log(x)) : zero();
  }

  bool is_zero() const { return log_ == kZeroLog; }
  double log() const { return log_; }
  double value() const { return is_zero() ? 0.0 : std::exp(log_); }

  // max-plus-log1p form keeps full relative precision for any magnitudes.
  friend LogReal operator+(LogReal x, LogReal y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    const double hi = std::max(x.log_, y.log_);
    const double lo = std::min(x.log_, y.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  LogReal& operator+=(LogReal y) { return *this = *this + y; }

  friend LogReal operator*(LogReal x, LogReal y) {
    if (x.is_zero() || y.is_zero()) return zero();
    return from_log(x.log_ + y.log_);
  }
  friend LogReal operator/(LogReal x, LogReal y) {
    if (x.is_zero()) return zero();
    return from_log(x.log_ - y.log_);
  }

  friend bool operator==(LogReal x, LogReal y) { return x.log_ == y.log_; }
  friend std::partial_ordering operator<=>(LogReal x, LogReal y) { return x.log_ <=> y.log_; }

 private:
  double log_ = kZeroLog;
};

// log(exp(x) + exp(y)) on plain logs.
inline double log_add(double x, double y) { return (LogReal::from_log(x) + LogReal::from_log(y)).log(); }

}  // namespace weierdim
