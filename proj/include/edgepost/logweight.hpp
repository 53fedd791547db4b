#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>

namespace edgepost {

/// A nonnegative quantity carried as its natural logarithm.
///
/// The bottom element log(0) = -inf encodes zero; +inf and NaN are never
/// produced. Arithmetic follows the quantity, not the logarithm: `a * b` is the
/// product of the two quantities (log-addition) and `a + b` their sum
/// (log-sum-exp).
class LogWeight {
 public:
  constexpr LogWeight() noexcept = default;

  static constexpr LogWeight zero() noexcept { return LogWeight(); }
  static constexpr LogWeight one() noexcept { return LogWeight(0.0); }
  static constexpr LogWeight from_log(double log_value) noexcept { return LogWeight(log_value); }
  static LogWeight from_value(double value) noexcept { return LogWeight(std::log(value)); }

  constexpr double log() const noexcept { return log_; }
  double value() const noexcept { return std::exp(log_); }
  constexpr bool is_zero() const noexcept { return log_ == -std::numeric_limits<double>::infinity(); }

  friend constexpr LogWeight operator*(LogWeight a, LogWeight b) noexcept {
    return LogWeight(a.log_ + b.log_);
  }
  // Division by zero is not defined; callers only divide by normalizers.
  friend constexpr LogWeight operator/(LogWeight a, LogWeight b) noexcept {
    return a.is_zero() ? a : LogWeight(a.log_ - b.log_);
  }
  friend LogWeight operator+(LogWeight a, LogWeight b) noexcept;

  LogWeight& operator*=(LogWeight other) noexcept { return *this = *this * other; }
  LogWeight& operator+=(LogWeight other) noexcept { return *this = *this + other; }

  friend constexpr bool operator==(LogWeight, LogWeight) noexcept = default;
  friend constexpr auto operator<=>(LogWeight a, LogWeight b) noexcept { return a.log_ <=> b.log_; }

 private:
  constexpr explicit LogWeight(double log_value) noexcept : log_(log_value) {}

  double log_ = -std::numeric_limits<double>::infinity();
};

/// log(exp(a) + exp(b)) with the larger term factored out; zero is the identity.
inline LogWeight log_sum(LogWeight a, LogWeight b) noexcept {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double hi = std::max(a.log(), b.log());
  const double lo = std::min(a.log(), b.log());
  return LogWeight::from_log(hi + std::log1p(std::exp(lo - hi)));
}

inline LogWeight operator+(LogWeight a, LogWeight b) noexcept { return log_sum(a, b); }

}  // namespace edgepost
