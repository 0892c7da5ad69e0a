#ifndef CITEDIST_NUMERICS_HPP
#define CITEDIST_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace citedist {

/// Natural logarithm of a non-negative quantity.
///
/// Log of zero is an explicit state (negative infinity). Constructing a
/// LogValue from NaN or +inf throws DomainError, so a LogValue never holds an
/// invalid number.
class LogValue {
public:
  constexpr LogValue() = default;
  explicit LogValue(double log_value);

  static constexpr LogValue zero() {
    LogValue v;
    v.value_ = -std::numeric_limits<double>::infinity();
    return v;
  }
  static LogValue from_linear(double x);

  constexpr double value() const {
    return value_;
  }
  constexpr bool is_zero() const {
    return value_ == -std::numeric_limits<double>::infinity();
  }
  double linear() const {
    return std::exp(value_);
  }

  LogValue operator*(LogValue rhs) const;
  LogValue operator/(LogValue rhs) const;

  friend constexpr bool operator==(LogValue, LogValue) = default;
  friend constexpr auto operator<=>(LogValue a, LogValue b) {
    return a.value_ <=> b.value_;
  }

private:
  double value_ = 0.0;
};

/// ln(sum exp(t_i)) with the largest term factored out.
///
/// The remaining terms are accumulated with compensated summation and added
/// through log1p. Throws DomainError on an empty sequence.
LogValue log_sum_exp(std::span<const LogValue> terms);

/// Same as log_sum_exp over raw log values; -inf entries are log-zero.
double log_sum_exp(std::span<const double> terms);

/// Standard normal CDF.
double std_normal_cdf(double x);

/// ln Phi(x). Finite for every finite x: the far lower tail uses the
/// continued fraction of the Mills ratio instead of erfc.
double log_std_normal_cdf(double x);

/// ln(1 - Phi(x)).
inline double log_std_normal_sf(double x) {
  return log_std_normal_cdf(-x);
}

/// ln(Phi(upper) - Phi(lower)) for lower <= upper, cancellation free when
/// both arguments sit in the same tail. Returns -inf when the difference
/// underflows.
double log_std_normal_interval(double lower, double upper);

enum class UnderflowRisk { safe, reduced_accuracy, total_underflow };

const char* to_string(UnderflowRisk risk);

/// Smallest term of the naive sum sum_{n=1}^{N} (B+n)^-alpha and its fate in
/// IEEE double.
struct UnderflowReport {
  double alpha = 0.0;
  double offset = 0.0;
  std::int64_t truncation = 0;
  double smallest_term_log10 = 0.0;
  UnderflowRisk risk = UnderflowRisk::safe;
};

/// Terms at or below 10^-308 lose precision (R reports double.xmin as about 1e-308).
inline constexpr double kNormalMinLog10 = -308.0;
/// At or below 10^-324 every double is zero.
inline constexpr double kSubnormalMinLog10 = -324.0;

UnderflowReport predict_underflow(double alpha, double offset, std::int64_t truncation);

} // namespace citedist

#endif
