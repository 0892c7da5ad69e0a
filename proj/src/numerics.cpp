#include "citedist/numerics.hpp"

#include "citedist/error.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace citedist {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

void require_valid_log(double v) {
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
    throw DomainError("invalid log value: " + std::to_string(v));
}

/// Mills ratio (1 - Phi(t)) / phi(t) for large positive t, by backward
/// evaluation of t + 1/(t + 2/(t + 3/(t + ...))).
double mills_ratio(double t) {
  double f = t;
  for (int k = 120; k >= 1; --k)
    f = t + k / f;
  return 1.0 / f;
}

/// Neumaier compensated sum of exp(t_i - shift), skipping index `skip`.
double compensated_exp_sum(std::span<const double> terms, double shift, std::size_t skip) {
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i == skip || terms[i] == -std::numeric_limits<double>::infinity())
      continue;
    const double x = std::exp(terms[i] - shift);
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

} // namespace

LogValue::LogValue(double log_value) : value_(log_value) {
  require_valid_log(log_value);
}

LogValue LogValue::from_linear(double x) {
  if (std::isnan(x) || x < 0.0 || std::isinf(x))
    throw DomainError("LogValue::from_linear needs a finite non-negative value");
  return x == 0.0 ? zero() : LogValue(std::log(x));
}

LogValue LogValue::operator*(LogValue rhs) const {
  if (is_zero() || rhs.is_zero())
    return zero();
  return LogValue(value_ + rhs.value_);
}

LogValue LogValue::operator/(LogValue rhs) const {
  if (rhs.is_zero())
    throw DomainError("division by a log-zero value");
  if (is_zero())
    return zero();
  return LogValue(value_ - rhs.value_);
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty())
    throw DomainError("log_sum_exp of an empty sequence");
  std::size_t arg_max = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    require_valid_log(terms[i]);
    if (terms[i] > terms[arg_max])
      arg_max = i;
  }
  const double max = terms[arg_max];
  if (max == -std::numeric_limits<double>::infinity())
    return max;
  return max + std::log1p(compensated_exp_sum(terms, max, arg_max));
}

LogValue log_sum_exp(std::span<const LogValue> terms) {
  std::vector<double> raw(terms.size());
  std::transform(terms.begin(), terms.end(), raw.begin(), [](LogValue v) { return v.value(); });
  return LogValue(log_sum_exp(std::span<const double>(raw)));
}

double std_normal_cdf(double x) {
  if (!std::isfinite(x))
    throw DomainError("std_normal_cdf needs a finite argument");
  if (x < 0.0)
    return 0.5 * std::erfc(-x * kInvSqrt2);
  return 1.0 - 0.5 * std::erfc(x * kInvSqrt2);
}

double log_std_normal_cdf(double x) {
  if (std::isnan(x))
    throw DomainError("log_std_normal_cdf of NaN");
  if (x == std::numeric_limits<double>::infinity())
    return 0.0;
  if (x == -std::numeric_limits<double>::infinity())
    return x;
  if (x > 5.0)
    return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  if (x > -20.0)
    return std::log(0.5 * std::erfc(-x * kInvSqrt2));
  const double t = -x;
  return -0.5 * t * t - kLogSqrt2Pi + std::log(mills_ratio(t));
}

double log_std_normal_interval(double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper))
    throw DomainError("log_std_normal_interval of NaN");
  if (lower > upper)
    throw DomainError("log_std_normal_interval needs lower <= upper");
  if (lower == upper)
    return -std::numeric_limits<double>::infinity();
  if (lower >= 0.0) {
    // Both in the upper half: difference of survival functions.
    const double hi = log_std_normal_sf(lower);
    const double lo = log_std_normal_sf(upper);
    return hi + std::log(-std::expm1(lo - hi));
  }
  if (upper <= 0.0) {
    const double hi = log_std_normal_cdf(upper);
    const double lo = log_std_normal_cdf(lower);
    return hi + std::log(-std::expm1(lo - hi));
  }
  const double outside = 0.5 * std::erfc(upper * kInvSqrt2) + 0.5 * std::erfc(-lower * kInvSqrt2);
  return std::log1p(-outside);
}

const char* to_string(UnderflowRisk risk) {
  switch (risk) {
  case UnderflowRisk::safe:
    return "safe";
  case UnderflowRisk::reduced_accuracy:
    return "reduced_accuracy";
  case UnderflowRisk::total_underflow:
    return "total_underflow";
  }
  return "unknown";
}

UnderflowReport predict_underflow(double alpha, double offset, std::int64_t truncation) {
  if (!(alpha > 0.0) || !(offset >= 0.0) || truncation < 1)
    throw DomainError("predict_underflow needs alpha > 0, offset >= 0, truncation >= 1");
  UnderflowReport report;
  report.alpha = alpha;
  report.offset = offset;
  report.truncation = truncation;
  report.smallest_term_log10 = -alpha * std::log10(offset + static_cast<double>(truncation));
  if (report.smallest_term_log10 <= kSubnormalMinLog10)
    report.risk = UnderflowRisk::total_underflow;
  else if (report.smallest_term_log10 <= kNormalMinLog10)
    report.risk = UnderflowRisk::reduced_accuracy;
  else
    report.risk = UnderflowRisk::safe;
  return report;
}

} // namespace citedist
