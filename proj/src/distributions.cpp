#include "citedist/distributions.hpp"

#include "citedist/error.hpp"

#include <limits>
#include <string>

namespace citedist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Remaining terms of the normalizer are dropped once their bound falls below
// this fraction of the running sum.
constexpr double kNegligible = 1e-18;

} // namespace

void validate(const HookedPowerLawParams& p, double alpha_cap) {
  if (!std::isfinite(p.alpha) || !(p.alpha > 0.0) || p.alpha > alpha_cap)
    throw DomainError("hooked power law alpha must lie in (0, " + std::to_string(alpha_cap) +
                      "], got " + std::to_string(p.alpha));
  if (!std::isfinite(p.offset) || !(p.offset >= 0.0))
    throw DomainError("hooked power law offset must be finite and >= 0, got " + std::to_string(p.offset));
  if (p.truncation < 1)
    throw DomainError("hooked power law truncation must be >= 1");
}

void validate(const DiscretisedLognormalParams& p, double sigma_min) {
  if (!std::isfinite(p.mu))
    throw DomainError("discretised lognormal mu must be finite");
  if (!std::isfinite(p.sigma) || !(p.sigma >= sigma_min))
    throw DomainError("discretised lognormal sigma must be >= " + std::to_string(sigma_min) + ", got " +
                      std::to_string(p.sigma));
}

HookedPowerLaw::HookedPowerLaw(const HookedPowerLawParams& params) : params_(params) {
  validate(params_, std::numeric_limits<double>::max());
  const double alpha = params_.alpha;
  const double base = params_.offset + 1.0;
  const auto n_max = params_.truncation;
  log_first_ = -alpha * std::log(base);

  // Terms are strictly decreasing, so term * (terms left) bounds the rest.
  double sum = 0.0;
  double carry = 0.0;
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const double term = std::exp(relative_log_mass(n));
    const double t = sum + term;
    carry += (sum >= term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    if (term * static_cast<double>(n_max - n) < kNegligible * (1.0 + sum))
      break;
  }
  sum += carry;

  log_rel_tail_ = kNegInf;
  if (params_.tail_correction && alpha > 1.0) {
    const double edge = static_cast<double>(n_max) + 0.5;
    log_rel_tail_ = -alpha * std::log1p((edge - 1.0) / base) + std::log(params_.offset + edge) -
                    std::log(alpha - 1.0);
  }
  const double tail = std::exp(log_rel_tail_);
  log_rel_norm_ = std::log1p(sum + tail);
  if (std::isinf(log_rel_norm_)) {
    // Tail bound overflowed relative to the first term (alpha barely above 1,
    // huge offset); fall back to explicit log-space addition.
    const double terms[] = {std::log1p(sum), log_rel_tail_};
    log_rel_norm_ = log_sum_exp(std::span<const double>(terms));
  }
}

double HookedPowerLaw::relative_log_mass(std::int64_t n) const {
  return -params_.alpha * std::log1p(static_cast<double>(n - 1) / (params_.offset + 1.0));
}

LogValue HookedPowerLaw::log_norm() const {
  return LogValue(log_first_ + log_rel_norm_);
}

LogValue HookedPowerLaw::log_pmf(std::int64_t n) const {
  if (n < 1 || n > params_.truncation)
    throw SupportRangeError("outcome " + std::to_string(n) + " outside hooked support 1.." +
                            std::to_string(params_.truncation) + "; raise the truncation");
  return LogValue(relative_log_mass(n) - log_rel_norm_);
}

double HookedPowerLaw::tail_mass() const {
  return std::exp(log_rel_tail_ - log_rel_norm_);
}

std::vector<double> HookedPowerLaw::cdf_table(std::int64_t upto) const {
  if (upto < 1 || upto > params_.truncation)
    throw SupportRangeError("cdf requested up to " + std::to_string(upto) + " outside hooked support 1.." +
                            std::to_string(params_.truncation));
  std::vector<double> table(static_cast<std::size_t>(upto));
  double sum = 0.0;
  double carry = 0.0;
  for (std::int64_t n = 1; n <= upto; ++n) {
    const double term = std::exp(relative_log_mass(n) - log_rel_norm_);
    const double t = sum + term;
    carry += (sum >= term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    table[static_cast<std::size_t>(n - 1)] = sum + carry;
  }
  return table;
}

LogValue hooked_log_norm(const HookedPowerLawParams& params) {
  return HookedPowerLaw(params).log_norm();
}

LogValue hooked_log_pmf(std::int64_t n, const HookedPowerLawParams& params) {
  return HookedPowerLaw(params).log_pmf(n);
}

double hooked_cdf(std::int64_t n, const HookedPowerLawParams& params) {
  return HookedPowerLaw(params).cdf_table(n).back();
}

DiscretisedLognormal::DiscretisedLognormal(const DiscretisedLognormalParams& params) : params_(params) {
  validate(params_, 0.0);
  if (!(params_.sigma > 0.0))
    throw DomainError("discretised lognormal sigma must be positive");
  log_denominator_ = log_std_normal_sf(z(0.5));
}

LogValue DiscretisedLognormal::log_pmf(std::int64_t n) const {
  if (n < 1)
    throw DomainError("discretised lognormal support starts at 1, got " + std::to_string(n));
  const double x = static_cast<double>(n);
  const double log_mass = log_std_normal_interval(z(x - 0.5), z(x + 0.5));
  if (log_mass == kNegInf)
    return LogValue::zero();
  return LogValue(log_mass - log_denominator_);
}

double DiscretisedLognormal::log_sf(std::int64_t n) const {
  if (n < 1)
    throw DomainError("discretised lognormal support starts at 1, got " + std::to_string(n));
  return std::min(0.0, log_std_normal_sf(z(static_cast<double>(n) + 0.5)) - log_denominator_);
}

double DiscretisedLognormal::cdf(std::int64_t n) const {
  return -std::expm1(log_sf(n));
}

std::int64_t DiscretisedLognormal::upper_quantile(double tail) const {
  if (!(tail > 0.0 && tail < 1.0))
    throw DomainError("upper_quantile needs a tail probability in (0, 1)");
  const double target = std::log(tail);
  if (log_sf(1) <= target)
    return 1;
  std::int64_t lo = 1;
  std::int64_t hi = 2;
  constexpr std::int64_t kLimit = std::int64_t{1} << 60;
  while (log_sf(hi) > target) {
    lo = hi;
    if (hi >= kLimit)
      throw DomainError("discretised lognormal quantile exceeds the representable support");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (log_sf(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

LogValue dln_log_pmf(std::int64_t n, const DiscretisedLognormalParams& params) {
  return DiscretisedLognormal(params).log_pmf(n);
}

double dln_cdf(std::int64_t n, const DiscretisedLognormalParams& params) {
  return DiscretisedLognormal(params).cdf(n);
}

} // namespace citedist
