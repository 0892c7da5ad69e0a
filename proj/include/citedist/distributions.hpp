#ifndef CITEDIST_DISTRIBUTIONS_HPP
#define CITEDIST_DISTRIBUTIONS_HPP

#include "citedist/numerics.hpp"

#include <cstdint>
#include <vector>

namespace citedist {

inline constexpr double kDefaultAlphaCap = 10000.0;
inline constexpr std::int64_t kDefaultTruncation = 10000;
inline constexpr double kDefaultSigmaMin = 1e-3;

/// Hooked (shifted) power law on n = 1..truncation, mass proportional to
/// (offset + n)^-alpha.
struct HookedPowerLawParams {
  double alpha = 2.0;
  double offset = 0.0;
  std::int64_t truncation = kDefaultTruncation;
  /// Add the integral bound (B+N+0.5)^(1-alpha)/(alpha-1) for the mass beyond
  /// the truncation to the normalizer. Ignored when alpha <= 1.
  bool tail_correction = false;

  friend bool operator==(const HookedPowerLawParams&, const HookedPowerLawParams&) = default;
};

/// Lognormal integrated over [n-0.5, n+0.5] and renormalized over [0.5, inf).
struct DiscretisedLognormalParams {
  double mu = 0.0;
  double sigma = 1.0;

  friend bool operator==(const DiscretisedLognormalParams&, const DiscretisedLognormalParams&) = default;
};

/// Throws DomainError unless 0 < alpha <= alpha_cap, offset >= 0 and
/// truncation >= 1 (all finite).
void validate(const HookedPowerLawParams& p, double alpha_cap = kDefaultAlphaCap);
/// Throws DomainError unless mu is finite and sigma >= sigma_min.
void validate(const DiscretisedLognormalParams& p, double sigma_min = kDefaultSigmaMin);

/// Evaluator with the normalizer computed once.
///
/// All sums are carried relative to the first (largest) term, so the
/// normalizer stays finite for alpha = 10000 and any offset.
class HookedPowerLaw {
public:
  explicit HookedPowerLaw(const HookedPowerLawParams& params);

  const HookedPowerLawParams& params() const {
    return params_;
  }

  /// ln sum_{n=1}^{N} (B+n)^-alpha, plus the tail bound when enabled.
  LogValue log_norm() const;

  /// Throws SupportRangeError outside 1..N.
  LogValue log_pmf(std::int64_t n) const;

  /// Probability assigned beyond N by the tail correction (0 when disabled).
  double tail_mass() const;

  /// cdf[k-1] = P(X <= k) for k = 1..upto (upto <= N).
  std::vector<double> cdf_table(std::int64_t upto) const;

  /// -alpha * ln(1 + (n-1)/(B+1)), the log mass relative to n = 1.
  double relative_log_mass(std::int64_t n) const;

private:
  HookedPowerLawParams params_;
  double log_first_ = 0.0;     // -alpha ln(B+1)
  double log_rel_norm_ = 0.0;  // ln of the normalizer relative to the first term
  double log_rel_tail_ = 0.0;  // ln of the tail bound relative to the first term, or -inf
};

LogValue hooked_log_norm(const HookedPowerLawParams& params);
LogValue hooked_log_pmf(std::int64_t n, const HookedPowerLawParams& params);
double hooked_cdf(std::int64_t n, const HookedPowerLawParams& params);

class DiscretisedLognormal {
public:
  explicit DiscretisedLognormal(const DiscretisedLognormalParams& params);

  const DiscretisedLognormalParams& params() const {
    return params_;
  }

  /// Throws DomainError for n < 1. Returns log-zero when the interval mass
  /// underflows.
  LogValue log_pmf(std::int64_t n) const;

  double cdf(std::int64_t n) const;

  /// ln P(X > n).
  double log_sf(std::int64_t n) const;

  /// Smallest n with P(X > n) <= tail.
  std::int64_t upper_quantile(double tail) const;

private:
  double z(double x) const {
    return (std::log(x) - params_.mu) / params_.sigma;
  }

  DiscretisedLognormalParams params_;
  double log_denominator_ = 0.0;  // ln(1 - Phi(z(0.5)))
};

LogValue dln_log_pmf(std::int64_t n, const DiscretisedLognormalParams& params);
double dln_cdf(std::int64_t n, const DiscretisedLognormalParams& params);

} // namespace citedist

#endif
