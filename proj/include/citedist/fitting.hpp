#ifndef CITEDIST_FITTING_HPP
#define CITEDIST_FITTING_HPP

#include "citedist/dataset.hpp"
#include "citedist/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace citedist {

struct FitConfig {
  double alpha_cap = kDefaultAlphaCap;
  std::int64_t truncation = kDefaultTruncation;
  bool tail_correction = false;
  int max_iterations = 10000;
  /// Relative log-likelihood spread across the simplex at convergence.
  double ll_tolerance = 1e-8;
  /// Simplex diameter in transformed coordinates at convergence.
  double x_tolerance = 1e-6;
  double sigma_min = kDefaultSigmaMin;

  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

/// Throws DomainError unless alpha_cap > 1, max_iterations >= 100 and the
/// remaining fields are positive.
void validate(const FitConfig& cfg);

/// Datasets smaller than this fit with a warning.
inline constexpr std::size_t kSmallSampleWarning = 30;

struct FitResult {
  ModelParams params;
  double log_likelihood = 0.0;
  /// Log-likelihood at the optimizer's starting point.
  double initial_log_likelihood = 0.0;
  bool converged = false;
  bool alpha_capped = false;
  /// sigma ended on the sigma_min floor.
  bool at_sigma_floor = false;
  /// Hooked truncation was raised above the configured value to cover the data.
  bool truncation_raised = false;
  int iterations = 0;
  int evaluations = 0;
  std::int64_t n_articles = 0;
  std::vector<std::string> warnings;

  ModelKind model() const {
    return kind_of(params);
  }

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

/// Moment estimates of log(counts): mean and max(sigma_min, population sd).
DiscretisedLognormalParams init_lognormal(const CitationDataset& ds, double sigma_min = kDefaultSigmaMin);

/// Simplex search over (mu, ln sigma) with sigma clamped at sigma_min.
FitResult fit_lognormal(const CitationDataset& ds, const FitConfig& cfg = {});

/// Truncation actually used for a dataset: the configured value, or
/// max(configured, 2 * max count) when counts exceed it.
std::int64_t effective_truncation(const CitationDataset& ds, const FitConfig& cfg);

/// Points of the 17 x 17 starting grid over ln(alpha) and ln(B+1).
inline constexpr int kHookedGridPoints = 17;

/// Grid maximizer of the hooked log-likelihood over
/// ln(alpha) in [ln 1.01, ln alpha_cap] x ln(B+1) in [0, ln(10 * max count)].
HookedPowerLawParams init_hooked(const CitationDataset& ds, const FitConfig& cfg = {});

/// Simplex search over (ln alpha, ln(B+1)) from init_hooked. A search that
/// leaves through the alpha cap is clamped to alpha_cap and B re-optimized
/// alone; such results carry alpha_capped.
FitResult fit_hooked(const CitationDataset& ds, const FitConfig& cfg = {});

FitResult fit_model(ModelKind kind, const CitationDataset& ds, const FitConfig& cfg = {});

/// Sum of log-probabilities over a histogram; -inf when some count has zero
/// probability. Throws SupportRangeError for hooked counts beyond truncation.
double histogram_log_likelihood(const CountHistogram& hist, const ModelParams& params);

} // namespace citedist

#endif
