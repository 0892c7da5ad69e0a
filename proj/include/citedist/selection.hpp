#ifndef CITEDIST_SELECTION_HPP
#define CITEDIST_SELECTION_HPP

#include "citedist/dataset.hpp"
#include "citedist/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace citedist {

/// Table-1 style "Best" label. The star marks a significant Vuong z.
enum class Winner { L, L_star, H, H_star, undefined };

/// "L", "L*", "H", "H*" or "undefined".
const char* to_string(Winner w);
/// Inverse of to_string; throws DomainError.
Winner parse_winner(const std::string& text);

inline constexpr double kDefaultZThreshold = 1.96;

struct LikelihoodTotal {
  double value = 0.0;
  /// Counts whose log-probability is the log-zero sentinel (value is -inf).
  std::vector<std::int64_t> zero_probability_counts;
};

/// Sum of log_pmf over a shifted dataset. Throws DomainError when the dataset
/// is not shifted.
LikelihoodTotal total_log_likelihood(const CitationDataset& ds, const ModelParams& params);

/// 2k - 2 ll.
double aic(double log_likelihood, int k);

enum class VuongStatus { ok, zero_variance };

struct ComparisonResult {
  double ll_lognormal = 0.0;
  double ll_hooked = 0.0;
  /// Absent when the pointwise differences have zero variance.
  std::optional<double> vuong_z;
  std::optional<double> p_two_sided;
  Winner winner = Winner::undefined;
  VuongStatus status = VuongStatus::ok;
  std::int64_t n_articles = 0;

  friend bool operator==(const ComparisonResult&, const ComparisonResult&) = default;
};

/// Label for a Vuong z: beyond +-threshold is starred, otherwise the sign
/// decides with ties (z = 0) going to L. Non-finite z is undefined.
Winner classify_winner(double z, double threshold = kDefaultZThreshold);

/// Vuong test of the hooked model (A) against the lognormal (B).
///
/// z = (ll_hooked - ll_lognormal) / (sqrt(n) * s), with s the sample
/// standard deviation (n - 1 denominator) of the pointwise log-ratios, so
/// z > 0 favours the hooked model. No correction term: both models have two
/// parameters.
ComparisonResult vuong_test(const CitationDataset& ds, const HookedPowerLawParams& hooked,
                            const DiscretisedLognormalParams& lognormal,
                            double threshold = kDefaultZThreshold);

} // namespace citedist

#endif
