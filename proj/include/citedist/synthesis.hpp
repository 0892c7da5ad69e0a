#ifndef CITEDIST_SYNTHESIS_HPP
#define CITEDIST_SYNTHESIS_HPP

#include "citedist/dataset.hpp"
#include "citedist/fitting.hpp"
#include "citedist/model.hpp"
#include "citedist/selection.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace citedist {

/// Deterministic uniform stream: std::mt19937_64 (fully specified by the
/// standard) with the top 53 bits mapped to [0, 1). No library distribution
/// objects are involved, so streams agree across platforms.
class SeededGenerator {
public:
  static constexpr const char* kAlgorithm = "mt19937_64/u53/v1";

  explicit SeededGenerator(std::uint64_t seed) : seed_(seed), engine_(seed) {
  }

  std::uint64_t seed() const {
    return seed_;
  }
  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Upper tail probability beyond which draws are mapped to the quantile point.
inline constexpr double kSamplingTail = 1e-12;

/// Inversion sampler for either family.
class Sampler {
public:
  explicit Sampler(const ModelParams& params);

  std::int64_t draw(SeededGenerator& gen) const;
  /// Largest value the sampler can return.
  std::int64_t quantile_point() const {
    return quantile_point_;
  }

private:
  std::int64_t invert(double u) const;

  Model model_;
  std::vector<double> table_;  // table_[k-1] = cdf(k)
  std::int64_t quantile_point_ = 1;
};

/// n draws, returned as a shifted dataset labelled "synthetic".
CitationDataset sample(const ModelParams& params, std::int64_t n, SeededGenerator& gen);

struct RecoveryTrial {
  std::uint64_t seed = 0;
  FitResult fit;
  /// Absolute errors of (mu, sigma) or (alpha, B) against the truth.
  double error_first = 0.0;
  double error_second = 0.0;
  double ll_fit = 0.0;
  double ll_truth = 0.0;
};

struct RecoveryReport {
  ModelParams truth;
  std::int64_t n = 0;
  std::vector<RecoveryTrial> trials;
  double median_error_first = 0.0;
  double median_error_second = 0.0;
  double worst_error_first = 0.0;
  double worst_error_second = 0.0;
  /// min over trials of ll_fit - ll_truth.
  double worst_ll_gap = 0.0;
};

/// For each seed: sample n draws from the truth, fit the same family, record
/// parameter errors and the log-likelihood gap. Requires n >= 1000.
RecoveryReport recovery_experiment(const ModelParams& truth, std::int64_t n, const std::vector<std::uint64_t>& seeds,
                                   const FitConfig& cfg = {});

struct MixtureComponent {
  DiscretisedLognormalParams params;
  double weight = 1.0;
};

/// Lognormal mixture. Weights must be positive; they are normalized on
/// construction.
class MixtureSpec {
public:
  explicit MixtureSpec(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const {
    return components_;
  }

private:
  std::vector<MixtureComponent> components_;
};

struct MixtureReport {
  MixtureSpec spec;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> component_counts;
  FitResult lognormal;
  FitResult hooked;
  ComparisonResult comparison;
};

/// Samples component labels by weight, then counts from each component,
/// fits both families to the pooled data and compares them. Requires
/// n >= 1000.
MixtureReport mixture_experiment(const MixtureSpec& spec, std::int64_t n, SeededGenerator& gen,
                                 const FitConfig& cfg = {}, double threshold = kDefaultZThreshold);

} // namespace citedist

#endif
