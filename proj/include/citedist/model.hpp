#ifndef CITEDIST_MODEL_HPP
#define CITEDIST_MODEL_HPP

#include "citedist/distributions.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace citedist {

enum class ModelKind { lognormal, hooked };

const char* to_string(ModelKind kind);
/// Throws DomainError for anything other than "lognormal" or "hooked".
ModelKind parse_model_kind(const std::string& text);

using ModelParams = std::variant<DiscretisedLognormalParams, HookedPowerLawParams>;

ModelKind kind_of(const ModelParams& params);

/// Either fitted family behind one interface. The hooked CDF table is built
/// at construction; a Model is immutable and safe to share between threads.
class Model {
public:
  explicit Model(const ModelParams& params);

  ModelKind kind() const {
    return kind_of(params_);
  }
  const ModelParams& params() const {
    return params_;
  }

  LogValue log_pmf(std::int64_t n) const;
  /// P(X <= n); 0 below the support, 1 beyond a hooked truncation (minus
  /// any tail-corrected mass).
  double cdf(std::int64_t n) const;

private:
  ModelParams params_;
  std::variant<DiscretisedLognormal, HookedPowerLaw> eval_;
  std::vector<double> hooked_cdf_;
};

} // namespace citedist

#endif
