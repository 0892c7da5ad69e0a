#include "citedist/model.hpp"

#include "citedist/error.hpp"

#include <algorithm>

namespace citedist {

namespace {

std::variant<DiscretisedLognormal, HookedPowerLaw> make_evaluator(const ModelParams& params) {
  if (const auto* dln = std::get_if<DiscretisedLognormalParams>(&params))
    return DiscretisedLognormal(*dln);
  return HookedPowerLaw(std::get<HookedPowerLawParams>(params));
}

} // namespace

const char* to_string(ModelKind kind) {
  return kind == ModelKind::lognormal ? "lognormal" : "hooked";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "lognormal")
    return ModelKind::lognormal;
  if (text == "hooked")
    return ModelKind::hooked;
  throw DomainError("unknown model '" + text + "' (expected lognormal or hooked)");
}

ModelKind kind_of(const ModelParams& params) {
  return std::holds_alternative<DiscretisedLognormalParams>(params) ? ModelKind::lognormal : ModelKind::hooked;
}

Model::Model(const ModelParams& params) : params_(params), eval_(make_evaluator(params)) {
  if (const auto* hooked = std::get_if<HookedPowerLaw>(&eval_))
    hooked_cdf_ = hooked->cdf_table(hooked->params().truncation);
}

LogValue Model::log_pmf(std::int64_t n) const {
  return std::visit([n](const auto& m) { return m.log_pmf(n); }, eval_);
}

double Model::cdf(std::int64_t n) const {
  if (n < 1)
    return 0.0;
  if (const auto* dln = std::get_if<DiscretisedLognormal>(&eval_))
    return dln->cdf(n);
  const auto idx = static_cast<std::size_t>(std::min<std::int64_t>(n, static_cast<std::int64_t>(hooked_cdf_.size())));
  return hooked_cdf_[idx - 1];
}

} // namespace citedist
