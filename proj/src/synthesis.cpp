#include "citedist/synthesis.hpp"

#include "citedist/error.hpp"

#include <algorithm>
#include <cmath>

namespace citedist {

namespace {

// Dense CDF table length for lognormal sampling; draws beyond it bisect the
// closed-form CDF.
constexpr std::int64_t kLognormalTable = 1 << 16;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::pair<double, double> parameter_errors(const ModelParams& truth, const ModelParams& fitted) {
  if (const auto* t = std::get_if<DiscretisedLognormalParams>(&truth)) {
    const auto& f = std::get<DiscretisedLognormalParams>(fitted);
    return {std::abs(f.mu - t->mu), std::abs(f.sigma - t->sigma)};
  }
  const auto& t = std::get<HookedPowerLawParams>(truth);
  const auto& f = std::get<HookedPowerLawParams>(fitted);
  return {std::abs(f.alpha - t.alpha), std::abs(f.offset - t.offset)};
}

} // namespace

Sampler::Sampler(const ModelParams& params) : model_(params) {
  if (const auto* hooked = std::get_if<HookedPowerLawParams>(&params)) {
    table_ = HookedPowerLaw(*hooked).cdf_table(hooked->truncation);
    const auto it = std::lower_bound(table_.begin(), table_.end(), 1.0 - kSamplingTail);
    quantile_point_ = it == table_.end() ? hooked->truncation : (it - table_.begin()) + 1;
  } else {
    const DiscretisedLognormal dln(std::get<DiscretisedLognormalParams>(params));
    quantile_point_ = dln.upper_quantile(kSamplingTail);
    const auto len = std::min(quantile_point_, kLognormalTable);
    table_.resize(static_cast<std::size_t>(len));
    for (std::int64_t k = 1; k <= len; ++k)
      table_[static_cast<std::size_t>(k - 1)] = dln.cdf(k);
  }
}

std::int64_t Sampler::invert(double u) const {
  // Smallest k with cdf(k) > u.
  const auto it = std::upper_bound(table_.begin(), table_.end(), u);
  if (it != table_.end())
    return std::min<std::int64_t>((it - table_.begin()) + 1, quantile_point_);
  if (model_.kind() == ModelKind::hooked)
    return quantile_point_;
  std::int64_t lo = static_cast<std::int64_t>(table_.size());  // cdf(lo) <= u
  std::int64_t hi = quantile_point_;
  if (model_.cdf(hi) <= u)
    return quantile_point_;
  while (hi - lo > 1) {
    const auto mid = lo + (hi - lo) / 2;
    if (model_.cdf(mid) > u)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::int64_t Sampler::draw(SeededGenerator& gen) const {
  return invert(gen.uniform());
}

CitationDataset sample(const ModelParams& params, std::int64_t n, SeededGenerator& gen) {
  if (n < 1)
    throw DomainError("sample size must be >= 1");
  const Sampler sampler(params);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n));
  for (auto& c : counts)
    c = sampler.draw(gen);
  return CitationDataset("synthetic", std::move(counts), true);
}

RecoveryReport recovery_experiment(const ModelParams& truth, std::int64_t n, const std::vector<std::uint64_t>& seeds,
                                   const FitConfig& cfg) {
  if (n < 1000)
    throw DomainError("recovery_experiment needs n >= 1000");
  if (seeds.empty())
    throw DomainError("recovery_experiment needs at least one seed");
  RecoveryReport report;
  report.truth = truth;
  report.n = n;
  std::vector<double> first, second, gaps;
  for (auto seed : seeds) {
    SeededGenerator gen(seed);
    const auto ds = sample(truth, n, gen);
    RecoveryTrial trial;
    trial.seed = seed;
    trial.fit = fit_model(kind_of(truth), ds, cfg);
    std::tie(trial.error_first, trial.error_second) = parameter_errors(truth, trial.fit.params);
    trial.ll_fit = trial.fit.log_likelihood;
    auto truth_eval = truth;
    if (auto* h = std::get_if<HookedPowerLawParams>(&truth_eval))
      h->truncation = std::get<HookedPowerLawParams>(trial.fit.params).truncation;
    trial.ll_truth = histogram_log_likelihood(histogram(ds.counts()), truth_eval);
    first.push_back(trial.error_first);
    second.push_back(trial.error_second);
    gaps.push_back(trial.ll_fit - trial.ll_truth);
    report.trials.push_back(std::move(trial));
  }
  report.median_error_first = median(first);
  report.median_error_second = median(second);
  report.worst_error_first = *std::max_element(first.begin(), first.end());
  report.worst_error_second = *std::max_element(second.begin(), second.end());
  report.worst_ll_gap = *std::min_element(gaps.begin(), gaps.end());
  return report;
}

MixtureSpec::MixtureSpec(std::vector<MixtureComponent> components) : components_(std::move(components)) {
  if (components_.empty())
    throw DomainError("a mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight))
      throw DomainError("mixture weights must be positive and finite");
    validate(c.params);
    total += c.weight;
  }
  for (auto& c : components_)
    c.weight /= total;
}

MixtureReport mixture_experiment(const MixtureSpec& spec, std::int64_t n, SeededGenerator& gen, const FitConfig& cfg,
                                 double threshold) {
  if (n < 1000)
    throw DomainError("mixture_experiment needs n >= 1000");
  const auto& components = spec.components();
  std::vector<Sampler> samplers;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& c : components) {
    samplers.emplace_back(c.params);
    acc += c.weight;
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;

  MixtureReport report{spec, n, gen.seed(), std::vector<std::int64_t>(components.size(), 0), {}, {}, {}};
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n));
  for (auto& c : counts) {
    const auto pick = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), gen.uniform()) - cumulative.begin());
    const auto idx = std::min(pick, components.size() - 1);
    ++report.component_counts[idx];
    c = samplers[idx].draw(gen);
  }
  const CitationDataset pooled("mixture", std::move(counts), true);
  report.lognormal = fit_lognormal(pooled, cfg);
  report.hooked = fit_hooked(pooled, cfg);
  report.comparison = vuong_test(pooled, std::get<HookedPowerLawParams>(report.hooked.params),
                                 std::get<DiscretisedLognormalParams>(report.lognormal.params), threshold);
  return report;
}

} // namespace citedist
