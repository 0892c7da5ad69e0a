#include "citedist/selection.hpp"

#include "citedist/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace citedist {

const char* to_string(Winner w) {
  switch (w) {
  case Winner::L:
    return "L";
  case Winner::L_star:
    return "L*";
  case Winner::H:
    return "H";
  case Winner::H_star:
    return "H*";
  case Winner::undefined:
    return "undefined";
  }
  return "undefined";
}

Winner parse_winner(const std::string& text) {
  for (auto w : {Winner::L, Winner::L_star, Winner::H, Winner::H_star, Winner::undefined})
    if (text == to_string(w))
      return w;
  throw DomainError("unknown winner label '" + text + "'");
}

LikelihoodTotal total_log_likelihood(const CitationDataset& ds, const ModelParams& params) {
  if (!ds.shifted())
    throw DomainError("log-likelihood needs a shifted dataset");
  const Model model(params);
  const auto hist = histogram(ds.counts());
  LikelihoodTotal total;
  for (std::size_t i = 0; i < hist.values.size(); ++i) {
    const auto lp = model.log_pmf(hist.values[i]);
    if (lp.is_zero()) {
      total.zero_probability_counts.push_back(hist.values[i]);
      continue;
    }
    total.value += static_cast<double>(hist.frequencies[i]) * lp.value();
  }
  if (!total.zero_probability_counts.empty())
    total.value = -std::numeric_limits<double>::infinity();
  return total;
}

double aic(double log_likelihood, int k) {
  if (k < 1)
    throw DomainError("aic needs k >= 1");
  return 2.0 * k - 2.0 * log_likelihood;
}

Winner classify_winner(double z, double threshold) {
  if (!(threshold > 0.0))
    throw DomainError("significance threshold must be positive");
  if (!std::isfinite(z))
    return Winner::undefined;
  if (z < -threshold)
    return Winner::L_star;
  if (z > threshold)
    return Winner::H_star;
  return z > 0.0 ? Winner::H : Winner::L;
}

ComparisonResult vuong_test(const CitationDataset& ds, const HookedPowerLawParams& hooked,
                            const DiscretisedLognormalParams& lognormal, double threshold) {
  if (!ds.shifted())
    throw DomainError("vuong_test needs a shifted dataset");
  if (ds.size() < 2)
    throw DomainError("vuong_test needs at least two observations");

  const HookedPowerLaw model_a(hooked);
  const DiscretisedLognormal model_b(lognormal);
  const auto hist = histogram(ds.counts());
  const double n = static_cast<double>(hist.total);

  ComparisonResult result;
  result.n_articles = hist.total;

  // Pointwise log-ratios per distinct count; per-model sums use the same
  // terms so the sign of z matches the reported log-likelihood difference.
  std::vector<double> ratio(hist.values.size());
  double ll_a = 0.0;
  double ll_b = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < hist.values.size(); ++i) {
    const auto la = model_a.log_pmf(hist.values[i]);
    const auto lb = model_b.log_pmf(hist.values[i]);
    const double f = static_cast<double>(hist.frequencies[i]);
    ll_a += f * la.value();
    ll_b += f * lb.value();
    ratio[i] = la.value() - lb.value();
    finite = finite && std::isfinite(ratio[i]);
  }
  result.ll_hooked = ll_a;
  result.ll_lognormal = ll_b;
  if (!finite) {
    result.winner = Winner::undefined;
    return result;
  }

  double mean = 0.0;
  for (std::size_t i = 0; i < ratio.size(); ++i)
    mean += static_cast<double>(hist.frequencies[i]) * ratio[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    const double d = ratio[i] - mean;
    ss += static_cast<double>(hist.frequencies[i]) * d * d;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  // A constant ratio leaves only rounding noise in ss.
  if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
    result.status = VuongStatus::zero_variance;
    result.winner = Winner::undefined;
    return result;
  }
  const double z = (ll_a - ll_b) / (std::sqrt(n) * sd);
  result.vuong_z = z;
  result.p_two_sided = std::erfc(std::abs(z) / std::sqrt(2.0));
  result.winner = classify_winner(z, threshold);
  return result;
}

} // namespace citedist
