#include "citedist/fitting.hpp"

#include "citedist/error.hpp"
#include "citedist/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace citedist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// exp() of anything below this is not a usable exponent.
constexpr double kMinLogAlpha = -700.0;

void require_shifted(const CitationDataset& ds) {
  if (!ds.shifted())
    throw DomainError("dataset '" + ds.label() + "' must be shifted by one before fitting");
}

void attach_size_warning(const CitationDataset& ds, FitResult& result) {
  if (ds.size() < kSmallSampleWarning)
    result.warnings.push_back("only " + std::to_string(ds.size()) + " articles; fits below " +
                              std::to_string(kSmallSampleWarning) + " are unreliable");
}

NelderMeadOptions options_from(const FitConfig& cfg, std::vector<double> steps) {
  NelderMeadOptions opt;
  opt.max_iterations = cfg.max_iterations;
  opt.f_tolerance = cfg.ll_tolerance;
  opt.x_tolerance = cfg.x_tolerance;
  opt.initial_step = std::move(steps);
  return opt;
}

struct HookedSpace {
  double alpha_cap;
  std::int64_t truncation;
  bool tail_correction;

  HookedPowerLawParams at(double log_alpha, double log_offset1) const {
    HookedPowerLawParams p;
    p.alpha = log_alpha >= std::log(alpha_cap) ? alpha_cap
                                               : std::min(alpha_cap, std::exp(std::max(log_alpha, kMinLogAlpha)));
    p.offset = std::max(0.0, std::expm1(log_offset1));
    p.truncation = truncation;
    p.tail_correction = tail_correction;
    return p;
  }
};

} // namespace

void validate(const FitConfig& cfg) {
  if (!(cfg.alpha_cap > 1.0) || !std::isfinite(cfg.alpha_cap))
    throw DomainError("alpha_cap must be a finite value > 1");
  if (cfg.max_iterations < 100)
    throw DomainError("max_iterations must be >= 100");
  if (cfg.truncation < 1)
    throw DomainError("truncation must be >= 1");
  if (!(cfg.ll_tolerance > 0.0) || !(cfg.x_tolerance > 0.0))
    throw DomainError("convergence tolerances must be positive");
  if (!(cfg.sigma_min > 0.0))
    throw DomainError("sigma_min must be positive");
}

double histogram_log_likelihood(const CountHistogram& hist, const ModelParams& params) {
  auto accumulate = [&](const auto& model) {
    double total = 0.0;
    for (std::size_t i = 0; i < hist.values.size(); ++i) {
      const LogValue lp = model.log_pmf(hist.values[i]);
      if (lp.is_zero())
        return kNegInf;
      total += static_cast<double>(hist.frequencies[i]) * lp.value();
    }
    return total;
  };
  if (const auto* dln = std::get_if<DiscretisedLognormalParams>(&params))
    return accumulate(DiscretisedLognormal(*dln));
  return accumulate(HookedPowerLaw(std::get<HookedPowerLawParams>(params)));
}

DiscretisedLognormalParams init_lognormal(const CitationDataset& ds, double sigma_min) {
  require_shifted(ds);
  const double n = static_cast<double>(ds.size());
  double mean = 0.0;
  for (auto c : ds.counts())
    mean += std::log(static_cast<double>(c));
  mean /= n;
  double ss = 0.0;
  for (auto c : ds.counts()) {
    const double d = std::log(static_cast<double>(c)) - mean;
    ss += d * d;
  }
  return {mean, std::max(sigma_min, std::sqrt(ss / n))};
}

FitResult fit_lognormal(const CitationDataset& ds, const FitConfig& cfg) {
  validate(cfg);
  require_shifted(ds);
  const auto hist = histogram(ds.counts());
  const auto start = init_lognormal(ds, cfg.sigma_min);

  auto params_at = [&](std::span<const double> x) {
    // exp(log(sigma_min)) need not round-trip, so snap to the floor.
    const double sigma = x[1] <= std::log(cfg.sigma_min) + 1e-12 ? cfg.sigma_min : std::exp(x[1]);
    return DiscretisedLognormalParams{x[0], std::max(cfg.sigma_min, sigma)};
  };
  auto objective = [&](std::span<const double> x) { return -histogram_log_likelihood(hist, params_at(x)); };

  const auto nm = nelder_mead_minimize(objective, {start.mu, std::log(start.sigma)}, options_from(cfg, {0.1, 0.1}));

  FitResult result;
  result.params = params_at(nm.x);
  result.log_likelihood = -nm.value;
  result.initial_log_likelihood = histogram_log_likelihood(hist, start);
  result.converged = nm.converged;
  result.at_sigma_floor = std::get<DiscretisedLognormalParams>(result.params).sigma <= cfg.sigma_min;
  result.iterations = nm.iterations;
  result.evaluations = nm.evaluations;
  result.n_articles = static_cast<std::int64_t>(ds.size());
  attach_size_warning(ds, result);
  if (result.at_sigma_floor)
    result.warnings.push_back("sigma reached the sigma_min floor");
  return result;
}

std::int64_t effective_truncation(const CitationDataset& ds, const FitConfig& cfg) {
  const auto max_count = ds.max_count();
  if (max_count <= cfg.truncation)
    return cfg.truncation;
  return std::max({cfg.truncation, kDefaultTruncation, 2 * max_count});
}

HookedPowerLawParams init_hooked(const CitationDataset& ds, const FitConfig& cfg) {
  validate(cfg);
  require_shifted(ds);
  const auto hist = histogram(ds.counts());
  const HookedSpace space{cfg.alpha_cap, effective_truncation(ds, cfg), cfg.tail_correction};

  const double u_lo = std::log(1.01);
  const double u_hi = std::log(cfg.alpha_cap);
  const double v_hi = std::log(10.0 * static_cast<double>(ds.max_count()));
  const int last = kHookedGridPoints - 1;

  HookedPowerLawParams best;
  double best_ll = kNegInf;
  bool found = false;
  // Descending alpha with strict improvement: ties go to the largest alpha
  // and, within it, the smallest B.
  for (int i = last; i >= 0; --i) {
    const double u = i == last ? u_hi : u_lo + (u_hi - u_lo) * i / last;
    for (int j = 0; j <= last; ++j) {
      const double v = v_hi * j / last;
      const auto p = space.at(u, v);
      const double ll = histogram_log_likelihood(hist, p);
      if (!found || ll > best_ll) {
        best = p;
        best_ll = ll;
        found = true;
      }
    }
  }
  return best;
}

FitResult fit_hooked(const CitationDataset& ds, const FitConfig& cfg) {
  validate(cfg);
  require_shifted(ds);
  const auto hist = histogram(ds.counts());
  const auto truncation = effective_truncation(ds, cfg);
  const HookedSpace space{cfg.alpha_cap, truncation, cfg.tail_correction};
  const auto start = init_hooked(ds, cfg);

  const double du = (std::log(cfg.alpha_cap) - std::log(1.01)) / (kHookedGridPoints - 1);
  const double dv = std::log(10.0 * static_cast<double>(ds.max_count())) / (kHookedGridPoints - 1);

  auto objective = [&](std::span<const double> x) {
    return -histogram_log_likelihood(hist, space.at(x[0], x[1]));
  };
  const std::vector<double> x0{std::log(start.alpha), std::log1p(start.offset)};
  const auto nm = nelder_mead_minimize(objective, x0, options_from(cfg, {0.5 * du, 0.5 * dv}));

  FitResult result;
  result.params = space.at(nm.x[0], nm.x[1]);
  result.log_likelihood = -nm.value;
  result.initial_log_likelihood = histogram_log_likelihood(hist, start);
  result.converged = nm.converged;
  result.iterations = nm.iterations;
  result.evaluations = nm.evaluations;
  result.truncation_raised = truncation != cfg.truncation;
  result.n_articles = static_cast<std::int64_t>(ds.size());

  if (nm.x[0] >= std::log(cfg.alpha_cap)) {
    const double log_cap = std::log(cfg.alpha_cap);
    auto along_offset = [&](std::span<const double> x) {
      return -histogram_log_likelihood(hist, space.at(log_cap, x[0]));
    };
    const auto line = nelder_mead_minimize(along_offset, {nm.x[1]}, options_from(cfg, {0.5 * dv}));
    const auto capped = space.at(log_cap, line.x[0]);
    const double capped_ll = histogram_log_likelihood(hist, capped);
    if (capped_ll >= result.log_likelihood) {
      result.params = capped;
      result.log_likelihood = capped_ll;
    }
    result.alpha_capped = true;
    result.converged = nm.converged && line.converged;
    result.iterations += line.iterations;
    result.evaluations += line.evaluations;
    result.warnings.push_back("alpha reached the cap " + std::to_string(cfg.alpha_cap));
  }
  if (result.truncation_raised)
    result.warnings.push_back("truncation raised to " + std::to_string(truncation) + " to cover the largest count");
  attach_size_warning(ds, result);
  return result;
}

FitResult fit_model(ModelKind kind, const CitationDataset& ds, const FitConfig& cfg) {
  return kind == ModelKind::lognormal ? fit_lognormal(ds, cfg) : fit_hooked(ds, cfg);
}

} // namespace citedist
