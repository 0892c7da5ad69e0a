#ifndef CITEDIST_OPTIMIZER_HPP
#define CITEDIST_OPTIMIZER_HPP

#include <functional>
#include <span>
#include <vector>

namespace citedist {

struct NelderMeadOptions {
  int max_iterations = 10000;
  /// Stop when (f_worst - f_best) <= f_tolerance * max(1, |f_best|) ...
  double f_tolerance = 1e-8;
  /// ... and every vertex lies within this max-norm distance of the best.
  double x_tolerance = 1e-6;
  /// Edge lengths of the starting simplex, one per coordinate.
  std::vector<double> initial_step;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). NaN objective values rank as +inf.
/// Deterministic: identical inputs give bit-identical results.
NelderMeadResult nelder_mead_minimize(const Objective& objective, std::vector<double> start,
                                      const NelderMeadOptions& options);

} // namespace citedist

#endif
