#include "citedist/optimizer.hpp"

#include "citedist/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace citedist {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double sanitize(double f) {
  return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
}

std::vector<double> along(const std::vector<double>& origin, const std::vector<double>& towards, double factor) {
  std::vector<double> out(origin.size());
  for (std::size_t i = 0; i < origin.size(); ++i)
    out[i] = origin[i] + factor * (towards[i] - origin[i]);
  return out;
}

} // namespace

NelderMeadResult nelder_mead_minimize(const Objective& objective, std::vector<double> start,
                                      const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0)
    throw DomainError("nelder_mead_minimize needs at least one coordinate");
  if (options.initial_step.size() != dim)
    throw DomainError("nelder_mead_minimize needs one initial step per coordinate");

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return sanitize(objective(x));
  };

  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({start, eval(start)});
  for (std::size_t i = 0; i < dim; ++i) {
    auto x = start;
    x[i] += options.initial_step[i];
    const double f = eval(x);
    simplex.push_back({std::move(x), f});
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

  for (;;) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();

    double diameter = 0.0;
    for (std::size_t v = 1; v <= dim; ++v)
      for (std::size_t i = 0; i < dim; ++i)
        diameter = std::max(diameter, std::abs(simplex[v].x[i] - best.x[i]));
    const double spread = worst.f - best.f;
    if (std::isfinite(best.f) && spread <= options.f_tolerance * std::max(1.0, std::abs(best.f)) &&
        diameter <= options.x_tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= options.max_iterations)
      break;
    ++result.iterations;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v)
      for (std::size_t i = 0; i < dim; ++i)
        centroid[i] += simplex[v].x[i];
    for (double& c : centroid)
      c /= static_cast<double>(dim);

    const auto reflected = along(centroid, worst.x, -1.0);
    const double f_reflected = eval(reflected);

    if (f_reflected < best.f) {
      auto expanded = along(centroid, worst.x, -2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected)
        simplex.back() = {std::move(expanded), f_expanded};
      else
        simplex.back() = {reflected, f_reflected};
      continue;
    }
    if (f_reflected < simplex[dim - 1].f) {
      simplex.back() = {reflected, f_reflected};
      continue;
    }
    if (f_reflected < worst.f) {
      auto outside = along(centroid, reflected, 0.5);
      const double f_outside = eval(outside);
      if (f_outside <= f_reflected) {
        simplex.back() = {std::move(outside), f_outside};
        continue;
      }
    } else {
      auto inside = along(centroid, worst.x, 0.5);
      const double f_inside = eval(inside);
      if (f_inside < worst.f) {
        simplex.back() = {std::move(inside), f_inside};
        continue;
      }
    }
    for (std::size_t v = 1; v <= dim; ++v) {
      simplex[v].x = along(simplex.front().x, simplex[v].x, 0.5);
      simplex[v].f = eval(simplex[v].x);
    }
  }

  result.x = simplex.front().x;
  result.value = simplex.front().f;
  return result;
}

} // namespace citedist
