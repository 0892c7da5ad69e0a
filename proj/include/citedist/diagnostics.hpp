#ifndef CITEDIST_DIAGNOSTICS_HPP
#define CITEDIST_DIAGNOSTICS_HPP

#include "citedist/dataset.hpp"
#include "citedist/model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace citedist {

/// Step function F(x) = #{counts <= x} / n over shifted counts.
class EmpiricalCdf {
public:
  explicit EmpiricalCdf(const CitationDataset& ds);

  /// F(x); 0 below 1, 1 from the maximum count on.
  double operator()(std::int64_t x) const;
  std::int64_t max_count() const {
    return static_cast<std::int64_t>(values_.size());
  }
  /// values()[x-1] = F(x) for x = 1..max_count.
  const std::vector<double>& values() const {
    return values_;
  }

private:
  std::vector<double> values_;
};

EmpiricalCdf empirical_cdf(const CitationDataset& ds);

/// Inclusive range of shifted counts.
struct SegmentSpec {
  int index = 1;
  std::int64_t start = 1;
  std::int64_t end = 1;
  bool empty = false;

  friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
};

struct SegmentPlan {
  std::vector<SegmentSpec> segments;
  /// n_max = 0: one point mass, every other segment empty.
  bool degenerate = false;
};

inline constexpr int kDefaultSegments = 4;

/// k intervals equally spaced in ln(shifted count) over [ln 1, ln(1 + n_max)].
/// Ends are floor(exp(boundary)); later starts are the previous end's floor
/// plus one, which equals rounding up except on exact integers, where it
/// keeps neighbours disjoint. Segment 1 starts at 1.
SegmentPlan make_segments(std::int64_t n_max, int k = kDefaultSegments);

struct SegmentDiagnostics {
  ModelKind model = ModelKind::lognormal;
  std::vector<SegmentSpec> segments;
  /// Empirical minus model CDF at the point of largest magnitude in each
  /// segment; 0 for empty segments. Positive: the model underestimates.
  std::vector<double> signed_max_diff;

  friend bool operator==(const SegmentDiagnostics&, const SegmentDiagnostics&) = default;
};

SegmentDiagnostics segment_differences(const CitationDataset& ds, const Model& model, const SegmentPlan& plan);
SegmentDiagnostics segment_differences(const CitationDataset& ds, const ModelParams& params, const SegmentPlan& plan);

struct PlotCurve {
  std::string label;
  ModelParams params;
};

/// Integer x positions plotted for a dataset: every integer up to 20000,
/// a log-spaced subset beyond, always ending at the maximum count.
std::vector<std::int64_t> plot_points(std::int64_t max_count);

/// CSV with header `x,empirical,<label>...`, one row per plotted x.
std::string render_plot_csv(const CitationDataset& ds, const std::vector<PlotCurve>& curves);

/// Standalone SVG chart of the empirical and model CDFs on a log x axis.
std::string render_plot_svg(const CitationDataset& ds, const std::vector<PlotCurve>& curves);

/// Writes both renderings. Throws DomainError without curves, IoError naming
/// the path on write failure.
void plot_series(const CitationDataset& ds, const std::vector<PlotCurve>& curves,
                 const std::filesystem::path& svg_path, const std::filesystem::path& csv_path);

} // namespace citedist

#endif
