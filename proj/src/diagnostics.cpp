#include "citedist/diagnostics.hpp"

#include "citedist/error.hpp"
#include "file_util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace citedist {

namespace {

// Boundaries within this relative distance of an integer are that integer;
// exp(ln(54)) must floor to 54, not 53.
constexpr double kSnap = 1e-9;

std::int64_t floor_snapped(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= kSnap * std::max(1.0, std::abs(x)))
    return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

constexpr std::int64_t kDensePlotLimit = 20000;
constexpr int kSparsePlotPoints = 2000;

} // namespace

EmpiricalCdf::EmpiricalCdf(const CitationDataset& ds) {
  if (!ds.shifted())
    throw DomainError("empirical CDF needs a shifted dataset");
  const auto max = ds.max_count();
  std::vector<std::int64_t> at(static_cast<std::size_t>(max), 0);
  for (auto c : ds.counts())
    ++at[static_cast<std::size_t>(c - 1)];
  values_.resize(at.size());
  std::int64_t running = 0;
  const double n = static_cast<double>(ds.size());
  for (std::size_t i = 0; i < at.size(); ++i) {
    running += at[i];
    values_[i] = static_cast<double>(running) / n;
  }
}

double EmpiricalCdf::operator()(std::int64_t x) const {
  if (x < 1)
    return 0.0;
  if (x >= max_count())
    return 1.0;
  return values_[static_cast<std::size_t>(x - 1)];
}

EmpiricalCdf empirical_cdf(const CitationDataset& ds) {
  return EmpiricalCdf(ds);
}

SegmentPlan make_segments(std::int64_t n_max, int k) {
  if (k < 1)
    throw DomainError("segment count must be >= 1");
  if (n_max < 0)
    throw DomainError("maximum citation count must be >= 0");
  SegmentPlan plan;
  plan.degenerate = n_max == 0;
  const double span = std::log1p(static_cast<double>(n_max));
  std::int64_t previous_end = 0;
  for (int j = 1; j <= k; ++j) {
    SegmentSpec s;
    s.index = j;
    s.start = previous_end + 1;
    s.end = j == k ? 1 + n_max : floor_snapped(std::exp(span * j / k));
    s.empty = s.start > s.end;
    // The next start is the floor of this boundary plus one, even when this
    // segment came out empty.
    previous_end = std::max(previous_end, s.end);
    plan.segments.push_back(s);
  }
  return plan;
}

SegmentDiagnostics segment_differences(const CitationDataset& ds, const Model& model, const SegmentPlan& plan) {
  const EmpiricalCdf empirical(ds);
  SegmentDiagnostics out;
  out.model = model.kind();
  out.segments = plan.segments;
  for (const auto& s : plan.segments) {
    double best = 0.0;
    if (!s.empty) {
      for (std::int64_t x = s.start; x <= s.end; ++x) {
        const double d = empirical(x) - model.cdf(x);
        if (std::abs(d) > std::abs(best))
          best = d;
      }
    }
    out.signed_max_diff.push_back(std::clamp(best, -1.0, 1.0));
  }
  return out;
}

SegmentDiagnostics segment_differences(const CitationDataset& ds, const ModelParams& params, const SegmentPlan& plan) {
  return segment_differences(ds, Model(params), plan);
}

std::vector<std::int64_t> plot_points(std::int64_t max_count) {
  std::vector<std::int64_t> xs;
  const auto dense = std::min(max_count, kDensePlotLimit);
  for (std::int64_t x = 1; x <= dense; ++x)
    xs.push_back(x);
  if (max_count > kDensePlotLimit) {
    const double lo = std::log(static_cast<double>(kDensePlotLimit));
    const double hi = std::log(static_cast<double>(max_count));
    for (int i = 1; i <= kSparsePlotPoints; ++i) {
      const auto x = static_cast<std::int64_t>(std::floor(std::exp(lo + (hi - lo) * i / kSparsePlotPoints)));
      if (x > xs.back() && x < max_count)
        xs.push_back(x);
    }
    xs.push_back(max_count);
  }
  return xs;
}

std::string render_plot_csv(const CitationDataset& ds, const std::vector<PlotCurve>& curves) {
  const EmpiricalCdf empirical(ds);
  std::vector<Model> models;
  for (const auto& c : curves)
    models.emplace_back(c.params);

  std::string out = "x,empirical";
  for (const auto& c : curves)
    out += "," + c.label;
  out += "\n";
  for (auto x : plot_points(ds.max_count())) {
    out += fmt::format("{},{:.12g}", x, empirical(x));
    for (const auto& m : models)
      out += fmt::format(",{:.12g}", m.cdf(x));
    out += "\n";
  }
  return out;
}

std::string render_plot_svg(const CitationDataset& ds, const std::vector<PlotCurve>& curves) {
  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 170, top = 40, bottom = 60;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  constexpr std::array<const char*, 6> colors{"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

  const EmpiricalCdf empirical(ds);
  const auto xs = plot_points(ds.max_count());
  const double log_hi = std::max(std::log10(static_cast<double>(ds.max_count())), 1.0);
  auto px = [&](std::int64_t x) { return left + plot_w * std::log10(static_cast<double>(x)) / log_hi; };
  auto py = [&](double f) { return top + plot_h * (1.0 - f); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     left + plot_w / 2, ds.label().empty() ? "Cumulative distribution" : xml_escape(ds.label()));
  svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"#444\"/>\n",
                     left, top, plot_w, plot_h);

  for (int decade = 0; decade <= static_cast<int>(std::floor(log_hi)); ++decade) {
    const double x = left + plot_w * decade / log_hi;
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n", x, top,
                       top + plot_h);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x, top + plot_h + 18,
                       static_cast<long long>(std::llround(std::pow(10.0, decade))));
  }
  for (int i = 0; i <= 5; ++i) {
    const double f = i / 5.0;
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n", left,
                       py(f), left + plot_w);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n", left - 6, py(f) + 4, f);
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">Citations + 1 (log scale)</text>\n",
                     left + plot_w / 2, height - 15);
  svg += fmt::format("<text transform=\"translate(18 {:.1f}) rotate(-90)\" text-anchor=\"middle\">Cumulative "
                     "probability</text>\n",
                     top + plot_h / 2);

  auto polyline = [&](auto&& cdf, const char* color, const std::string& label, int slot) {
    std::string pts;
    for (auto x : xs)
      pts += fmt::format("{}{:.2f},{:.2f}", pts.empty() ? "" : " ", px(x), py(cdf(x)));
    std::string out = fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                                  color, pts);
    const double ly = top + 10 + 20 * slot;
    out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
                       "stroke-width=\"2\"/>\n",
                       left + plot_w + 12, ly, left + plot_w + 36, color);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", left + plot_w + 42, ly + 4, xml_escape(label));
    return out;
  };

  svg += polyline([&](std::int64_t x) { return empirical(x); }, colors[0], "empirical", 0);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const Model model(curves[i].params);
    svg += polyline([&](std::int64_t x) { return model.cdf(x); }, colors[(i + 1) % colors.size()], curves[i].label,
                    static_cast<int>(i + 1));
  }
  svg += "</svg>\n";
  return svg;
}

void plot_series(const CitationDataset& ds, const std::vector<PlotCurve>& curves,
                 const std::filesystem::path& svg_path, const std::filesystem::path& csv_path) {
  if (curves.empty())
    throw DomainError("plot_series needs at least one model curve");
  detail::write_file_atomic(svg_path, render_plot_svg(ds, curves));
  detail::write_file_atomic(csv_path, render_plot_csv(ds, curves));
}

} // namespace citedist
