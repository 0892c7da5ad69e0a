#include "citedist/data_io.hpp"

#include "citedist/error.hpp"
#include "file_util.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

namespace citedist {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  s = trim(s);
  if (s.empty())
    return std::nullopt;
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return value;
}

std::int64_t parse_count(std::string_view field, std::size_t line) {
  const auto value = parse_integer(field);
  if (!value)
    throw ParseError("'" + std::string(trim(field)) + "' is not an integer citation count", line);
  if (*value < 0)
    throw ParseError("negative citation count " + std::to_string(*value), line);
  return *value;
}

bool is_blank(std::string_view line) {
  return trim(line).empty();
}

std::string unquote(std::string_view label) {
  if (label.size() >= 2 && label.front() == '"' && label.back() == '"')
    label = label.substr(1, label.size() - 2);
  return std::string(label);
}

// ---- JSON encoding ----------------------------------------------------------

json real(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return x;
}

double get_real(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf")
      return std::numeric_limits<double>::infinity();
    if (s == "-inf")
      return -std::numeric_limits<double>::infinity();
    if (s == "nan")
      return std::numeric_limits<double>::quiet_NaN();
    throw ParseError("expected a number, found string '" + s + "'", 0);
  }
  if (!j.is_number())
    throw ParseError("expected a number", 0);
  return j.get<double>();
}

json encode(const FitConfig& c) {
  return {{"alpha_cap", real(c.alpha_cap)},       {"truncation", c.truncation},
          {"tail_correction", c.tail_correction}, {"max_iterations", c.max_iterations},
          {"ll_tolerance", real(c.ll_tolerance)}, {"x_tolerance", real(c.x_tolerance)},
          {"sigma_min", real(c.sigma_min)}};
}

FitConfig decode_config(const json& j) {
  FitConfig c;
  c.alpha_cap = get_real(j.at("alpha_cap"));
  c.truncation = j.at("truncation").get<std::int64_t>();
  c.tail_correction = j.at("tail_correction").get<bool>();
  c.max_iterations = j.at("max_iterations").get<int>();
  c.ll_tolerance = get_real(j.at("ll_tolerance"));
  c.x_tolerance = get_real(j.at("x_tolerance"));
  c.sigma_min = get_real(j.at("sigma_min"));
  return c;
}

json encode(const ModelParams& p) {
  if (const auto* d = std::get_if<DiscretisedLognormalParams>(&p))
    return {{"mu", real(d->mu)}, {"sigma", real(d->sigma)}};
  const auto& h = std::get<HookedPowerLawParams>(p);
  return {{"alpha", real(h.alpha)},
          {"offset", real(h.offset)},
          {"truncation", h.truncation},
          {"tail_correction", h.tail_correction}};
}

ModelParams decode_params(ModelKind kind, const json& j) {
  if (kind == ModelKind::lognormal)
    return DiscretisedLognormalParams{get_real(j.at("mu")), get_real(j.at("sigma"))};
  HookedPowerLawParams h;
  h.alpha = get_real(j.at("alpha"));
  h.offset = get_real(j.at("offset"));
  h.truncation = j.at("truncation").get<std::int64_t>();
  h.tail_correction = j.at("tail_correction").get<bool>();
  return h;
}

json encode(const FitResult& f) {
  return {{"model", to_string(f.model())},
          {"params", encode(f.params)},
          {"log_likelihood", real(f.log_likelihood)},
          {"initial_log_likelihood", real(f.initial_log_likelihood)},
          {"converged", f.converged},
          {"alpha_capped", f.alpha_capped},
          {"at_sigma_floor", f.at_sigma_floor},
          {"truncation_raised", f.truncation_raised},
          {"iterations", f.iterations},
          {"evaluations", f.evaluations},
          {"n_articles", f.n_articles},
          {"warnings", f.warnings}};
}

FitResult decode_fit(const json& j) {
  FitResult f;
  const auto kind = parse_model_kind(j.at("model").get<std::string>());
  f.params = decode_params(kind, j.at("params"));
  f.log_likelihood = get_real(j.at("log_likelihood"));
  f.initial_log_likelihood = get_real(j.at("initial_log_likelihood"));
  f.converged = j.at("converged").get<bool>();
  f.alpha_capped = j.at("alpha_capped").get<bool>();
  f.at_sigma_floor = j.at("at_sigma_floor").get<bool>();
  f.truncation_raised = j.at("truncation_raised").get<bool>();
  f.iterations = j.at("iterations").get<int>();
  f.evaluations = j.at("evaluations").get<int>();
  f.n_articles = j.at("n_articles").get<std::int64_t>();
  f.warnings = j.at("warnings").get<std::vector<std::string>>();
  return f;
}

json encode(const ComparisonResult& c) {
  return {{"ll_lognormal", real(c.ll_lognormal)},
          {"ll_hooked", real(c.ll_hooked)},
          {"vuong_z", c.vuong_z ? real(*c.vuong_z) : json(nullptr)},
          {"p_two_sided", c.p_two_sided ? real(*c.p_two_sided) : json(nullptr)},
          {"winner", to_string(c.winner)},
          {"status", c.status == VuongStatus::ok ? "ok" : "zero_variance"},
          {"n_articles", c.n_articles}};
}

ComparisonResult decode_comparison(const json& j) {
  ComparisonResult c;
  c.ll_lognormal = get_real(j.at("ll_lognormal"));
  c.ll_hooked = get_real(j.at("ll_hooked"));
  if (!j.at("vuong_z").is_null())
    c.vuong_z = get_real(j.at("vuong_z"));
  if (!j.at("p_two_sided").is_null())
    c.p_two_sided = get_real(j.at("p_two_sided"));
  c.winner = parse_winner(j.at("winner").get<std::string>());
  const auto status = j.at("status").get<std::string>();
  if (status != "ok" && status != "zero_variance")
    throw ParseError("unknown comparison status '" + status + "'", 0);
  c.status = status == "ok" ? VuongStatus::ok : VuongStatus::zero_variance;
  c.n_articles = j.at("n_articles").get<std::int64_t>();
  return c;
}

json encode(const SegmentDiagnostics& s) {
  json segments = json::array();
  for (const auto& seg : s.segments)
    segments.push_back({{"index", seg.index}, {"start", seg.start}, {"end", seg.end}, {"empty", seg.empty}});
  json diffs = json::array();
  for (double d : s.signed_max_diff)
    diffs.push_back(real(d));
  return {{"model", to_string(s.model)}, {"segments", segments}, {"signed_max_diff", diffs}};
}

SegmentDiagnostics decode_segments(const json& j) {
  SegmentDiagnostics s;
  s.model = parse_model_kind(j.at("model").get<std::string>());
  for (const auto& seg : j.at("segments"))
    s.segments.push_back({seg.at("index").get<int>(), seg.at("start").get<std::int64_t>(),
                          seg.at("end").get<std::int64_t>(), seg.at("empty").get<bool>()});
  for (const auto& d : j.at("signed_max_diff"))
    s.signed_max_diff.push_back(get_real(d));
  if (s.segments.size() != s.signed_max_diff.size())
    throw ParseError("segment and difference counts disagree", 0);
  return s;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? encode(*v) : json(nullptr);
}

// ---- Table rendering --------------------------------------------------------

std::string fixed(double x, int decimals) {
  if (!std::isfinite(x))
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  auto s = fmt::format("{:.{}f}", x, decimals);
  // "-0.00" renders as "0.00".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
    s.erase(0, 1);
  return s;
}

std::string compact_cap(double cap) {
  if (cap >= 1000.0 && std::fmod(cap, 1000.0) == 0.0)
    return fmt::format("{}k", static_cast<long long>(cap / 1000.0));
  return fmt::format("{:g}", cap);
}

std::string percent(double fraction, int decimals) {
  return fixed(100.0 * fraction, decimals) + "%";
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string parameters_table(const std::vector<ResultDocument>& results) {
  std::string out = "Journal\tArt.\tLn \xce\xbc\tLn \xcf\x83\tLn LL\tHk \xce\xb1\tHk B\tHk LL\tVuong\tBest\n";
  for (const auto& doc : results) {
    out += doc.label + "\t" + std::to_string(doc.n_articles);
    if (doc.lognormal) {
      const auto& p = std::get<DiscretisedLognormalParams>(doc.lognormal->params);
      out += "\t" + fixed(p.mu, 2) + "\t" + fixed(p.sigma, 2) + "\t" + fixed(doc.lognormal->log_likelihood, 1);
    } else {
      out += "\t-\t-\t-";
    }
    if (doc.hooked) {
      const auto& p = std::get<HookedPowerLawParams>(doc.hooked->params);
      out += "\t" + (doc.hooked->alpha_capped ? compact_cap(p.alpha) : fixed(p.alpha, 1));
      out += "\t" + (p.offset >= 1e5 ? fixed(p.offset, 0) : fixed(p.offset, 1));
      out += "\t" + fixed(doc.hooked->log_likelihood, 1);
    } else {
      out += "\t-\t-\t-";
    }
    if (doc.comparison) {
      out += "\t" + (doc.comparison->vuong_z ? fixed(*doc.comparison->vuong_z, 2) : std::string("-"));
      out += "\t" + std::string(to_string(doc.comparison->winner));
    } else {
      out += "\t-\t-";
    }
    out += "\n";
  }
  return out;
}

std::string segments_table(const std::vector<ResultDocument>& results) {
  std::size_t k = 0;
  for (const auto& doc : results) {
    if (doc.lognormal_segments)
      k = std::max(k, doc.lognormal_segments->signed_max_diff.size());
    if (doc.hooked_segments)
      k = std::max(k, doc.hooked_segments->signed_max_diff.size());
  }
  if (k == 0)
    k = kDefaultSegments;

  // Column c < k: lognormal segment c; column c >= k: hooked segment c - k.
  std::vector<std::vector<double>> columns(2 * k);
  std::string out = "Journal";
  for (const char* tag : {"Ln", "hk"})
    for (std::size_t s = 1; s <= k; ++s)
      out += fmt::format("\tS{} {}", s, tag);
  out += "\n";

  for (const auto& doc : results) {
    out += doc.label;
    for (int m = 0; m < 2; ++m) {
      const auto& diag = m == 0 ? doc.lognormal_segments : doc.hooked_segments;
      for (std::size_t s = 0; s < k; ++s) {
        if (diag && s < diag->signed_max_diff.size()) {
          const double d = diag->signed_max_diff[s];
          columns[m * k + s].push_back(d);
          out += "\t" + percent(d, 0);
        } else {
          out += "\t-";
        }
      }
    }
    out += "\n";
  }

  auto summary = [&](const std::string& name, auto&& cell) {
    out += name;
    for (const auto& col : columns)
      out += "\t" + (col.empty() ? std::string("-") : cell(col));
    out += "\n";
  };
  auto count_if = [](const std::vector<double>& col, auto pred) {
    return std::to_string(std::count_if(col.begin(), col.end(), pred));
  };
  summary("Mean", [](const std::vector<double>& col) {
    double sum = 0.0;
    for (double d : col)
      sum += d;
    return percent(sum / static_cast<double>(col.size()), 1);
  });
  summary("Median", [](const std::vector<double>& col) { return percent(median_of(col), 1); });
  summary("Total >0", [&](const auto& col) { return count_if(col, [](double d) { return d > 0.0; }); });
  summary("Total <0", [&](const auto& col) { return count_if(col, [](double d) { return d < 0.0; }); });
  summary("Total >1%", [&](const auto& col) { return count_if(col, [](double d) { return d > 0.01; }); });
  summary("Total <-1%", [&](const auto& col) { return count_if(col, [](double d) { return d < -0.01; }); });
  summary("Total >=-1% and <=1%",
          [&](const auto& col) { return count_if(col, [](double d) { return d >= -0.01 && d <= 0.01; }); });
  return out;
}

} // namespace

CountFormat detect_format(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!is_blank(line))
      return line.find(',') != std::string::npos ? CountFormat::labeled_two_column : CountFormat::one_per_line;
  return CountFormat::one_per_line;
}

std::vector<CitationDataset> parse_counts(std::istream& in, CountFormat format) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::int64_t>> groups;
  std::string line;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line))
      continue;
    std::string label;
    std::int64_t count = 0;
    if (format == CountFormat::one_per_line) {
      count = parse_count(line, line_no);
    } else {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      const auto comma = line.rfind(',');
      if (comma == std::string::npos)
        throw ParseError("expected 'journal,citations'", line_no);
      const std::string_view field = std::string_view(line).substr(comma + 1);
      if (!seen_row && !parse_integer(field)) {
        // Header row: non-numeric second field on the first line.
        seen_row = true;
        continue;
      }
      label = unquote(std::string_view(line).substr(0, comma));
      count = parse_count(field, line_no);
    }
    seen_row = true;
    auto [it, inserted] = groups.try_emplace(label);
    if (inserted)
      order.push_back(label);
    it->second.push_back(count);
  }
  if (in.bad())
    throw IoError("failed reading count input");
  if (order.empty())
    throw ParseError("input contains no citation counts", 0);
  std::vector<CitationDataset> out;
  for (const auto& label : order)
    out.emplace_back(label, std::move(groups[label]), false);
  return out;
}

std::vector<CitationDataset> parse_counts(const std::string& text, CountFormat format) {
  std::istringstream in(text);
  return parse_counts(in, format);
}

std::string write_result(const ResultDocument& doc) {
  const auto& p = doc.provenance;
  json j = {
      {"schema_version", doc.schema_version},
      {"label", doc.label},
      {"n_articles", doc.n_articles},
      {"lognormal", optional_json(doc.lognormal)},
      {"hooked", optional_json(doc.hooked)},
      {"comparison", optional_json(doc.comparison)},
      {"segments", {{"lognormal", optional_json(doc.lognormal_segments)}, {"hooked", optional_json(doc.hooked_segments)}}},
      {"provenance",
       {{"config", encode(p.config)},
        {"z_threshold", real(p.z_threshold)},
        {"segment_count", p.segment_count},
        {"seed", p.seed ? json(*p.seed) : json(nullptr)},
        {"generator", p.generator},
        {"created", p.created},
        {"tool_version", p.tool_version}}},
  };
  return j.dump(2) + "\n";
}

ResultDocument read_result(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what(), 0);
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw VersionError(version, kSchemaVersion);
    ResultDocument doc;
    doc.schema_version = version;
    doc.label = j.at("label").get<std::string>();
    doc.n_articles = j.at("n_articles").get<std::int64_t>();
    if (!j.at("lognormal").is_null())
      doc.lognormal = decode_fit(j.at("lognormal"));
    if (!j.at("hooked").is_null())
      doc.hooked = decode_fit(j.at("hooked"));
    if (!j.at("comparison").is_null())
      doc.comparison = decode_comparison(j.at("comparison"));
    const auto& seg = j.at("segments");
    if (!seg.at("lognormal").is_null())
      doc.lognormal_segments = decode_segments(seg.at("lognormal"));
    if (!seg.at("hooked").is_null())
      doc.hooked_segments = decode_segments(seg.at("hooked"));
    const auto& p = j.at("provenance");
    doc.provenance.config = decode_config(p.at("config"));
    doc.provenance.z_threshold = get_real(p.at("z_threshold"));
    doc.provenance.segment_count = p.at("segment_count").get<int>();
    if (!p.at("seed").is_null())
      doc.provenance.seed = p.at("seed").get<std::uint64_t>();
    doc.provenance.generator = p.at("generator").get<std::string>();
    doc.provenance.created = p.at("created").get<std::string>();
    doc.provenance.tool_version = p.at("tool_version").get<std::string>();
    if (doc.lognormal && doc.lognormal->model() != ModelKind::lognormal)
      throw ParseError("'lognormal' entry holds a hooked fit", 0);
    if (doc.hooked && doc.hooked->model() != ModelKind::hooked)
      throw ParseError("'hooked' entry holds a lognormal fit", 0);
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what(), 0);
  } catch (const DomainError& e) {
    throw ParseError(std::string("malformed result document: ") + e.what(), 0);
  }
}

void write_result_file(const std::filesystem::path& path, const ResultDocument& doc) {
  detail::write_file_atomic(path, write_result(doc));
}

ResultDocument read_result_file(const std::filesystem::path& path) {
  try {
    return read_result(detail::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string render_table(const std::vector<ResultDocument>& results, TableStyle style) {
  if (results.empty())
    throw DomainError("render_table needs at least one result");
  return style == TableStyle::parameters ? parameters_table(results) : segments_table(results);
}

std::string file_stem(const std::string& label) {
  std::string out;
  for (unsigned char c : label) {
    const bool keep = std::isalnum(c) || c == '.' || c == '_' || c == '-';
    if (keep)
      out += static_cast<char>(c);
    else if (out.empty() || out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_')
    out.pop_back();
  if (out.empty() || out.front() == '.')
    out.insert(0, "dataset");
  return out;
}

} // namespace citedist
