#ifndef CITEDIST_DATA_IO_HPP
#define CITEDIST_DATA_IO_HPP

#include "citedist/dataset.hpp"
#include "citedist/diagnostics.hpp"
#include "citedist/fitting.hpp"
#include "citedist/selection.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace citedist {

enum class CountFormat {
  /// One non-negative integer per line; yields one unlabelled dataset.
  one_per_line,
  /// `journal,citations` rows (header optional), grouped by journal.
  labeled_two_column,
};

/// Picks labeled_two_column when the first non-blank line has a comma.
CountFormat detect_format(const std::string& text);

/// Raw (unshifted) datasets in first-appearance order. Throws ParseError with
/// the offending line for negative or non-integer counts and for empty input.
std::vector<CitationDataset> parse_counts(std::istream& in, CountFormat format);
std::vector<CitationDataset> parse_counts(const std::string& text, CountFormat format);

inline constexpr int kSchemaVersion = 1;

struct Provenance {
  FitConfig config;
  double z_threshold = kDefaultZThreshold;
  int segment_count = kDefaultSegments;
  std::optional<std::uint64_t> seed;
  std::string generator;
  /// From SOURCE_DATE_EPOCH when set; empty otherwise so reruns stay
  /// byte-identical.
  std::string created;
  std::string tool_version;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ResultDocument {
  int schema_version = kSchemaVersion;
  std::string label;
  std::int64_t n_articles = 0;
  std::optional<FitResult> lognormal;
  std::optional<FitResult> hooked;
  std::optional<ComparisonResult> comparison;
  std::optional<SegmentDiagnostics> lognormal_segments;
  std::optional<SegmentDiagnostics> hooked_segments;
  Provenance provenance;

  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

/// Pretty-printed JSON. Non-finite reals are written as the strings
/// "inf", "-inf" and "nan" so they survive the round trip.
std::string write_result(const ResultDocument& doc);
/// Throws VersionError for another schema_version, ParseError for anything
/// malformed or truncated.
ResultDocument read_result(const std::string& text);

void write_result_file(const std::filesystem::path& path, const ResultDocument& doc);
ResultDocument read_result_file(const std::filesystem::path& path);

enum class TableStyle { parameters, segments };

/// Tab-separated text table in the layout of the published result tables.
/// Throws DomainError on an empty list.
std::string render_table(const std::vector<ResultDocument>& results, TableStyle style);

/// Journal label turned into a file stem: runs of anything outside
/// [A-Za-z0-9._-] become '_'.
std::string file_stem(const std::string& label);

} // namespace citedist

#endif
