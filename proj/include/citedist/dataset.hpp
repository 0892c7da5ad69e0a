#ifndef CITEDIST_DATASET_HPP
#define CITEDIST_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace citedist {

/// Citation counts for one journal (or any labelled collection).
///
/// Raw counts start at 0. After shift_counts every count is at least 1 and
/// `shifted()` is true; a dataset is shifted at most once.
class CitationDataset {
public:
  /// Throws DomainError on empty counts or counts below the support minimum
  /// (0 raw, 1 shifted).
  CitationDataset(std::string label, std::vector<std::int64_t> counts, bool shifted = false);

  const std::string& label() const {
    return label_;
  }
  const std::vector<std::int64_t>& counts() const {
    return counts_;
  }
  bool shifted() const {
    return shifted_;
  }
  std::size_t size() const {
    return counts_.size();
  }
  std::int64_t max_count() const;

  friend bool operator==(const CitationDataset&, const CitationDataset&) = default;

private:
  std::string label_;
  std::vector<std::int64_t> counts_;
  bool shifted_ = false;
};

/// Adds 1 to every count. Throws DoubleShiftError on an already shifted set.
CitationDataset shift_counts(const CitationDataset& ds);

/// Distinct values in increasing order with their multiplicities.
struct CountHistogram {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> frequencies;
  std::int64_t total = 0;
};

CountHistogram histogram(const std::vector<std::int64_t>& counts);

} // namespace citedist

#endif
