#include "citedist/dataset.hpp"

#include "citedist/error.hpp"

#include <algorithm>

namespace citedist {

CitationDataset::CitationDataset(std::string label, std::vector<std::int64_t> counts, bool shifted)
  : label_(std::move(label)), counts_(std::move(counts)), shifted_(shifted) {
  if (counts_.empty())
    throw DomainError("dataset '" + label_ + "' has no counts");
  const std::int64_t floor = shifted_ ? 1 : 0;
  for (auto c : counts_)
    if (c < floor)
      throw DomainError("dataset '" + label_ + "' has count " + std::to_string(c) + " below " +
                        std::to_string(floor));
}

std::int64_t CitationDataset::max_count() const {
  return *std::max_element(counts_.begin(), counts_.end());
}

CitationDataset shift_counts(const CitationDataset& ds) {
  if (ds.shifted())
    throw DoubleShiftError("dataset '" + ds.label() + "' is already shifted by one");
  auto counts = ds.counts();
  for (auto& c : counts)
    ++c;
  return CitationDataset(ds.label(), std::move(counts), true);
}

CountHistogram histogram(const std::vector<std::int64_t>& counts) {
  auto sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  CountHistogram h;
  for (auto c : sorted) {
    if (h.values.empty() || h.values.back() != c) {
      h.values.push_back(c);
      h.frequencies.push_back(0);
    }
    ++h.frequencies.back();
  }
  h.total = static_cast<std::int64_t>(sorted.size());
  return h;
}

} // namespace citedist
