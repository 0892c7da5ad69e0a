#ifndef CITEDIST_SRC_FILE_UTIL_HPP
#define CITEDIST_SRC_FILE_UTIL_HPP

#include <filesystem>
#include <string>

namespace citedist::detail {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file. Throws IoError naming the path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);

} // namespace citedist::detail

#endif
