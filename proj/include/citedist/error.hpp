#ifndef CITEDIST_ERROR_HPP
#define CITEDIST_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citedist {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Outcome requested beyond the truncated support of a hooked power law.
class SupportRangeError : public DomainError {
public:
  using DomainError::DomainError;
};

/// A dataset that was already shifted by one was shifted again.
class DoubleShiftError : public Error {
public:
  using Error::Error;
};

/// The arbitrary-precision reference sum exceeded its time budget.
class OracleTimeout : public Error {
public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {
  }

  std::size_t line() const {
    return line_;
  }

private:
  std::size_t line_;
};

/// Result document written with a schema this build cannot read.
class VersionError : public Error {
public:
  VersionError(int found, int expected)
    : Error("result document schema_version " + std::to_string(found) +
            " is not supported (expected " + std::to_string(expected) + ")"),
      found_(found), expected_(expected) {
  }

  int found() const {
    return found_;
  }
  int expected() const {
    return expected_;
  }

private:
  int found_;
  int expected_;
};

/// Filesystem failure; the message carries the path.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace citedist

#endif
