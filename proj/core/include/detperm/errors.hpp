#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace detperm {

/// Invalid run configuration: bad trial counts, mismatched model dimensions,
/// contradictory options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input values outside an operation's domain (negative entries where a
/// nonnegative matrix is required, epsilon <= 0, rank-deficient input, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exceeds the hard size limit of an exact oracle.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line/column of the offending
/// position when known (0 means unknown, e.g. a schema-level problem).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& message)
      : std::runtime_error(message), line_(0), column_(0) {}

  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace detperm
