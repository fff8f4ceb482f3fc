#pragma once

#include <stdexcept>
#include <string>

namespace pvalprior {

/// Base for every error raised by the library. Messages are meant to be shown
/// to an end user as-is.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed CSV input. Carries the 1-based row and column of the offending
/// cell (row 1 is the header; column 0 means "whole row").
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& detail);

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace pvalprior
