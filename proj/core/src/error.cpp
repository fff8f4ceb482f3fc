#include "pvalprior/error.hpp"

namespace pvalprior {

namespace {

std::string format_location(std::size_t row, std::size_t column, const std::string& detail) {
  std::string out = "row " + std::to_string(row);
  if (column > 0) {
    out += ", column " + std::to_string(column);
  }
  return out + ": " + detail;
}

}  // namespace

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& detail)
    : Error(format_location(row, column, detail)), row_(row), column_(column) {}

}  // namespace pvalprior
