#include "csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>

#include "pvalprior/error.hpp"

namespace pvalprior::csv {

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t row = 0;
  while (std::getline(in, text)) {
    ++row;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (row == 1 && text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
    lines.push_back({row, std::move(text)});
  }
  if (in.bad()) throw Error("I/O failure while reading CSV input");
  while (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  for (const auto& line : lines) {
    if (line.text.empty()) throw ParseError(line.row, 0, "unexpected blank line");
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

namespace {

double parse_number(std::string_view cell, std::size_t row, std::size_t column, bool allow_inf) {
  if (cell.empty()) throw ParseError(row, column, "empty cell where a number was expected");
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  // from_chars rejects a leading '+', which is fine for canonical files but
  // too strict for hand-written input.
  if (*first == '+' && cell.size() > 1) ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(row, column, "number out of range: '" + std::string(cell) + "'");
  }
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(row, column, "not a decimal number: '" + std::string(cell) + "'");
  }
  if (std::isnan(value) || (!allow_inf && std::isinf(value))) {
    throw ParseError(row, column, "non-finite value: '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

double parse_finite(std::string_view cell, std::size_t row, std::size_t column) {
  return parse_number(cell, row, column, false);
}

double parse_extended(std::string_view cell, std::size_t row, std::size_t column) {
  return parse_number(cell, row, column, true);
}

long long parse_integer(std::string_view cell, std::size_t row, std::size_t column) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(row, column, "not an integer: '" + std::string(cell) + "'");
  }
  return value;
}

std::string format_shortest(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_scientific(double value, int significant_digits) {
  std::array<char, 48> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::scientific, significant_digits - 1);
  return std::string(buf.data(), ptr);
}

void expect_header(const Line& header, std::initializer_list<std::string_view> names) {
  const auto cells = split(header.text);
  std::string expected;
  for (auto name : names) {
    if (!expected.empty()) expected += ',';
    expected += name;
  }
  if (cells.size() != names.size()) {
    throw ParseError(header.row, 0, "expected header '" + expected + "'");
  }
  std::size_t column = 0;
  for (auto name : names) {
    if (cells[column] != name) {
      throw ParseError(header.row, column + 1, "expected header '" + expected + "'");
    }
    ++column;
  }
}

bool valid_label(std::string_view label) noexcept {
  if (label.empty()) return false;
  return label.find_first_of(",\r\n\"") == std::string_view::npos;
}

}  // namespace pvalprior::csv
