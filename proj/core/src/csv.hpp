#pragma once

// Line-oriented CSV helpers shared by the module readers and writers. The
// formats here are plain comma-separated tables without quoting.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pvalprior::csv {

struct Line {
  std::size_t row;  // 1-based, header is row 1
  std::string text;
};

/// Reads every line, strips a trailing CR and a leading UTF-8 BOM, and drops
/// trailing blank lines. Blank lines elsewhere are reported as parse errors.
std::vector<Line> read_lines(std::istream& in);

std::vector<std::string_view> split(std::string_view line);

/// Finite decimal number, period separator, whole cell consumed.
double parse_finite(std::string_view cell, std::size_t row, std::size_t column);

/// Like parse_finite but also accepts inf/-inf (used for degenerate t values).
double parse_extended(std::string_view cell, std::size_t row, std::size_t column);

long long parse_integer(std::string_view cell, std::size_t row, std::size_t column);

/// Shortest decimal that parses back to the same double.
std::string format_shortest(double value);

/// Scientific notation with the given number of significant digits.
std::string format_scientific(double value, int significant_digits);

/// Throws unless the header row is exactly the expected column names.
void expect_header(const Line& header, std::initializer_list<std::string_view> names);

bool valid_label(std::string_view label) noexcept;

}  // namespace pvalprior::csv
