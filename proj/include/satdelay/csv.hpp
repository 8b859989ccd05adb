// Minimal CSV helpers shared by every emitted table. Output is UTF-8 with LF
// line endings and '.' as decimal separator regardless of locale.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace satdelay::csv {

/// Fixed-point rendering with `precision` decimals, locale independent.
std::string fixed(double value, int precision);

/// Quotes a field when it contains a comma, quote or newline.
std::string field(std::string_view text);

std::string join(const std::vector<std::string>& fields);

/// Splits one CSV record; honours double-quoted fields.
std::vector<std::string> split(std::string_view line);

/// Reads all non-empty records, stripping a trailing '\r'.
std::vector<std::vector<std::string>> read_all(std::istream& in);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::string trim(std::string_view text);

}  // namespace satdelay::csv
