#pragma once

// Locale-independent number formatting and parsing plus small line helpers
// shared by every reader and writer.

#include <string>
#include <string_view>
#include <vector>

namespace subinfo::text {

// Shortest representation that reads back to the same double.
std::string format_double(double x);

// Fixed-point with `decimals` digits after the dot.
std::string format_fixed(double x, int decimals);

// Whole token must be a number; `what` names the field in the ParseError.
double parse_double(std::string_view token, std::string_view what);
long long parse_int(std::string_view token, std::string_view what);

// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(std::string_view s);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view s);

std::string read_file(const std::string& path);

// Writes to `path` + ".tmp" then renames, so readers never see partial files.
void write_file(const std::string& path, std::string_view contents);

}  // namespace subinfo::text
