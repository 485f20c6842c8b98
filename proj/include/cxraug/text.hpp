/**
 * @file text.hpp
 * @brief Small CSV and number-formatting helpers
 *
 * The CSV dialect is deliberately plain: comma separated, no quoting, so
 * fields must not contain commas or newlines.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cxraug {

std::vector<std::string> split_csv_line(std::string_view line);

std::string strip_cr(std::string line);

/// Whole-token parse; nullopt on trailing garbage or an empty field.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Fixed-point with the given number of decimals.
std::string format_fixed(double value, int decimals);

}  // namespace cxraug
