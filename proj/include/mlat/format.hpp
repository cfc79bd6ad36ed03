#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mlat {

// Locale independent, shortest round-trip representation.
std::string format_double(double v);

// Fixed 9 significant digits, used by the result tables.
std::string format_double9(double v);

// Strict full-string parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);

// Plain comma split, no quoting rules.
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace mlat
