#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cyic::text {

std::string_view trim(std::string_view s) noexcept;

/// Splits on `sep` keeping empty fields ("a;;b" -> {"a", "", "b"}).
std::vector<std::string_view> split(std::string_view s, char sep);

std::optional<std::int64_t> parse_int(std::string_view s) noexcept;
std::optional<double> parse_double(std::string_view s) noexcept;

/// num/den rounded half-up (ties away from zero) to two decimals, computed exactly in
/// integer arithmetic. Throws DomainError when den == 0.
std::string ratio_2dp(std::int64_t num, std::int64_t den);

/// printf-style fixed formatting, used for the diffable metric dumps.
std::string fixed(double value, int decimals);

/// Shortest representation that round-trips through strtod.
std::string shortest(double value);

/// RFC 4180 field quoting: only quotes when the field holds a comma, quote or newline.
std::string csv_field(std::string_view field);

/// Inverse of csv_field for a single line (no embedded newlines).
std::vector<std::string> parse_csv_line(std::string_view line);

}  // namespace cyic::text
