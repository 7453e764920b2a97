#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cyic {

/// Closed range of calendar years [start, end].
struct YearWindow {
  int start = 1981;
  int end = 2020;

  constexpr std::size_t size() const noexcept {
    return end < start ? 0 : static_cast<std::size_t>(end - start + 1);
  }
  constexpr bool empty() const noexcept { return end < start; }
  constexpr bool contains(int year) const noexcept { return year >= start && year <= end; }
  constexpr std::size_t index_of(int year) const noexcept {
    return static_cast<std::size_t>(year - start);
  }
  constexpr int year_at(std::size_t index) const noexcept {
    return start + static_cast<int>(index);
  }

  friend constexpr bool operator==(const YearWindow&, const YearWindow&) = default;

  /// Parses "1981:2020". Throws ConfigError on bad syntax or an empty range.
  static YearWindow parse(std::string_view text);
  std::string to_string() const;
};

}  // namespace cyic
