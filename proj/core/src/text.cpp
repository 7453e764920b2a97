#include "cyic/text.hpp"

#include "cyic/error.hpp"
#include "cyic/years.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace cyic::text {

std::string_view trim(std::string_view s) noexcept {
  constexpr std::string_view ws = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const auto pos = s.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(begin));
      return out;
    }
    out.push_back(s.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

std::optional<std::int64_t> parse_int(std::string_view s) noexcept {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view s) noexcept {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

__extension__ using wide = __int128;

std::string ratio_2dp(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("ratio with zero denominator");
  wide n = num;
  wide d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const bool negative = n < 0;
  if (negative) n = -n;
  // hundredths, ties away from zero: floor((200n + d) / 2d)
  const wide scaled = (n * 200 + d) / (d * 2);
  const auto whole = static_cast<unsigned long long>(scaled / 100);
  const auto frac = static_cast<unsigned>(scaled % 100);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%llu.%02u", (negative && scaled != 0) ? "-" : "", whole,
                frac);
  return buf;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf, static_cast<std::size_t>(len));
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(std::move(current));
  return out;
}

}  // namespace cyic::text

namespace cyic {

YearWindow YearWindow::parse(std::string_view text) {
  const auto parts = text::split(text, ':');
  if (parts.size() != 2) throw ConfigError("window must look like START:END, got '" + std::string(text) + "'");
  const auto start = text::parse_int(parts[0]);
  const auto end = text::parse_int(parts[1]);
  if (!start || !end) throw ConfigError("window bounds must be integers: '" + std::string(text) + "'");
  YearWindow w{static_cast<int>(*start), static_cast<int>(*end)};
  if (w.empty()) throw ConfigError("empty window '" + std::string(text) + "'");
  return w;
}

std::string YearWindow::to_string() const {
  return std::to_string(start) + ":" + std::to_string(end);
}

}  // namespace cyic
