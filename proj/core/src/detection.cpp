#include "cyic/detection.hpp"

#include "cyic/error.hpp"
#include "cyic/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cyic {

std::string_view to_string(SigmaKind kind) noexcept {
  return kind == SigmaKind::Population ? "population" : "sample";
}

std::string_view to_string(MedianScope scope) noexcept {
  return scope == MedianScope::AllPairYearValues ? "all-pair-year-values" : "pair-means";
}

std::string_view to_string(SlopeMethod) noexcept { return "backward-difference"; }

SigmaKind parse_sigma_kind(std::string_view text) {
  if (text == "population") return SigmaKind::Population;
  if (text == "sample") return SigmaKind::Sample;
  throw ConfigError("sigma kind must be population|sample, got '" + std::string(text) + "'");
}

MedianScope parse_median_scope(std::string_view text) {
  if (text == "all-pair-year-values") return MedianScope::AllPairYearValues;
  if (text == "pair-means") return MedianScope::PairMeans;
  throw ConfigError("median scope must be all-pair-year-values|pair-means, got '" +
                    std::string(text) + "'");
}

void DetectionParams::validate() const {
  if (!(sigma_multiplier > 0.0) || !std::isfinite(sigma_multiplier)) {
    throw ConfigError("sigma multiplier must be positive, got " + std::to_string(sigma_multiplier));
  }
}

bool event_order(const CyicEvent& lhs, const CyicEvent& rhs) {
  if (lhs.year != rhs.year) return lhs.year < rhs.year;
  return lhs.pair < rhs.pair;
}

namespace {

double median_of(std::vector<double>& values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double mean_of(const std::vector<double>& z) {
  double sum = 0.0;
  for (double v : z) sum += v;
  return sum / static_cast<double>(z.size());
}

}  // namespace

double global_median(std::span<const MetricSeries> series, const DetectionParams& params) {
  std::vector<double> pooled;
  if (params.median_scope == MedianScope::PairMeans) {
    pooled.reserve(series.size());
    for (const auto& s : series) {
      if (!s.z.empty()) pooled.push_back(mean_of(s.z));
    }
  } else {
    std::size_t total = 0;
    for (const auto& s : series) total += s.size();
    pooled.reserve(total);
    for (const auto& s : series) pooled.insert(pooled.end(), s.z.begin(), s.z.end());
  }
  if (pooled.empty()) throw DomainError("global median of an empty collection");
  return median_of(pooled);
}

PairStats pair_stats(const MetricSeries& series, const DetectionParams& params) {
  const std::size_t n = series.size();
  if (n < 2) throw DomainError("pair statistics need a window of at least 2 years");
  PairStats out;
  out.mean = mean_of(series.z);
  double ss = 0.0;
  for (double v : series.z) ss += (v - out.mean) * (v - out.mean);
  const double denom = params.sigma_kind == SigmaKind::Population ? static_cast<double>(n)
                                                                   : static_cast<double>(n - 1);
  out.sigma = std::sqrt(ss / denom);
  return out;
}

double slope_at(const MetricSeries& series, int year, const DetectionParams&) {
  if (year <= series.start_year || year >= series.year_at(series.size())) {
    throw DomainError("slope undefined at year " + std::to_string(year) + " (series starts " +
                      std::to_string(series.start_year) + ")");
  }
  const auto t = static_cast<std::size_t>(year - series.start_year);
  return series.z[t] - series.z[t - 1];
}

std::vector<CyicEvent> detect_with_median(std::span<const MetricSeries> series,
                                          const DetectionParams& params, double median,
                                          unsigned threads) {
  params.validate();
  std::vector<std::vector<CyicEvent>> per_pair(series.size());
  parallel_for(series.size(), threads, [&](std::size_t i) {
    const MetricSeries& s = series[i];
    const PairStats stats = pair_stats(s, params);
    if (!(stats.mean > median)) return;
    const double threshold = params.sigma_multiplier * stats.sigma;
    for (std::size_t t = 1; t < s.size(); ++t) {
      const double slope = s.z[t] - s.z[t - 1];
      if (slope > threshold && s.z[t] > stats.mean) {
        per_pair[i].push_back({s.pair, s.year_at(t), s.z[t], slope, stats.mean, stats.sigma, median,
                               std::nullopt});
      }
    }
  });
  std::vector<CyicEvent> events;
  for (auto& v : per_pair) {
    events.insert(events.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  std::stable_sort(events.begin(), events.end(), event_order);
  return events;
}

Detection detect(std::span<const MetricSeries> series, const DetectionParams& params,
                 unsigned threads) {
  params.validate();
  Detection out;
  out.global_median = global_median(series, params);
  out.events = detect_with_median(series, params, out.global_median, threads);
  return out;
}

}  // namespace cyic
