#pragma once

#include "cyic/metrics.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cyic {

enum class SigmaKind { Population, Sample };
enum class MedianScope {
  /// Median over every z value of every surviving pair (default).
  AllPairYearValues,
  /// Median over the per-pair means. Non-default alternative reading of condition 1.
  PairMeans,
};
enum class SlopeMethod { BackwardDifference };

std::string_view to_string(SigmaKind kind) noexcept;
std::string_view to_string(MedianScope scope) noexcept;
std::string_view to_string(SlopeMethod method) noexcept;
SigmaKind parse_sigma_kind(std::string_view text);
MedianScope parse_median_scope(std::string_view text);

struct DetectionParams {
  double sigma_multiplier = 2.0;
  MedianScope median_scope = MedianScope::AllPairYearValues;
  SlopeMethod slope_method = SlopeMethod::BackwardDifference;
  SigmaKind sigma_kind = SigmaKind::Population;

  /// Throws ConfigError unless sigma_multiplier is a positive finite number.
  void validate() const;
};

/// A critical year for one pair together with the values each condition compared.
struct CyicEvent {
  SubjectPair pair;
  int year = 0;
  double z_value = 0.0;
  double slope = 0.0;
  double pair_mean = 0.0;
  double pair_sigma = 0.0;
  double global_median = 0.0;
  /// Unset until the events are classified against a cluster map.
  std::optional<bool> cross_cluster;

  friend bool operator==(const CyicEvent&, const CyicEvent&) = default;
};

/// Output order: year, then pair.
bool event_order(const CyicEvent& lhs, const CyicEvent& rhs);

struct PairStats {
  double mean = 0.0;
  double sigma = 0.0;
};

/// Throws DomainError on empty input. Even counts average the two central values.
double global_median(std::span<const MetricSeries> series, const DetectionParams& params = {});

/// Mean and standard deviation over the whole window, zeros included. Requires >= 2 years.
PairStats pair_stats(const MetricSeries& series, const DetectionParams& params = {});

/// z[year] - z[year - 1]. Throws DomainError for the first window year or a year outside
/// the series.
double slope_at(const MetricSeries& series, int year, const DetectionParams& params = {});

/// Applies the three conditions against a given median. All comparisons are strict.
std::vector<CyicEvent> detect_with_median(std::span<const MetricSeries> series,
                                          const DetectionParams& params, double median,
                                          unsigned threads = 1);

struct Detection {
  double global_median = 0.0;
  std::vector<CyicEvent> events;
};

Detection detect(std::span<const MetricSeries> series, const DetectionParams& params = {},
                 unsigned threads = 1);

}  // namespace cyic
