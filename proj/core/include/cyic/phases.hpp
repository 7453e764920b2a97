#pragma once

#include "cyic/taxonomy.hpp"
#include "cyic/years.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cyic {

/// Cross-cluster activity in one year.
struct AnnualActivity {
  int year = 0;
  std::uint64_t cross_cluster_events = 0;
  /// Distinct clusters touched by that year's cross-cluster events.
  std::uint64_t participating_clusters = 0;
  std::uint64_t total_citations = 0;

  friend bool operator==(const AnnualActivity&, const AnnualActivity&) = default;
};

/// One entry per window year. `yearly_citations` is either empty or window-sized.
std::vector<AnnualActivity> annual_activity(std::span<const CyicEvent> events, const ClusterMap& map,
                                            YearWindow window,
                                            std::span<const std::uint64_t> yearly_citations = {},
                                            AssignmentPolicy policy = AssignmentPolicy::Strict);

/// Which prior-years statistic the emergence multipliers apply to.
enum class EmergenceBaseline { PriorMaximum, PriorAverage };

struct SegmentationRules {
  double emergence_count_multiplier = 2.0;
  double emergence_cluster_multiplier = 2.0;
  double acceleration_growth_threshold = 0.5;
  double acceleration_base_threshold = 100.0;
  EmergenceBaseline emergence_baseline = EmergenceBaseline::PriorMaximum;
  /// A firing within this many years of the previous firing is folded into it.
  int collapse_years = 2;

  void validate() const;
};

enum class TurningPointKind { Emergence, Acceleration };
std::string_view to_string(TurningPointKind kind) noexcept;

struct Firing {
  int year = 0;
  TurningPointKind kind = TurningPointKind::Emergence;
  bool kept = false;
};

struct Period {
  std::string label;
  int start = 0;
  int end = 0;

  int years() const noexcept { return end - start + 1; }
  friend bool operator==(const Period&, const Period&) = default;
};

struct PhaseSegmentation {
  YearWindow window;
  std::vector<int> turning_points;
  std::vector<Period> periods;
  std::vector<Firing> firings;

  /// Throws DomainError for a year outside the window.
  const Period& period_of(int year) const;
  /// Throws ConfigError for an unknown label.
  const Period& period(std::string_view label) const;

  /// {schema_version, window, turning_points, periods: [{label, start, end}], firings}
  std::string to_json() const;
  static PhaseSegmentation from_json(std::string_view json);
};

/// "I", "II", ... for 1-based n.
std::string roman_numeral(int n);

/// Builds the periods induced by sorted turning points inside the window.
PhaseSegmentation segment_window(YearWindow window, std::vector<int> turning_points);

/// Requires >= 3 consecutive years. Emergence: this year's count and cluster count reach the
/// multipliers times the prior baseline (prior maxima must be >= 1). Acceleration: last
/// year's count exceeds the base threshold and growth exceeds the growth threshold.
PhaseSegmentation detect_turning_points(std::span<const AnnualActivity> activity,
                                        const SegmentationRules& rules = {});

struct PeriodGrowth {
  Period period;
  std::uint64_t total_events = 0;
  std::string events_per_year;
  /// Change of the per-year average versus the previous period; empty for the first
  /// period or when the previous average is zero.
  std::optional<std::string> events_change;
  std::uint64_t total_citations = 0;
  std::string citations_per_year;
  std::optional<std::string> citations_change;
};

std::vector<PeriodGrowth> growth_stats(std::span<const AnnualActivity> activity,
                                       const PhaseSegmentation& segmentation);

std::string activity_json(std::span<const AnnualActivity> activity);
std::string growth_json(std::span<const PeriodGrowth> growth);

}  // namespace cyic
