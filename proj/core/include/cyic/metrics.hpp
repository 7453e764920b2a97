#pragma once

#include "cyic/aggregation.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace cyic {

/// Interdisciplinary balance, 1 - |ir - ic| / max(ir, ic). Defined as 0 when both are 0.
double compute_ib(double ir, double ic) noexcept;

/// Knowledge flow, ir/2 + ic/2.
double compute_kf(double ir, double ic) noexcept;

/// Per-year balance, flow and their product z = ib * kf for one pair.
struct MetricSeries {
  SubjectPair pair;
  int start_year = 0;
  std::vector<double> ib;
  std::vector<double> kf;
  std::vector<double> z;

  std::size_t size() const noexcept { return z.size(); }
  int year_at(std::size_t t) const noexcept { return start_year + static_cast<int>(t); }
};

MetricSeries compute_metric_series(const PairSeries& series);

/// Metric series for every pair, in table order.
std::vector<MetricSeries> compute_metrics(const PairTable& table, unsigned threads = 1);

/// `a<TAB>b<TAB>year<TAB>ib<TAB>kf<TAB>z`, 6-decimal fixed.
void write_metric_dump(std::span<const MetricSeries> series, const std::filesystem::path& path);

}  // namespace cyic
