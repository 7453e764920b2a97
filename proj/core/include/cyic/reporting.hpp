#pragma once

#include "cyic/corpus.hpp"
#include "cyic/phases.hpp"
#include "cyic/taxonomy.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cyic {

/// (part / whole) * 100 rounded half-up to 2 decimals plus "%". Throws DomainError when
/// whole == 0 or part > whole.
std::string format_percentage(std::uint64_t part, std::uint64_t whole);

/// Relative change from `before` to `after`, e.g. (125, 206) -> "64.80%".
std::string format_growth(std::uint64_t before, std::uint64_t after);

struct RankingRow {
  int rank = 0;
  std::string cluster;
  std::uint64_t count = 0;
};

/// Clusters by cross-cluster event count within one period. Each cross-cluster event
/// counts once for both of its clusters, so the row counts sum to twice `unique_events`.
struct ClusterPeriodRanking {
  Period period;
  std::vector<RankingRow> rows;
  std::uint64_t unique_events = 0;
  std::string per_year;
};

std::vector<ClusterPeriodRanking> rank_clusters(std::span<const CyicEvent> events,
                                                const PhaseSegmentation& segmentation,
                                                const ClusterMap& map,
                                                AssignmentPolicy policy = AssignmentPolicy::Strict);

/// Difference of per-cluster-pair event counts between two periods (b - a).
/// The diagonal carries intra-cluster deltas; row totals sum the off-diagonal entries.
struct DeltaMatrix {
  std::string period_a;
  std::string period_b;
  std::vector<std::string> clusters;
  std::vector<ClusterGroup> groups;
  std::vector<std::vector<std::int64_t>> matrix;
  std::vector<std::int64_t> row_totals;
};

struct DeltaOptions {
  std::vector<std::string> exclude{"General"};
};

/// Clusters are ordered natural first, then humanities & social, each alphabetically.
DeltaMatrix delta_matrix(std::span<const CyicEvent> events, const PhaseSegmentation& segmentation,
                         std::string_view period_a, std::string_view period_b, const ClusterMap& map,
                         const DeltaOptions& options = {},
                         AssignmentPolicy policy = AssignmentPolicy::Strict);

struct PartnerCount {
  std::string cluster;
  std::uint64_t count = 0;
};

struct PartnerYear {
  int year = 0;
  std::vector<PartnerCount> partners;
  /// Set when equal counts were ordered alphabetically among the top k or at the cut.
  bool tie = false;
};

struct PartnerTimeline {
  std::string focal;
  std::size_t k = 0;
  std::vector<PartnerYear> years;
  /// Whole-window totals for every partner, sorted like the yearly lists.
  std::vector<PartnerCount> totals;
};

PartnerTimeline partner_timeline(std::span<const CyicEvent> events, std::string_view focal,
                                 std::size_t k, const ClusterMap& map, YearWindow window,
                                 AssignmentPolicy policy = AssignmentPolicy::Strict);

/// cluster -> per-window-year count of papers with at least one subject in the cluster.
using ClusterPublications = std::map<std::string, std::vector<std::uint64_t>>;

ClusterPublications cluster_publications(const Corpus& corpus, const ClusterMap& map,
                                         YearWindow window,
                                         AssignmentPolicy policy = AssignmentPolicy::Strict);

struct ClusterYear {
  int year = 0;
  std::uint64_t intra_events = 0;
  std::uint64_t cross_events = 0;
  std::uint64_t publications = 0;
};

struct ClusterTimeline {
  std::string cluster;
  ClusterGroup group = ClusterGroup::Natural;
  std::vector<ClusterYear> years;
};

struct PairLine {
  std::string a;
  std::string b;
  int year = 0;
  std::uint64_t events = 0;
  double mean_z = 0.0;
};

struct TimelineExport {
  YearWindow window;
  std::vector<ClusterTimeline> clusters;
  std::vector<PairLine> pair_lines;
};

TimelineExport export_timeline(std::span<const CyicEvent> events, const ClusterPublications& publications,
                               const ClusterMap& map, YearWindow window,
                               AssignmentPolicy policy = AssignmentPolicy::Strict);

std::string rankings_json(std::span<const ClusterPeriodRanking> rankings);
/// `rank,cluster,count` for one period.
std::string ranking_csv(const ClusterPeriodRanking& ranking);
std::string delta_matrix_json(const DeltaMatrix& delta);
/// Header row of cluster names plus a trailing `total` column.
std::string delta_matrix_csv(const DeltaMatrix& delta);
std::string partner_timeline_json(const PartnerTimeline& timeline);
std::string timeline_json(const TimelineExport& timeline);

}  // namespace cyic
