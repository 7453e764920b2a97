#pragma once

#include "cyic/detection.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cyic {

enum class ClusterGroup { Natural, HumanitiesSocial, Unassigned };

/// "natural", "humsoc" or "unassigned".
std::string_view to_string(ClusterGroup group) noexcept;
/// Accepts the file tags "natural" and "humsoc" only.
ClusterGroup parse_cluster_group(std::string_view tag);

/// What to do with subjects missing from the map.
enum class AssignmentPolicy { Strict, Lenient };

/// Reserved cluster for unmapped subjects under the lenient policy.
inline constexpr std::string_view kUnassignedCluster = "Unassigned";

struct ClusterRow {
  std::string subject;
  std::string cluster;
  ClusterGroup group = ClusterGroup::Natural;
};

/// Subject -> discipline cluster assignment plus the cluster -> group split.
class ClusterMap {
 public:
  ClusterMap() = default;

  /// Throws InputError on duplicate subjects, empty names, or a cluster tagged with two
  /// different groups.
  static ClusterMap from_rows(std::span<const ClusterRow> rows);

  /// Throws DomainError naming the subject under the strict policy when it is unmapped.
  const std::string& cluster_of(std::string_view subject,
                                AssignmentPolicy policy = AssignmentPolicy::Strict) const;
  bool has_subject(std::string_view subject) const;
  bool has_cluster(std::string_view cluster) const;
  /// The Unassigned cluster maps to ClusterGroup::Unassigned; unknown names throw.
  ClusterGroup group_of(std::string_view cluster) const;

  /// Distinct cluster names, sorted.
  std::vector<std::string> clusters() const;
  /// Rows sorted by subject.
  std::vector<ClusterRow> rows() const;
  std::size_t subject_count() const noexcept { return assignments_.size(); }
  std::size_t cluster_count() const noexcept { return groups_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> assignments_;
  std::map<std::string, ClusterGroup, std::less<>> groups_;
};

/// Reads `subject<TAB>cluster<TAB>group` (header required, group in {natural, humsoc}).
ClusterMap load_cluster_map(const std::filesystem::path& path);
void write_cluster_map(const ClusterMap& map, const std::filesystem::path& path);

struct ClassificationSummary {
  std::uint64_t cross = 0;
  std::uint64_t intra = 0;

  std::uint64_t total() const noexcept { return cross + intra; }
  /// e.g. "92.06%"; throws DomainError when there are no events.
  std::string cross_share() const;
  /// One-line human summary, "<cross> cross-cluster + <intra> intra-cluster = <total> (<share>)".
  std::string report() const;
};

/// Sets cross_cluster = (cluster(a) != cluster(b)) on every event.
ClassificationSummary classify_events(std::span<CyicEvent> events, const ClusterMap& map,
                                      AssignmentPolicy policy = AssignmentPolicy::Strict);

/// Counts already-classified events; throws DomainError on an unclassified one.
ClassificationSummary summarize_classification(std::span<const CyicEvent> events);

}  // namespace cyic
