#include "cyic/taxonomy.hpp"

#include "cyic/error.hpp"
#include "cyic/io.hpp"
#include "cyic/text.hpp"

namespace cyic {

std::string_view to_string(ClusterGroup group) noexcept {
  switch (group) {
    case ClusterGroup::Natural:
      return "natural";
    case ClusterGroup::HumanitiesSocial:
      return "humsoc";
    case ClusterGroup::Unassigned:
      break;
  }
  return "unassigned";
}

ClusterGroup parse_cluster_group(std::string_view tag) {
  if (tag == "natural") return ClusterGroup::Natural;
  if (tag == "humsoc") return ClusterGroup::HumanitiesSocial;
  throw InputError("unknown group tag '" + std::string(tag) + "' (expected natural|humsoc)");
}

ClusterMap ClusterMap::from_rows(std::span<const ClusterRow> rows) {
  ClusterMap map;
  for (const auto& row : rows) {
    if (row.subject.empty()) throw InputError("empty subject in cluster map");
    if (row.cluster.empty()) throw InputError("empty cluster name for subject '" + row.subject + "'");
    if (!map.assignments_.emplace(row.subject, row.cluster).second) {
      throw InputError("duplicate subject '" + row.subject + "' in cluster map");
    }
    const auto [it, inserted] = map.groups_.emplace(row.cluster, row.group);
    if (!inserted && it->second != row.group) {
      throw InputError("cluster '" + row.cluster + "' tagged with two different groups");
    }
  }
  return map;
}

const std::string& ClusterMap::cluster_of(std::string_view subject, AssignmentPolicy policy) const {
  static const std::string unassigned(kUnassignedCluster);
  const auto it = assignments_.find(subject);
  if (it != assignments_.end()) return it->second;
  if (policy == AssignmentPolicy::Lenient) return unassigned;
  throw DomainError("subject '" + std::string(subject) + "' has no cluster assignment");
}

bool ClusterMap::has_subject(std::string_view subject) const {
  return assignments_.find(subject) != assignments_.end();
}

bool ClusterMap::has_cluster(std::string_view cluster) const {
  return groups_.find(cluster) != groups_.end();
}

ClusterGroup ClusterMap::group_of(std::string_view cluster) const {
  const auto it = groups_.find(cluster);
  if (it != groups_.end()) return it->second;
  if (cluster == kUnassignedCluster) return ClusterGroup::Unassigned;
  throw DomainError("unknown cluster '" + std::string(cluster) + "'");
}

std::vector<std::string> ClusterMap::clusters() const {
  std::vector<std::string> out;
  out.reserve(groups_.size());
  for (const auto& [name, group] : groups_) out.push_back(name);
  return out;
}

std::vector<ClusterRow> ClusterMap::rows() const {
  std::vector<ClusterRow> out;
  out.reserve(assignments_.size());
  for (const auto& [subject, cluster] : assignments_) {
    out.push_back({subject, cluster, groups_.find(cluster)->second});
  }
  return out;
}

ClusterMap load_cluster_map(const std::filesystem::path& path) {
  io::LineReader reader(path);
  std::string_view line;
  if (!reader.next(line)) throw InputError("empty cluster map", path.string());
  const auto header = text::split(line, '\t');
  if (header.size() != 3 || text::trim(header[0]) != "subject" || text::trim(header[1]) != "cluster" ||
      text::trim(header[2]) != "group") {
    throw InputError("bad header, expected subject<TAB>cluster<TAB>group", path.string(), 1);
  }
  std::vector<ClusterRow> rows;
  while (reader.next(line)) {
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 3) {
      throw InputError("expected 3 tab-separated fields", path.string(), reader.line_number());
    }
    try {
      rows.push_back({std::string(text::trim(fields[0])), std::string(text::trim(fields[1])),
                      parse_cluster_group(text::trim(fields[2]))});
    } catch (const InputError& e) {
      throw InputError(e.what(), path.string(), reader.line_number());
    }
  }
  if (rows.empty()) throw InputError("empty cluster map", path.string());
  try {
    return ClusterMap::from_rows(rows);
  } catch (const InputError& e) {
    throw InputError(e.what(), path.string());
  }
}

void write_cluster_map(const ClusterMap& map, const std::filesystem::path& path) {
  io::Writer out(path);
  out << "subject\tcluster\tgroup\n";
  for (const auto& row : map.rows()) {
    out << row.subject << '\t' << row.cluster << '\t' << to_string(row.group) << '\n';
  }
  out.close();
}

std::string ClassificationSummary::cross_share() const {
  if (total() == 0) throw DomainError("no events to take a share of");
  return text::ratio_2dp(static_cast<std::int64_t>(cross) * 100, static_cast<std::int64_t>(total())) + "%";
}

std::string ClassificationSummary::report() const {
  std::string out = std::to_string(cross) + " cross-cluster + " + std::to_string(intra) +
                    " intra-cluster = " + std::to_string(total());
  if (total() > 0) out += " (" + cross_share() + " cross-cluster)";
  return out;
}

ClassificationSummary classify_events(std::span<CyicEvent> events, const ClusterMap& map,
                                      AssignmentPolicy policy) {
  ClassificationSummary summary;
  for (auto& e : events) {
    const bool cross = map.cluster_of(e.pair.a, policy) != map.cluster_of(e.pair.b, policy);
    e.cross_cluster = cross;
    ++(cross ? summary.cross : summary.intra);
  }
  return summary;
}

ClassificationSummary summarize_classification(std::span<const CyicEvent> events) {
  ClassificationSummary summary;
  for (const auto& e : events) {
    if (!e.cross_cluster) throw DomainError("event has not been classified");
    ++(*e.cross_cluster ? summary.cross : summary.intra);
  }
  return summary;
}

}  // namespace cyic
