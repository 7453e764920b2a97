#include "cyic/reporting.hpp"

#include "cyic/error.hpp"
#include "cyic/schema.hpp"
#include "cyic/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <unordered_map>

namespace cyic {

using nlohmann::ordered_json;

std::string format_percentage(std::uint64_t part, std::uint64_t whole) {
  if (whole == 0) throw DomainError("percentage of a zero whole");
  if (part > whole) throw DomainError("percentage part exceeds whole");
  return text::ratio_2dp(static_cast<std::int64_t>(part) * 100, static_cast<std::int64_t>(whole)) + "%";
}

std::string format_growth(std::uint64_t before, std::uint64_t after) {
  if (before == 0) throw DomainError("growth from a zero base");
  const auto delta = static_cast<std::int64_t>(after) - static_cast<std::int64_t>(before);
  return text::ratio_2dp(delta * 100, static_cast<std::int64_t>(before)) + "%";
}

namespace {

/// Map clusters plus Unassigned when some event falls there.
std::vector<std::string> cluster_universe(std::span<const CyicEvent> events, const ClusterMap& map,
                                          AssignmentPolicy policy) {
  auto clusters = map.clusters();
  bool unassigned = false;
  for (const auto& e : events) {
    unassigned = unassigned || map.cluster_of(e.pair.a, policy) == kUnassignedCluster ||
                 map.cluster_of(e.pair.b, policy) == kUnassignedCluster;
  }
  if (unassigned && !map.has_cluster(kUnassignedCluster)) {
    clusters.emplace_back(kUnassignedCluster);
    std::sort(clusters.begin(), clusters.end());
  }
  return clusters;
}

bool count_then_name(const PartnerCount& l, const PartnerCount& r) {
  if (l.count != r.count) return l.count > r.count;
  return l.cluster < r.cluster;
}

}  // namespace

std::vector<ClusterPeriodRanking> rank_clusters(std::span<const CyicEvent> events,
                                                const PhaseSegmentation& segmentation,
                                                const ClusterMap& map, AssignmentPolicy policy) {
  const auto clusters = cluster_universe(events, map, policy);
  std::vector<ClusterPeriodRanking> out;
  for (const auto& period : segmentation.periods) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& c : clusters) counts[c] = 0;
    ClusterPeriodRanking ranking;
    ranking.period = period;
    for (const auto& e : events) {
      if (e.year < period.start || e.year > period.end) continue;
      const auto& x = map.cluster_of(e.pair.a, policy);
      const auto& y = map.cluster_of(e.pair.b, policy);
      if (x == y) continue;
      ++counts[x];
      ++counts[y];
      ++ranking.unique_events;
    }
    std::vector<PartnerCount> sorted;
    for (const auto& [cluster, count] : counts) sorted.push_back({cluster, count});
    std::sort(sorted.begin(), sorted.end(), count_then_name);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      ranking.rows.push_back({static_cast<int>(i) + 1, sorted[i].cluster, sorted[i].count});
    }
    ranking.per_year = text::ratio_2dp(static_cast<std::int64_t>(ranking.unique_events), period.years());
    out.push_back(std::move(ranking));
  }
  return out;
}

DeltaMatrix delta_matrix(std::span<const CyicEvent> events, const PhaseSegmentation& segmentation,
                         std::string_view period_a, std::string_view period_b, const ClusterMap& map,
                         const DeltaOptions& options, AssignmentPolicy policy) {
  const Period& pa = segmentation.period(period_a);
  const Period& pb = segmentation.period(period_b);

  DeltaMatrix delta;
  delta.period_a = pa.label;
  delta.period_b = pb.label;
  const std::set<std::string, std::less<>> excluded(options.exclude.begin(), options.exclude.end());
  std::vector<std::pair<ClusterGroup, std::string>> ordered;
  for (auto& c : cluster_universe(events, map, policy)) {
    if (!excluded.contains(c)) ordered.emplace_back(map.group_of(c), std::move(c));
  }
  std::sort(ordered.begin(), ordered.end());
  std::unordered_map<std::string, std::size_t> index;
  for (auto& [group, name] : ordered) {
    index.emplace(name, delta.clusters.size());
    delta.clusters.push_back(name);
    delta.groups.push_back(group);
  }
  const std::size_t n = delta.clusters.size();
  delta.matrix.assign(n, std::vector<std::int64_t>(n, 0));

  const auto tally = [&](const Period& p, std::int64_t sign) {
    for (const auto& e : events) {
      if (e.year < p.start || e.year > p.end) continue;
      const auto xi = index.find(map.cluster_of(e.pair.a, policy));
      const auto yi = index.find(map.cluster_of(e.pair.b, policy));
      if (xi == index.end() || yi == index.end()) continue;
      const std::size_t i = xi->second;
      const std::size_t j = yi->second;
      delta.matrix[i][j] += sign;
      if (i != j) delta.matrix[j][i] += sign;
    }
  };
  tally(pb, +1);
  tally(pa, -1);

  delta.row_totals.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) delta.row_totals[i] += delta.matrix[i][j];
    }
  }
  return delta;
}

PartnerTimeline partner_timeline(std::span<const CyicEvent> events, std::string_view focal,
                                 std::size_t k, const ClusterMap& map, YearWindow window,
                                 AssignmentPolicy policy) {
  if (!map.has_cluster(focal) && !(policy == AssignmentPolicy::Lenient && focal == kUnassignedCluster)) {
    throw DomainError("focal cluster '" + std::string(focal) + "' is not in the cluster map");
  }
  PartnerTimeline timeline;
  timeline.focal = std::string(focal);
  timeline.k = k;

  std::vector<std::map<std::string, std::uint64_t>> per_year(window.size());
  std::map<std::string, std::uint64_t> totals;
  for (const auto& e : events) {
    if (!window.contains(e.year)) continue;
    const auto& x = map.cluster_of(e.pair.a, policy);
    const auto& y = map.cluster_of(e.pair.b, policy);
    if (x == y || (x != focal && y != focal)) continue;
    const std::string& partner = x == focal ? y : x;
    ++per_year[window.index_of(e.year)][partner];
    ++totals[partner];
  }

  for (std::size_t t = 0; t < window.size(); ++t) {
    std::vector<PartnerCount> ranked;
    for (const auto& [cluster, count] : per_year[t]) ranked.push_back({cluster, count});
    std::sort(ranked.begin(), ranked.end(), count_then_name);
    PartnerYear year{window.year_at(t), {}, false};
    const std::size_t considered = std::min(ranked.size(), k + 1);
    for (std::size_t i = 1; i < considered; ++i) {
      if (ranked[i].count == ranked[i - 1].count) year.tie = true;
    }
    if (ranked.size() > k) ranked.resize(k);
    year.partners = std::move(ranked);
    timeline.years.push_back(std::move(year));
  }
  for (const auto& [cluster, count] : totals) timeline.totals.push_back({cluster, count});
  std::sort(timeline.totals.begin(), timeline.totals.end(), count_then_name);
  return timeline;
}

ClusterPublications cluster_publications(const Corpus& corpus, const ClusterMap& map, YearWindow window,
                                         AssignmentPolicy policy) {
  ClusterPublications out;
  for (const auto& c : map.clusters()) out[c].assign(window.size(), 0);
  std::vector<const std::string*> subject_cluster;
  for (const auto& label : corpus.subject_labels()) subject_cluster.push_back(&map.cluster_of(label, policy));

  std::vector<const std::string*> seen;
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p) {
    if (!window.contains(corpus.year(p))) continue;
    seen.clear();
    for (SubjectId s : corpus.subjects(p)) {
      const std::string* c = subject_cluster[s];
      if (std::find_if(seen.begin(), seen.end(), [&](const std::string* v) { return *v == *c; }) != seen.end()) {
        continue;
      }
      seen.push_back(c);
      auto& series = out[*c];
      if (series.empty()) series.assign(window.size(), 0);
      ++series[window.index_of(corpus.year(p))];
    }
  }
  return out;
}

TimelineExport export_timeline(std::span<const CyicEvent> events, const ClusterPublications& publications,
                               const ClusterMap& map, YearWindow window, AssignmentPolicy policy) {
  TimelineExport out;
  out.window = window;
  const auto clusters = cluster_universe(events, map, policy);
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& c : clusters) {
    index.emplace(c, out.clusters.size());
    ClusterTimeline ct{c, map.group_of(c), {}};
    const auto pubs = publications.find(c);
    for (std::size_t t = 0; t < window.size(); ++t) {
      std::uint64_t p = 0;
      if (pubs != publications.end() && t < pubs->second.size()) p = pubs->second[t];
      ct.years.push_back({window.year_at(t), 0, 0, p});
    }
    out.clusters.push_back(std::move(ct));
  }

  struct LineAcc {
    std::uint64_t events = 0;
    double z_sum = 0.0;
  };
  std::map<std::tuple<std::string, std::string, int>, LineAcc> lines;
  for (const auto& e : events) {
    if (!window.contains(e.year)) continue;
    const std::size_t t = window.index_of(e.year);
    const auto& x = map.cluster_of(e.pair.a, policy);
    const auto& y = map.cluster_of(e.pair.b, policy);
    if (x == y) {
      ++out.clusters[index.at(x)].years[t].intra_events;
      continue;
    }
    ++out.clusters[index.at(x)].years[t].cross_events;
    ++out.clusters[index.at(y)].years[t].cross_events;
    auto& acc = lines[{std::min(x, y), std::max(x, y), e.year}];
    ++acc.events;
    acc.z_sum += e.z_value;
  }
  for (const auto& [key, acc] : lines) {
    const auto& [a, b, year] = key;
    out.pair_lines.push_back({a, b, year, acc.events, acc.z_sum / static_cast<double>(acc.events)});
  }
  return out;
}

std::string rankings_json(std::span<const ClusterPeriodRanking> rankings) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "rankings";
  j["periods"] = ordered_json::array();
  for (const auto& r : rankings) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) rows.push_back({{"rank", row.rank}, {"cluster", row.cluster}, {"count", row.count}});
    j["periods"].push_back({{"label", r.period.label},
                            {"start", r.period.start},
                            {"end", r.period.end},
                            {"rows", rows},
                            {"unique_events", r.unique_events},
                            {"per_year", r.per_year}});
  }
  return j.dump(2);
}

std::string ranking_csv(const ClusterPeriodRanking& ranking) {
  std::string out = "rank,cluster,count\n";
  for (const auto& row : ranking.rows) {
    out += std::to_string(row.rank) + "," + text::csv_field(row.cluster) + "," + std::to_string(row.count) + "\n";
  }
  return out;
}

std::string delta_matrix_json(const DeltaMatrix& delta) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "delta-matrix";
  j["period_a"] = delta.period_a;
  j["period_b"] = delta.period_b;
  j["clusters"] = delta.clusters;
  j["groups"] = ordered_json::array();
  for (auto g : delta.groups) j["groups"].push_back(to_string(g));
  j["matrix"] = delta.matrix;
  j["row_totals"] = delta.row_totals;
  return j.dump(2);
}

std::string delta_matrix_csv(const DeltaMatrix& delta) {
  std::string out = "cluster";
  for (const auto& c : delta.clusters) out += "," + text::csv_field(c);
  out += ",total\n";
  for (std::size_t i = 0; i < delta.clusters.size(); ++i) {
    out += text::csv_field(delta.clusters[i]);
    for (auto v : delta.matrix[i]) out += "," + std::to_string(v);
    out += "," + std::to_string(delta.row_totals[i]) + "\n";
  }
  return out;
}

std::string partner_timeline_json(const PartnerTimeline& timeline) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "partner-evolution";
  j["focal"] = timeline.focal;
  j["k"] = timeline.k;
  const auto counts = [](const std::vector<PartnerCount>& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : v) arr.push_back({{"cluster", p.cluster}, {"count", p.count}});
    return arr;
  };
  j["years"] = ordered_json::array();
  for (const auto& y : timeline.years) {
    j["years"].push_back({{"year", y.year}, {"partners", counts(y.partners)}, {"tie", y.tie}});
  }
  j["totals"] = counts(timeline.totals);
  return j.dump(2);
}

std::string timeline_json(const TimelineExport& timeline) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "timeline";
  j["window"] = {timeline.window.start, timeline.window.end};
  j["clusters"] = ordered_json::array();
  for (const auto& c : timeline.clusters) {
    ordered_json years = ordered_json::array();
    for (const auto& y : c.years) {
      years.push_back({{"year", y.year},
                       {"intra_events", y.intra_events},
                       {"cross_events", y.cross_events},
                       {"publications", y.publications}});
    }
    j["clusters"].push_back({{"cluster", c.cluster}, {"group", to_string(c.group)}, {"years", years}});
  }
  j["pair_lines"] = ordered_json::array();
  for (const auto& l : timeline.pair_lines) {
    j["pair_lines"].push_back(
        {{"a", l.a}, {"b", l.b}, {"year", l.year}, {"events", l.events}, {"mean_z", l.mean_z}});
  }
  return j.dump(2);
}

}  // namespace cyic
