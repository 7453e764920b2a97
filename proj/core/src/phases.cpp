#include "cyic/phases.hpp"

#include "cyic/error.hpp"
#include "cyic/schema.hpp"
#include "cyic/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace cyic {

using nlohmann::ordered_json;

std::vector<AnnualActivity> annual_activity(std::span<const CyicEvent> events, const ClusterMap& map,
                                            YearWindow window,
                                            std::span<const std::uint64_t> yearly_citations,
                                            AssignmentPolicy policy) {
  if (!yearly_citations.empty() && yearly_citations.size() != window.size()) {
    throw DomainError("yearly citation totals do not match the window length");
  }
  std::vector<AnnualActivity> out(window.size());
  std::vector<std::set<std::string>> touched(window.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t].year = window.year_at(t);
    if (!yearly_citations.empty()) out[t].total_citations = yearly_citations[t];
  }
  for (const auto& e : events) {
    if (!window.contains(e.year)) {
      throw DomainError("event year " + std::to_string(e.year) + " outside window " + window.to_string());
    }
    const auto& x = map.cluster_of(e.pair.a, policy);
    const auto& y = map.cluster_of(e.pair.b, policy);
    if (x == y) continue;
    const std::size_t t = window.index_of(e.year);
    ++out[t].cross_cluster_events;
    touched[t].insert(x);
    touched[t].insert(y);
  }
  for (std::size_t t = 0; t < out.size(); ++t) out[t].participating_clusters = touched[t].size();
  return out;
}

void SegmentationRules::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(emergence_count_multiplier) || !positive(emergence_cluster_multiplier) ||
      !positive(acceleration_growth_threshold) || !positive(acceleration_base_threshold)) {
    throw ConfigError("segmentation thresholds must all be positive");
  }
  if (collapse_years < 0) throw ConfigError("collapse window must be non-negative");
}

std::string_view to_string(TurningPointKind kind) noexcept {
  return kind == TurningPointKind::Emergence ? "emergence" : "acceleration";
}

const Period& PhaseSegmentation::period_of(int year) const {
  for (const auto& p : periods) {
    if (year >= p.start && year <= p.end) return p;
  }
  throw DomainError("year " + std::to_string(year) + " is outside every period");
}

const Period& PhaseSegmentation::period(std::string_view label) const {
  for (const auto& p : periods) {
    if (p.label == label) return p;
  }
  throw ConfigError("unknown period label '" + std::string(label) + "'");
}

std::string PhaseSegmentation::to_json() const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["window"] = {window.start, window.end};
  j["turning_points"] = turning_points;
  j["periods"] = ordered_json::array();
  for (const auto& p : periods) {
    j["periods"].push_back({{"label", p.label}, {"start", p.start}, {"end", p.end}});
  }
  j["firings"] = ordered_json::array();
  for (const auto& f : firings) {
    j["firings"].push_back({{"year", f.year}, {"kind", to_string(f.kind)}, {"kept", f.kept}});
  }
  return j.dump(2);
}

PhaseSegmentation PhaseSegmentation::from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw SchemaError("segmentation schema_version mismatch");
    }
    const auto w = j.at("window");
    PhaseSegmentation seg = segment_window({w.at(0).get<int>(), w.at(1).get<int>()},
                                           j.at("turning_points").get<std::vector<int>>());
    for (const auto& f : j.value("firings", nlohmann::json::array())) {
      seg.firings.push_back({f.at("year").get<int>(),
                             f.at("kind").get<std::string>() == "emergence" ? TurningPointKind::Emergence
                                                                             : TurningPointKind::Acceleration,
                             f.at("kept").get<bool>()});
    }
    return seg;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed segmentation JSON: ") + e.what());
  }
}

std::string roman_numeral(int n) {
  if (n <= 0) throw DomainError("roman numerals start at 1");
  static constexpr std::pair<int, std::string_view> kTable[] = {
      {1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"}, {100, "C"}, {90, "XC"}, {50, "L"},
      {40, "XL"},  {10, "X"},   {9, "IX"},  {5, "V"},    {4, "IV"},  {1, "I"}};
  std::string out;
  for (const auto& [value, glyph] : kTable) {
    while (n >= value) {
      out += glyph;
      n -= value;
    }
  }
  return out;
}

PhaseSegmentation segment_window(YearWindow window, std::vector<int> turning_points) {
  if (window.empty()) throw ConfigError("empty analysis window");
  for (std::size_t i = 0; i < turning_points.size(); ++i) {
    const int tp = turning_points[i];
    if (tp <= window.start || tp > window.end) {
      throw DomainError("turning point " + std::to_string(tp) + " must lie in (" +
                        std::to_string(window.start) + ", " + std::to_string(window.end) + "]");
    }
    if (i > 0 && tp <= turning_points[i - 1]) throw DomainError("turning points must be strictly increasing");
  }
  PhaseSegmentation seg;
  seg.window = window;
  seg.turning_points = std::move(turning_points);
  int start = window.start;
  for (std::size_t i = 0; i <= seg.turning_points.size(); ++i) {
    const int end = i < seg.turning_points.size() ? seg.turning_points[i] - 1 : window.end;
    seg.periods.push_back({roman_numeral(static_cast<int>(i) + 1), start, end});
    start = end + 1;
  }
  return seg;
}

PhaseSegmentation detect_turning_points(std::span<const AnnualActivity> activity,
                                        const SegmentationRules& rules) {
  rules.validate();
  if (activity.size() < 3) throw DomainError("turning point detection needs at least 3 years");
  for (std::size_t i = 1; i < activity.size(); ++i) {
    if (activity[i].year != activity[i - 1].year + 1) {
      throw DomainError("activity years must be consecutive and ascending");
    }
  }

  std::vector<Firing> firings;
  double prior_max_count = 0.0;
  double prior_max_clusters = 0.0;
  double prior_sum_count = 0.0;
  double prior_sum_clusters = 0.0;
  for (std::size_t i = 0; i < activity.size(); ++i) {
    const auto& a = activity[i];
    const double count = static_cast<double>(a.cross_cluster_events);
    const double clusters = static_cast<double>(a.participating_clusters);
    if (i > 0) {
      const double prior_years = static_cast<double>(i);
      const double base_count = rules.emergence_baseline == EmergenceBaseline::PriorMaximum
                                    ? prior_max_count
                                    : prior_sum_count / prior_years;
      const double base_clusters = rules.emergence_baseline == EmergenceBaseline::PriorMaximum
                                       ? prior_max_clusters
                                       : prior_sum_clusters / prior_years;
      const bool emergence = prior_max_count >= 1.0 && prior_max_clusters >= 1.0 &&
                             count >= rules.emergence_count_multiplier * base_count &&
                             clusters >= rules.emergence_cluster_multiplier * base_clusters;

      const double previous = static_cast<double>(activity[i - 1].cross_cluster_events);
      const bool acceleration = previous > rules.acceleration_base_threshold &&
                                (count - previous) / previous > rules.acceleration_growth_threshold;

      if (emergence || acceleration) {
        const bool kept = firings.empty() || a.year - firings.back().year > rules.collapse_years;
        firings.push_back({a.year, emergence ? TurningPointKind::Emergence : TurningPointKind::Acceleration, kept});
      }
    }
    prior_max_count = std::max(prior_max_count, count);
    prior_max_clusters = std::max(prior_max_clusters, clusters);
    prior_sum_count += count;
    prior_sum_clusters += clusters;
  }

  std::vector<int> points;
  for (const auto& f : firings) {
    if (f.kept) points.push_back(f.year);
  }
  PhaseSegmentation seg = segment_window({activity.front().year, activity.back().year}, std::move(points));
  seg.firings = std::move(firings);
  return seg;
}

std::vector<PeriodGrowth> growth_stats(std::span<const AnnualActivity> activity,
                                       const PhaseSegmentation& segmentation) {
  std::vector<PeriodGrowth> out;
  for (const auto& p : segmentation.periods) {
    PeriodGrowth g;
    g.period = p;
    for (const auto& a : activity) {
      if (a.year >= p.start && a.year <= p.end) {
        g.total_events += a.cross_cluster_events;
        g.total_citations += a.total_citations;
      }
    }
    const auto years = static_cast<std::int64_t>(p.years());
    g.events_per_year = text::ratio_2dp(static_cast<std::int64_t>(g.total_events), years);
    g.citations_per_year = text::ratio_2dp(static_cast<std::int64_t>(g.total_citations), years);
    out.push_back(std::move(g));
  }
  // Change of per-year averages: (b/len_b) / (a/len_a) - 1 = (b*len_a - a*len_b) / (a*len_b).
  const auto change = [](std::uint64_t a, int len_a, std::uint64_t b, int len_b) -> std::optional<std::string> {
    if (a == 0) return std::nullopt;
    const auto num = static_cast<std::int64_t>(b) * len_a - static_cast<std::int64_t>(a) * len_b;
    const auto den = static_cast<std::int64_t>(a) * len_b;
    return text::ratio_2dp(num * 100, den) + "%";
  };
  for (std::size_t i = 1; i < out.size(); ++i) {
    const auto& prev = out[i - 1];
    auto& cur = out[i];
    cur.events_change = change(prev.total_events, prev.period.years(), cur.total_events, cur.period.years());
    cur.citations_change =
        change(prev.total_citations, prev.period.years(), cur.total_citations, cur.period.years());
  }
  return out;
}

std::string activity_json(std::span<const AnnualActivity> activity) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["years"] = ordered_json::array();
  for (const auto& a : activity) {
    j["years"].push_back({{"year", a.year},
                          {"cross_cluster_events", a.cross_cluster_events},
                          {"participating_clusters", a.participating_clusters},
                          {"total_citations", a.total_citations}});
  }
  return j.dump(2);
}

std::string growth_json(std::span<const PeriodGrowth> growth) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["periods"] = ordered_json::array();
  const auto opt = [](const std::optional<std::string>& s) -> ordered_json {
    return s ? ordered_json(*s) : ordered_json(nullptr);
  };
  for (const auto& g : growth) {
    j["periods"].push_back({{"label", g.period.label},
                            {"start", g.period.start},
                            {"end", g.period.end},
                            {"total_events", g.total_events},
                            {"events_per_year", g.events_per_year},
                            {"events_change", opt(g.events_change)},
                            {"total_citations", g.total_citations},
                            {"citations_per_year", g.citations_per_year},
                            {"citations_change", opt(g.citations_change)}});
  }
  return j.dump(2);
}

}  // namespace cyic
