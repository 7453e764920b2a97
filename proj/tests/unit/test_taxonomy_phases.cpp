#include "cyic/error.hpp"
#include "cyic/phases.hpp"
#include "cyic/taxonomy.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <numeric>

using namespace cyic;

namespace {

CyicEvent event(std::string a, std::string b, int year, double z = 1.0) {
  CyicEvent e;
  e.pair = SubjectPair::of(a, b);
  e.year = year;
  e.z_value = z;
  return e;
}

ClusterMap small_map() {
  const std::vector<ClusterRow> rows{{"Optics", "Physics", ClusterGroup::Natural},
                                     {"Acoustics", "Physics", ClusterGroup::Natural},
                                     {"Oncology", "Medicine", ClusterGroup::Natural},
                                     {"Sociology", "Social Studies", ClusterGroup::HumanitiesSocial},
                                     {"Law", "Law and Policy", ClusterGroup::HumanitiesSocial}};
  return ClusterMap::from_rows(rows);
}

std::vector<AnnualActivity> activity_of(int start, std::vector<std::uint64_t> counts,
                                        std::vector<std::uint64_t> clusters = {}) {
  std::vector<AnnualActivity> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint64_t c = clusters.empty() ? std::min<std::uint64_t>(counts[i], 21) : clusters[i];
    out.push_back({start + static_cast<int>(i), counts[i], c, 0});
  }
  return out;
}

}  // namespace

TEST_SUITE("taxonomy") {

TEST_CASE("cluster map lookups") {
  const auto map = small_map();
  CHECK(map.cluster_of("Optics") == "Physics");
  CHECK(map.group_of("Law and Policy") == ClusterGroup::HumanitiesSocial);
  CHECK(map.clusters() == std::vector<std::string>{"Law and Policy", "Medicine", "Physics", "Social Studies"});
  CHECK(map.subject_count() == 5);
  CHECK(map.cluster_count() == 4);
  CHECK_THROWS_AS(map.cluster_of("Botany"), DomainError);
  CHECK(map.cluster_of("Botany", AssignmentPolicy::Lenient) == kUnassignedCluster);
  CHECK(map.group_of(kUnassignedCluster) == ClusterGroup::Unassigned);
  CHECK_THROWS_AS(map.group_of("Arts"), DomainError);
}

TEST_CASE("malformed maps are rejected") {
  const std::vector<ClusterRow> dup{{"A", "X", ClusterGroup::Natural}, {"A", "Y", ClusterGroup::Natural}};
  CHECK_THROWS_AS(ClusterMap::from_rows(dup), InputError);
  const std::vector<ClusterRow> split{{"A", "X", ClusterGroup::Natural}, {"B", "X", ClusterGroup::HumanitiesSocial}};
  CHECK_THROWS_AS(ClusterMap::from_rows(split), InputError);
  const std::vector<ClusterRow> blank{{"A", "", ClusterGroup::Natural}};
  CHECK_THROWS_AS(ClusterMap::from_rows(blank), InputError);
  CHECK(parse_cluster_group("humsoc") == ClusterGroup::HumanitiesSocial);
  CHECK_THROWS_AS(parse_cluster_group("unassigned"), InputError);
}

TEST_CASE("cluster map files round trip and report bad lines") {
  testing::TempDir dir;
  write_cluster_map(small_map(), dir / "map.tsv");
  const auto loaded = load_cluster_map(dir / "map.tsv");
  CHECK(loaded.rows().size() == 5);
  CHECK(loaded.cluster_of("Law") == "Law and Policy");

  testing::write_text(dir / "bad.tsv", "subject\tcluster\tgroup\nA\tX\tnatural\nB\tY\n");
  try {
    load_cluster_map(dir / "bad.tsv");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(e.line() == 3);
  }
  testing::write_text(dir / "tag.tsv", "subject\tcluster\tgroup\nA\tX\tscience\n");
  CHECK_THROWS_AS(load_cluster_map(dir / "tag.tsv"), InputError);
}

TEST_CASE("the bundled 21-cluster map loads") {
  const auto map = load_cluster_map(std::filesystem::path(CYIC_DATA_DIR) / "taxonomy" / "clusters_21.tsv");
  CHECK(map.cluster_count() == 21);
  CHECK(map.group_of("Medicine") == ClusterGroup::Natural);
  CHECK(map.group_of("Engineering") == ClusterGroup::Natural);
  CHECK(map.group_of("Law and Policy") == ClusterGroup::HumanitiesSocial);
  CHECK(map.group_of("Arts") == ClusterGroup::HumanitiesSocial);
  CHECK(map.has_cluster("General"));
}

TEST_CASE("classification of events") {
  const auto map = small_map();
  std::vector<CyicEvent> events{event("Optics", "Acoustics", 2000), event("Optics", "Oncology", 2000),
                                event("Law", "Sociology", 2001)};
  const auto summary = classify_events(events, map);
  CHECK(summary.cross == 2);
  CHECK(summary.intra == 1);
  CHECK(events[0].cross_cluster == false);
  CHECK(events[1].cross_cluster == true);
  CHECK(summarize_classification(events).cross == 2);
  std::vector<CyicEvent> unknown{event("Optics", "Botany", 2000)};
  CHECK_THROWS_AS(classify_events(unknown, map), DomainError);
  CHECK(classify_events(unknown, map, AssignmentPolicy::Lenient).cross == 1);
  const std::vector<CyicEvent> raw{event("Optics", "Law", 2000)};
  CHECK_THROWS_AS(summarize_classification(raw), DomainError);
}

TEST_CASE("classification summary arithmetic") {
  const ClassificationSummary s{2529, 218};
  CHECK(s.total() == 2747);
  CHECK(s.cross_share() == "92.06%");
  CHECK(s.report() == "2529 cross-cluster + 218 intra-cluster = 2747 (92.06% cross-cluster)");
  CHECK_THROWS_AS(ClassificationSummary{}.cross_share(), DomainError);
  CHECK(ClassificationSummary{}.report() == "0 cross-cluster + 0 intra-cluster = 0");
}

}

TEST_SUITE("phases") {

TEST_CASE("annual activity") {
  const auto map = small_map();
  const std::vector<CyicEvent> events{event("Optics", "Oncology", 2001), event("Oncology", "Sociology", 2001),
                                      event("Optics", "Acoustics", 2001), event("Law", "Optics", 2002)};
  const std::vector<std::uint64_t> citations{10, 20, 30};
  const auto a = annual_activity(events, map, {2000, 2002}, citations);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == AnnualActivity{2000, 0, 0, 10});
  CHECK(a[1] == AnnualActivity{2001, 2, 3, 20});
  CHECK(a[2] == AnnualActivity{2002, 1, 2, 30});
  const std::vector<std::uint64_t> wrong{1, 2};
  CHECK_THROWS_AS(annual_activity(events, map, {2000, 2002}, wrong), DomainError);
  CHECK_THROWS_AS(annual_activity(events, map, {2002, 2004}), DomainError);
}

TEST_CASE("emergence fires on the 2003 facts and not on the years before") {
  std::vector<std::uint64_t> counts(22, 0);
  std::vector<std::uint64_t> clusters(22, 0);
  for (std::size_t i : {0u, 16u}) counts[i] = 4, clusters[i] = 4;
  for (std::size_t i : {3u, 5u, 7u, 12u, 14u}) counts[i] = 5, clusters[i] = 4;
  counts[10] = 6, clusters[10] = 5;
  counts[20] = 6, clusters[20] = 5;
  counts[18] = 10, clusters[18] = 6;
  CHECK(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == 55);
  counts.push_back(24);
  clusters.push_back(13);
  const auto seg = detect_turning_points(activity_of(1981, counts, clusters));
  CHECK(seg.turning_points == std::vector<int>{2003});
  REQUIRE(seg.firings.size() == 1);
  CHECK(seg.firings[0].kind == TurningPointKind::Emergence);

  const auto before = detect_turning_points(activity_of(2000, {10, 8, 24}, {6, 5, 11}));
  CHECK(before.turning_points.empty());
}

TEST_CASE("emergence needs a non-zero history") {
  CHECK(detect_turning_points(activity_of(2000, {0, 0, 5}, {0, 0, 4})).turning_points.empty());
  CHECK(detect_turning_points(activity_of(2000, {0, 1, 2}, {0, 1, 2})).turning_points == std::vector<int>{2002});
}

TEST_CASE("acceleration fires on 125 to 206") {
  const auto seg = detect_turning_points(activity_of(2014, {100, 120, 125, 206}, {21, 21, 21, 21}));
  CHECK(seg.turning_points == std::vector<int>{2017});
  REQUIRE(seg.firings.size() == 1);
  CHECK(seg.firings[0].kind == TurningPointKind::Acceleration);
  CHECK(detect_turning_points(activity_of(2014, {100, 120, 100, 170}, {21, 21, 21, 21})).turning_points.empty());
  CHECK(detect_turning_points(activity_of(2014, {100, 120, 125, 187}, {21, 21, 21, 21})).turning_points.empty());
}

TEST_CASE("flat series never fire") {
  CHECK(detect_turning_points(activity_of(1981, std::vector<std::uint64_t>(40, 7))).turning_points.empty());
  CHECK(detect_turning_points(activity_of(1981, std::vector<std::uint64_t>(40, 0))).turning_points.empty());
  CHECK(detect_turning_points(activity_of(1981, std::vector<std::uint64_t>(40, 500))).turning_points.empty());
}

TEST_CASE("firings within the collapse window fold into the earliest") {
  const auto seg = detect_turning_points(activity_of(2000, {1, 2, 4, 8, 16, 16, 16, 16, 40}, {1, 2, 4, 8, 16, 16, 16, 16, 40}));
  CHECK(seg.turning_points == std::vector<int>{2001, 2008});
  CHECK(seg.firings.size() == 5);
  CHECK(seg.firings[1].kept == false);
  SegmentationRules no_collapse;
  no_collapse.collapse_years = 0;
  const auto all = detect_turning_points(activity_of(2000, {1, 2, 4, 8, 16, 16, 16, 16, 40}, {1, 2, 4, 8, 16, 16, 16, 16, 40}), no_collapse);
  CHECK(all.turning_points.size() == 5);
}

TEST_CASE("the average baseline is looser than the maximum") {
  SegmentationRules average;
  average.emergence_baseline = EmergenceBaseline::PriorAverage;
  const auto series = activity_of(2000, {10, 0, 0, 0, 12}, {6, 0, 0, 0, 7});
  CHECK(detect_turning_points(series).turning_points.empty());
  CHECK(detect_turning_points(series, average).turning_points == std::vector<int>{2004});
}

TEST_CASE("turning points at tau ignore later years") {
  std::vector<std::uint64_t> counts{3, 2, 5, 4, 11, 9, 12, 150, 240, 250};
  const auto full = detect_turning_points(activity_of(2000, counts));
  for (std::size_t cut = 3; cut <= counts.size(); ++cut) {
    std::vector<std::uint64_t> prefix(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(cut));
    const auto part = detect_turning_points(activity_of(2000, prefix));
    std::vector<int> expected;
    for (int tp : full.turning_points) {
      if (tp < 2000 + static_cast<int>(cut)) expected.push_back(tp);
    }
    CHECK(part.turning_points == expected);
  }
  std::vector<std::uint64_t> noisy = counts;
  noisy[9] = 0;
  CHECK(detect_turning_points(activity_of(2000, noisy)).turning_points == full.turning_points);
}

TEST_CASE("preconditions and rule validation") {
  CHECK_THROWS_AS(detect_turning_points(activity_of(2000, {1, 2})), DomainError);
  auto gap = activity_of(2000, {1, 2, 3});
  gap[2].year = 2005;
  CHECK_THROWS_AS(detect_turning_points(gap), DomainError);
  SegmentationRules bad;
  bad.acceleration_growth_threshold = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("roman numerals") {
  CHECK(roman_numeral(1) == "I");
  CHECK(roman_numeral(3) == "III");
  CHECK(roman_numeral(4) == "IV");
  CHECK(roman_numeral(9) == "IX");
  CHECK(roman_numeral(14) == "XIV");
  CHECK(roman_numeral(40) == "XL");
  CHECK_THROWS_AS(roman_numeral(0), DomainError);
}

TEST_CASE("segmenting the 40-year window") {
  const auto seg = segment_window({1981, 2020}, {2003, 2017});
  REQUIRE(seg.periods.size() == 3);
  CHECK(seg.periods[0] == Period{"I", 1981, 2002});
  CHECK(seg.periods[1] == Period{"II", 2003, 2016});
  CHECK(seg.periods[2] == Period{"III", 2017, 2020});
  int total = 0;
  for (const auto& p : seg.periods) total += p.years();
  CHECK(total == 40);
  for (int y = 1981; y <= 2020; ++y) {
    int hits = 0;
    for (const auto& p : seg.periods) hits += (y >= p.start && y <= p.end);
    CHECK(hits == 1);
  }
  CHECK(seg.period_of(2016).label == "II");
  CHECK_THROWS_AS(seg.period_of(1980), DomainError);
  CHECK_THROWS_AS(seg.period("IV"), ConfigError);
  CHECK(segment_window({1981, 2020}, {}).periods.size() == 1);
  CHECK_THROWS_AS(segment_window({1981, 2020}, {1981}), DomainError);
  CHECK_THROWS_AS(segment_window({1981, 2020}, {2010, 2005}), DomainError);
}

TEST_CASE("segmentation json round trips and checks the version") {
  auto seg = segment_window({1981, 2020}, {2003, 2017});
  seg.firings = {{2003, TurningPointKind::Emergence, true}, {2004, TurningPointKind::Emergence, false},
                 {2017, TurningPointKind::Acceleration, true}};
  const auto back = PhaseSegmentation::from_json(seg.to_json());
  CHECK(back.periods == seg.periods);
  CHECK(back.turning_points == seg.turning_points);
  REQUIRE(back.firings.size() == 3);
  CHECK(back.firings[1].kept == false);
  CHECK(back.firings[2].kind == TurningPointKind::Acceleration);
  std::string json = seg.to_json();
  json.replace(json.find("\"schema_version\": 1"), 19, "\"schema_version\": 9");
  CHECK_THROWS_AS(PhaseSegmentation::from_json(json), SchemaError);
  CHECK_THROWS_AS(PhaseSegmentation::from_json("{"), SchemaError);
}

TEST_CASE("growth reproduces the per-year averages of the three periods") {
  std::vector<AnnualActivity> activity;
  for (int y = 1981; y <= 2020; ++y) activity.push_back({y, 0, 0, 0});
  activity[0].cross_cluster_events = 55;
  activity[22].cross_cluster_events = 814;
  activity[36].cross_cluster_events = 1660;
  activity[0].total_citations = 7;
  const auto g = growth_stats(activity, segment_window({1981, 2020}, {2003, 2017}));
  REQUIRE(g.size() == 3);
  CHECK(g[0].total_events == 55);
  CHECK(g[0].events_per_year == "2.50");
  CHECK(g[1].events_per_year == "58.14");
  CHECK(g[2].events_per_year == "415.00");
  CHECK_FALSE(g[0].events_change.has_value());
  CHECK(g[1].events_change == "2225.71%");
  CHECK(g[2].events_change == "613.76%");
  CHECK(g[0].citations_per_year == "0.32");
  CHECK_FALSE(g[2].citations_change.has_value());
  CHECK(growth_json(g).find("\"events_per_year\": \"58.14\"") != std::string::npos);
}

}
