#pragma once

#include "cyic/corpus.hpp"
#include "cyic/detection.hpp"
#include "cyic/taxonomy.hpp"
#include "cyic/years.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cyic::synth {

enum class RateMode {
  /// Counts are the rates rounded half-up; exact and hand-checkable.
  Deterministic,
  /// Counts are Poisson draws around the rates.
  Stochastic,
};

enum class BalanceMode {
  /// Both directions multiply by the surge factor.
  Scale,
  /// Both directions become surge_factor * max(current a->b, current b->a).
  Equalize,
};

struct SubjectSpec {
  std::string label;
  std::string cluster;
  ClusterGroup group = ClusterGroup::Natural;
};

struct DirectedRate {
  std::string from;
  std::string to;
  double rate = 0.0;
};

/// From `year` on, the pair's rates change per `balance`. Events on the same pair apply
/// in list order, each to the rates left by the previous ones.
struct PlantedEvent {
  std::string a;
  std::string b;
  int year = 0;
  double surge_factor = 2.0;
  BalanceMode balance = BalanceMode::Equalize;
};

struct Scenario {
  std::uint64_t seed = 0;
  YearWindow window;
  RateMode mode = RateMode::Deterministic;
  std::vector<SubjectSpec> subjects;
  /// Rate of every ordered pair without an explicit baseline entry.
  double default_rate = 0.0;
  std::vector<DirectedRate> baseline_rates;
  std::vector<PlantedEvent> planted_events;
  /// Minimum pool of papers per subject and year.
  std::uint32_t papers_per_subject_year = 1;
  /// Probability that a generated paper carries a second, random subject.
  double multi_subject_fraction = 0.0;

  /// Throws ConfigError for an infeasible scenario.
  void validate() const;

  static Scenario from_json(std::string_view json);
  std::string to_json() const;

  /// Expected directed rate from -> to in `year` after planted events.
  double rate(std::size_t from, std::size_t to, int year) const;
};

/// Declared ground truth. Directed counts are the realized full-counting counts of the
/// generated files, keyed by (from, to) label.
struct Manifest {
  std::uint64_t seed = 0;
  YearWindow window;
  RateMode mode = RateMode::Deterministic;
  std::uint64_t paper_count = 0;
  std::uint64_t edge_count = 0;
  std::vector<std::string> subjects;
  std::map<std::pair<std::string, std::string>, std::vector<std::uint64_t>> directed;
  std::vector<PlantedEvent> planted_events;

  /// Flow a -> b in each window year (zeros when absent).
  std::vector<std::uint64_t> flow(std::string_view from, std::string_view to) const;
  std::uint64_t total_flow(std::string_view from, std::string_view to) const;

  std::string to_json() const;
  static Manifest from_json(std::string_view json);
};

struct GeneratedCorpus {
  std::vector<PaperRecord> papers;
  /// (citing_id, cited_id)
  std::vector<std::pair<std::string, std::string>> citations;
  ClusterMap clusters;
  Manifest manifest;
};

GeneratedCorpus generate(const Scenario& scenario);

struct CorpusFiles {
  std::filesystem::path papers;
  std::filesystem::path citations;
  std::filesystem::path clusters;
  std::filesystem::path manifest;
};

/// Streams papers.tsv, citations.tsv, clusters.tsv and manifest.json into `dir`
/// (the two corpus files gain `.gz` with `gzip`). Byte-identical for identical scenarios.
CorpusFiles write_corpus(const Scenario& scenario, const std::filesystem::path& dir, bool gzip = false);

/// Ground truth for a deterministic scenario, computed by a direct evaluation of the three
/// conditions over the realized count schedule. Throws DomainError in stochastic mode.
std::vector<CyicEvent> expected_detections(const Scenario& scenario, const DetectionParams& params = {});

/// The same direct evaluation over arbitrary manifest counts.
std::vector<CyicEvent> oracle_detections(const Manifest& manifest, const DetectionParams& params = {});

}  // namespace cyic::synth
