#pragma once

#include "cyic/aggregation.hpp"
#include "cyic/corpus.hpp"
#include "cyic/detection.hpp"
#include "cyic/taxonomy.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cyic {

struct StreamedAggregation {
  PairTable table;
  CitationScan scan;
};

/// Streams a citations file through a PairAggregator in batches, so memory tracks the
/// number of pairs rather than the number of edges. Folds the scan into the corpus stats.
StreamedAggregation aggregate_file(Corpus& corpus, const std::filesystem::path& citations,
                                   const IngestOptions& ingest, const AggregationOptions& options,
                                   std::size_t batch_size = 1 << 18);

/// One JSON object per line with fields pair_a, pair_b, year, z_value, slope, pair_mean,
/// pair_sigma, global_median, cross_cluster (null when unclassified).
std::string events_jsonl(std::span<const CyicEvent> events);
/// Throws SchemaError on a malformed line.
std::vector<CyicEvent> parse_events_jsonl(std::string_view text);
std::string events_csv(std::span<const CyicEvent> events);

struct DetectSummary {
  YearWindow window;
  CountingMode counting = CountingMode::Full;
  std::uint64_t unit = 1;
  DetectionParams params;
  double global_median = 0.0;
  std::uint64_t pair_count = 0;
  std::uint64_t event_count = 0;
  CorpusStats corpus;
  std::vector<std::uint64_t> yearly_citations;
  std::optional<ClassificationSummary> classification;

  std::string to_json() const;
  /// Throws SchemaError on a version mismatch or missing field.
  static DetectSummary from_json(std::string_view json);
};

}  // namespace cyic
