#pragma once

#include "cyic/aggregation.hpp"
#include "cyic/detection.hpp"
#include "cyic/phases.hpp"
#include "cyic/taxonomy.hpp"
#include "cyic/years.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cyic::cli {

struct RunConfig {
  std::filesystem::path papers;
  std::filesystem::path citations;
  std::filesystem::path clusters;
  std::filesystem::path out = "cyic-out";
  YearWindow window;
  DetectionParams params;
  SegmentationRules rules;
  CountingMode counting = CountingMode::Full;
  bool strict = false;
  bool lenient_clusters = false;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;

  std::filesystem::path scenario;
  bool gzip = false;

  std::vector<std::string> focal;
  std::size_t top_k = 5;
  std::string period_a;
  std::string period_b;
  std::vector<std::string> exclude{"General"};

  /// Throws ConfigError on an empty window or a zero thread count.
  void validate() const;
  AssignmentPolicy policy() const noexcept {
    return lenient_clusters ? AssignmentPolicy::Lenient : AssignmentPolicy::Strict;
  }
};

struct CommandResult {
  std::vector<std::filesystem::path> written;
  /// Human-readable run summary, one fact per line.
  std::string summary;
};

CommandResult cmd_ingest(const RunConfig& config);
CommandResult cmd_detect(const RunConfig& config);
CommandResult cmd_segment(const RunConfig& config);
CommandResult cmd_report(const RunConfig& config);
CommandResult cmd_simulate(const RunConfig& config);

/// Full command-line entry point. Errors are reported as one JSON object on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// File-name friendly form of a cluster name, e.g. "Computer Sci." -> "computer_sci".
std::string slug(std::string_view name);

}  // namespace cyic::cli
