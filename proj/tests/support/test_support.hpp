#pragma once

#include "cyic/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cyic::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);

struct Paper {
  std::string id;
  int year = 0;
  std::vector<std::string> subjects;
};

using Citation = std::pair<std::string, std::string>;

std::string papers_tsv(const std::vector<Paper>& papers);
std::string citations_tsv(const std::vector<Citation>& citations);

/// (from, to) -> flow per window year, computed by walking every citation.
using DirectedFlows = std::map<std::pair<std::string, std::string>, std::vector<double>>;

DirectedFlows brute_flows(const std::vector<Paper>& papers, const std::vector<Citation>& citations, int first_year,
                          int last_year, bool fractional);

struct BruteEvent {
  std::string a;
  std::string b;
  int year = 0;
  double z = 0.0;
  double slope = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
};

/// Straight transcription of the three detection conditions over every subject pair.
std::vector<BruteEvent> brute_events(const DirectedFlows& flows, int first_year, int last_year,
                                     double sigma_multiplier = 2.0, bool sample_sigma = false);

struct RandomCorpus {
  std::vector<Paper> papers;
  std::vector<Citation> citations;
};

/// Random papers over `subjects` labels S00.. with 1..max_subjects subjects each, plus
/// `edges` random citations (self-citations and dangling ids included when `noisy`).
RandomCorpus random_corpus(std::uint64_t seed, std::size_t papers, std::size_t edges, std::size_t subjects,
                           int first_year, int last_year, std::size_t max_subjects = 3, bool noisy = false);

/// Small deterministic scenario with random rates and one to three planted events.
synth::Scenario random_scenario(std::uint64_t seed);

}  // namespace cyic::testing
