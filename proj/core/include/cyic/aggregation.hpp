#pragma once

#include "cyic/corpus.hpp"
#include "cyic/years.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cyic {

enum class CountingMode { Full, Fractional };

std::string_view to_string(CountingMode mode) noexcept;
CountingMode parse_counting_mode(std::string_view text);

/// Unordered subject pair in canonical form: a < b lexicographically.
struct SubjectPair {
  std::string a;
  std::string b;

  /// Orders two distinct labels. Throws DomainError when x == y.
  static SubjectPair of(std::string_view x, std::string_view y);

  friend auto operator<=>(const SubjectPair&, const SubjectPair&) = default;
  friend bool operator==(const SubjectPair&, const SubjectPair&) = default;
};

/// Dense per-year citation counts for one pair. `ir[t]` is the flow a -> b and `ic[t]`
/// the flow b -> a in year start_year + t. Counts are exact integers in units of 1/unit
/// (unit is 1 under full counting).
struct PairSeries {
  SubjectPair pair;
  int start_year = 0;
  std::uint64_t unit = 1;
  std::vector<std::uint64_t> ir;
  std::vector<std::uint64_t> ic;

  std::size_t size() const noexcept { return ir.size(); }
  double ir_at(std::size_t t) const { return static_cast<double>(ir[t]) / static_cast<double>(unit); }
  double ic_at(std::size_t t) const { return static_cast<double>(ic[t]) / static_cast<double>(unit); }
  bool all_zero() const noexcept;

  friend bool operator==(const PairSeries&, const PairSeries&) = default;
};

struct PairTotals {
  double total_ir = 0.0;
  double total_ic = 0.0;
  /// Years in which both directions are non-zero, i.e. where z can be positive.
  std::size_t reciprocal_years = 0;

  friend bool operator==(const PairTotals&, const PairTotals&) = default;
};

PairTotals pair_totals(const PairSeries& series);

struct AggregationOptions {
  YearWindow window;
  CountingMode counting = CountingMode::Full;
  unsigned threads = 1;
};

/// Result of aggregation: surviving pairs sorted by (a, b), all-zero pairs dropped.
struct PairTable {
  YearWindow window;
  CountingMode counting = CountingMode::Full;
  std::uint64_t unit = 1;
  std::vector<PairSeries> pairs;
  /// Edges whose citing paper falls in each window year, whatever their subjects.
  std::vector<std::uint64_t> yearly_citations;

  friend bool operator==(const PairTable&, const PairTable&) = default;
};

/// Smallest integer unit that makes every fractional contribution 1/(|P|*|Q|) exact:
/// the lcm of all products of subject-set sizes present in the corpus. 1 for full counting.
std::uint64_t counting_unit(const Corpus& corpus, CountingMode mode);

/// Accumulates directed subject-pair counts keyed by citing year. Storage is proportional
/// to the number of distinct pairs seen, never to the number of edges. Aggregators over the
/// same corpus and options form a commutative monoid under merge().
class PairAggregator {
 public:
  PairAggregator(const Corpus& corpus, AggregationOptions options);

  void add(const CitationEdge& edge);
  /// Shards the batch over options.threads workers and merges; same result as sequential.
  void add(std::span<const CitationEdge> edges);
  void merge(const PairAggregator& other);

  PairTable finalize() const;

  std::size_t pair_slots() const noexcept { return slots_.size(); }
  std::uint64_t unit() const noexcept { return unit_; }
  const AggregationOptions& options() const noexcept { return options_; }

 private:
  PairAggregator(const Corpus& corpus, AggregationOptions options, std::uint64_t unit);
  std::uint64_t* slot_counts(std::uint64_t key);

  const Corpus* corpus_;
  AggregationOptions options_;
  std::size_t years_;
  std::uint64_t unit_;
  std::unordered_map<std::uint64_t, std::uint32_t> slots_;
  std::vector<std::uint64_t> counts_;  // [slot][year][ir, ic]
  std::vector<std::uint64_t> yearly_;
};

PairTable aggregate(const Corpus& corpus, std::span<const CitationEdge> edges,
                    const AggregationOptions& options);

/// `a<TAB>b<TAB>year<TAB>ir<TAB>ic`, one row per pair-year, sorted by (a, b, year).
/// Counts print as integers under full counting, else with 6 decimals.
void write_pair_dump(const PairTable& table, const std::filesystem::path& path);

}  // namespace cyic
