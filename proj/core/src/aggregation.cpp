#include "cyic/aggregation.hpp"

#include "cyic/error.hpp"
#include "cyic/io.hpp"
#include "cyic/parallel.hpp"
#include "cyic/text.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace cyic {

namespace {

constexpr std::uint64_t kMaxUnit = std::uint64_t{1} << 32;

constexpr std::uint64_t pack(SubjectId a, SubjectId b) noexcept {
  return (std::uint64_t{a} << 32) | b;
}

}  // namespace

std::string_view to_string(CountingMode mode) noexcept {
  return mode == CountingMode::Full ? "full" : "fractional";
}

CountingMode parse_counting_mode(std::string_view text) {
  if (text == "full") return CountingMode::Full;
  if (text == "fractional") return CountingMode::Fractional;
  throw ConfigError("counting must be full|fractional, got '" + std::string(text) + "'");
}

SubjectPair SubjectPair::of(std::string_view x, std::string_view y) {
  if (x == y) throw DomainError("a subject pair needs two distinct labels, got '" + std::string(x) + "' twice");
  if (y < x) std::swap(x, y);
  return {std::string(x), std::string(y)};
}

bool PairSeries::all_zero() const noexcept {
  const auto zero = [](std::uint64_t v) { return v == 0; };
  return std::all_of(ir.begin(), ir.end(), zero) && std::all_of(ic.begin(), ic.end(), zero);
}

PairTotals pair_totals(const PairSeries& series) {
  std::uint64_t ir = 0;
  std::uint64_t ic = 0;
  PairTotals out;
  for (std::size_t t = 0; t < series.size(); ++t) {
    ir += series.ir[t];
    ic += series.ic[t];
    if (series.ir[t] > 0 && series.ic[t] > 0) ++out.reciprocal_years;
  }
  out.total_ir = static_cast<double>(ir) / static_cast<double>(series.unit);
  out.total_ic = static_cast<double>(ic) / static_cast<double>(series.unit);
  return out;
}

std::uint64_t counting_unit(const Corpus& corpus, CountingMode mode) {
  if (mode == CountingMode::Full) return 1;
  std::set<std::uint64_t> sizes;
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p) sizes.insert(corpus.subjects(p).size());
  std::uint64_t unit = 1;
  for (auto p : sizes) {
    for (auto q : sizes) {
      unit = std::lcm(unit, p * q);
      if (unit > kMaxUnit) {
        throw ConfigError("fractional counting unit exceeds 2^32; too many distinct subject-set sizes");
      }
    }
  }
  return unit;
}

PairAggregator::PairAggregator(const Corpus& corpus, AggregationOptions options)
    : PairAggregator(corpus, options, counting_unit(corpus, options.counting)) {}

PairAggregator::PairAggregator(const Corpus& corpus, AggregationOptions options, std::uint64_t unit)
    : corpus_(&corpus),
      options_(options),
      years_(options.window.size()),
      unit_(unit),
      yearly_(options.window.size(), 0) {
  if (options.window.empty()) throw ConfigError("empty analysis window");
}

std::uint64_t* PairAggregator::slot_counts(std::uint64_t key) {
  const auto [it, inserted] = slots_.try_emplace(key, static_cast<std::uint32_t>(slots_.size()));
  if (inserted) counts_.resize(counts_.size() + years_ * 2, 0);
  return counts_.data() + std::size_t{it->second} * years_ * 2;
}

void PairAggregator::add(const CitationEdge& edge) {
  const int year = corpus_->year(edge.citing);
  if (!options_.window.contains(year)) return;
  const std::size_t t = options_.window.index_of(year);
  ++yearly_[t];

  const auto from = corpus_->subjects(edge.citing);
  const auto to = corpus_->subjects(edge.cited);
  const std::uint64_t weight =
      options_.counting == CountingMode::Full ? 1 : unit_ / (from.size() * to.size());
  for (SubjectId x : from) {
    for (SubjectId y : to) {
      if (x == y) continue;
      if (x < y) {
        slot_counts(pack(x, y))[t * 2] += weight;
      } else {
        slot_counts(pack(y, x))[t * 2 + 1] += weight;
      }
    }
  }
}

void PairAggregator::add(std::span<const CitationEdge> edges) {
  const unsigned shards = std::max(1u, options_.threads);
  if (shards == 1 || edges.size() < 2 * std::size_t{shards}) {
    for (const auto& e : edges) add(e);
    return;
  }
  std::vector<PairAggregator> partial(shards, PairAggregator(*corpus_, options_, unit_));
  parallel_for(shards, shards, [&](std::size_t s) {
    const std::size_t begin = edges.size() * s / shards;
    const std::size_t end = edges.size() * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) partial[s].add(edges[i]);
  });
  for (const auto& p : partial) merge(p);
}

void PairAggregator::merge(const PairAggregator& other) {
  if (other.corpus_ != corpus_ || other.unit_ != unit_ || !(other.options_.window == options_.window) ||
      other.options_.counting != options_.counting) {
    throw DomainError("cannot merge aggregators built with different corpora or options");
  }
  for (const auto& [key, slot] : other.slots_) {
    std::uint64_t* dst = slot_counts(key);
    const std::uint64_t* src = other.counts_.data() + std::size_t{slot} * years_ * 2;
    for (std::size_t i = 0; i < years_ * 2; ++i) dst[i] += src[i];
  }
  for (std::size_t t = 0; t < years_; ++t) yearly_[t] += other.yearly_[t];
}

PairTable PairAggregator::finalize() const {
  PairTable table;
  table.window = options_.window;
  table.counting = options_.counting;
  table.unit = unit_;
  table.yearly_citations = yearly_;

  std::vector<std::pair<std::uint64_t, std::uint32_t>> ordered(slots_.begin(), slots_.end());
  std::sort(ordered.begin(), ordered.end());
  table.pairs.reserve(ordered.size());
  for (const auto& [key, slot] : ordered) {
    PairSeries s;
    s.pair = {corpus_->label(static_cast<SubjectId>(key >> 32)),
              corpus_->label(static_cast<SubjectId>(key & 0xffffffffu))};
    s.start_year = options_.window.start;
    s.unit = unit_;
    s.ir.resize(years_);
    s.ic.resize(years_);
    const std::uint64_t* src = counts_.data() + std::size_t{slot} * years_ * 2;
    for (std::size_t t = 0; t < years_; ++t) {
      s.ir[t] = src[t * 2];
      s.ic[t] = src[t * 2 + 1];
    }
    if (!s.all_zero()) table.pairs.push_back(std::move(s));
  }
  return table;
}

PairTable aggregate(const Corpus& corpus, std::span<const CitationEdge> edges,
                    const AggregationOptions& options) {
  PairAggregator agg(corpus, options);
  agg.add(edges);
  return agg.finalize();
}

void write_pair_dump(const PairTable& table, const std::filesystem::path& path) {
  io::Writer out(path);
  const auto count = [&](std::uint64_t v) {
    if (table.unit == 1) return std::to_string(v);
    return text::fixed(static_cast<double>(v) / static_cast<double>(table.unit), 6);
  };
  out << "a\tb\tyear\tir\tic\n";
  for (const auto& s : table.pairs) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      out << s.pair.a << '\t' << s.pair.b << '\t' << std::to_string(s.start_year + static_cast<int>(t))
          << '\t' << count(s.ir[t]) << '\t' << count(s.ic[t]) << '\n';
    }
  }
  out.close();
}

}  // namespace cyic
