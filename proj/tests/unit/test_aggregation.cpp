#include "cyic/aggregation.hpp"
#include "cyic/error.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace cyic;

namespace {

struct Built {
  Corpus corpus;
  std::vector<CitationEdge> edges;
};

Built build(const testing::RandomCorpus& rc) {
  std::vector<PaperRecord> records;
  for (const auto& p : rc.papers) records.push_back({p.id, p.year, p.subjects});
  Built b{corpus_from_records(records), {}};
  for (const auto& [from, to] : rc.citations) {
    const auto f = b.corpus.find(from);
    const auto t = b.corpus.find(to);
    if (f && t && from != to) b.edges.push_back({*f, *t});
  }
  return b;
}

const PairSeries* find_pair(const PairTable& table, const std::string& a, const std::string& b) {
  for (const auto& s : table.pairs) {
    if (s.pair.a == a && s.pair.b == b) return &s;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("aggregation") {

TEST_CASE("subject pairs are canonical") {
  const auto p = SubjectPair::of("Zoology", "Anatomy");
  CHECK(p.a == "Anatomy");
  CHECK(p.b == "Zoology");
  CHECK(SubjectPair::of("Anatomy", "Zoology") == p);
  CHECK_THROWS_AS(SubjectPair::of("Anatomy", "Anatomy"), DomainError);
}

TEST_CASE("a single edge A -> B lands in ir of {A,B}") {
  const std::vector<PaperRecord> records{{"p", 2000, {"A"}}, {"q", 1999, {"B"}}};
  const Corpus c = corpus_from_records(records);
  const std::vector<CitationEdge> edges{{*c.find("p"), *c.find("q")}};
  const auto table = aggregate(c, edges, {{2000, 2002}});
  REQUIRE(table.pairs.size() == 1);
  CHECK(table.pairs[0].ir == std::vector<std::uint64_t>{1, 0, 0});
  CHECK(table.pairs[0].ic == std::vector<std::uint64_t>{0, 0, 0});
  CHECK(table.yearly_citations == std::vector<std::uint64_t>{1, 0, 0});
}

TEST_CASE("the reverse edge B -> A lands in ic") {
  const std::vector<PaperRecord> records{{"p", 2000, {"B"}}, {"q", 2000, {"A"}}};
  const Corpus c = corpus_from_records(records);
  const std::vector<CitationEdge> edges{{*c.find("p"), *c.find("q")}};
  const auto table = aggregate(c, edges, {{2000, 2000}});
  REQUIRE(table.pairs.size() == 1);
  CHECK(table.pairs[0].pair == SubjectPair{"A", "B"});
  CHECK(table.pairs[0].ir[0] == 0);
  CHECK(table.pairs[0].ic[0] == 1);
}

TEST_CASE("multi-subject papers count both directions and skip same-label pairs") {
  const std::vector<PaperRecord> records{{"p", 2000, {"A", "B"}}, {"q", 2000, {"A", "B"}}};
  const Corpus c = corpus_from_records(records);
  const std::vector<CitationEdge> edges{{*c.find("p"), *c.find("q")}};
  const auto table = aggregate(c, edges, {{2000, 2000}});
  REQUIRE(table.pairs.size() == 1);
  CHECK(table.pairs[0].ir[0] == 1);
  CHECK(table.pairs[0].ic[0] == 1);
}

TEST_CASE("the citing paper's year anchors the count and out-of-window years are ignored") {
  const std::vector<PaperRecord> records{{"p", 2005, {"A"}}, {"q", 1990, {"B"}}, {"r", 1980, {"C"}}};
  const Corpus c = corpus_from_records(records);
  const std::vector<CitationEdge> edges{{*c.find("p"), *c.find("q")}, {*c.find("r"), *c.find("p")}};
  const auto table = aggregate(c, edges, {{2000, 2010}});
  REQUIRE(table.pairs.size() == 1);
  CHECK(table.pairs[0].pair == SubjectPair{"A", "B"});
  CHECK(table.pairs[0].ir[5] == 1);
  CHECK(std::accumulate(table.yearly_citations.begin(), table.yearly_citations.end(), std::uint64_t{0}) == 1);
}

TEST_CASE("fractional counting splits one citation across subject products exactly") {
  const std::vector<PaperRecord> records{{"p", 2000, {"A", "B"}}, {"q", 2000, {"C", "D", "E"}}, {"r", 2000, {"C"}}};
  const Corpus c = corpus_from_records(records);
  CHECK(counting_unit(c, CountingMode::Full) == 1);
  const std::uint64_t unit = counting_unit(c, CountingMode::Fractional);
  CHECK(unit % 6 == 0);
  const std::vector<CitationEdge> edges{{*c.find("p"), *c.find("q")}, {*c.find("r"), *c.find("p")}};
  const auto table = aggregate(c, edges, {{2000, 2000}, CountingMode::Fractional});
  const auto* ac = find_pair(table, "A", "C");
  REQUIRE(ac);
  CHECK(ac->ir_at(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(ac->ic_at(0) == doctest::Approx(0.5).epsilon(1e-15));
  double total = 0.0;
  for (const auto& s : table.pairs) total += s.ir_at(0) + s.ic_at(0);
  CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pair totals") {
  PairSeries s{{"A", "B"}, 2000, 1, {1, 2}, {3, 4}};
  const auto t = pair_totals(s);
  CHECK(t.total_ir == 3.0);
  CHECK(t.total_ic == 7.0);
  CHECK(t.reciprocal_years == 2);
  PairSeries zero{{"A", "B"}, 2000, 1, {0, 0}, {0, 0}};
  CHECK(pair_totals(zero) == PairTotals{0.0, 0.0, 0});
}

TEST_CASE("complete mutual citation keeps every one of n(n-1)/2 pairs") {
  std::vector<PaperRecord> records;
  const int n = 40;
  for (int i = 0; i < n; ++i) records.push_back({"p" + std::to_string(i), 2000, {"S" + std::to_string(1000 + i)}});
  const Corpus c = corpus_from_records(records);
  std::vector<CitationEdge> edges;
  for (PaperIndex i = 0; i < n; ++i) {
    for (PaperIndex j = 0; j < n; ++j) {
      if (i != j) edges.push_back({i, j});
    }
  }
  CHECK(aggregate(c, edges, {{2000, 2000}}).pairs.size() == n * (n - 1) / 2);
}

TEST_CASE("counts equal a brute-force recount from the raw records") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rc = testing::random_corpus(seed, 150, 600, 7, 2000, 2006, 3, true);
    const auto built = build(rc);
    for (bool fractional : {false, true}) {
      const auto table =
          aggregate(built.corpus, built.edges,
                    {{2000, 2006}, fractional ? CountingMode::Fractional : CountingMode::Full});
      const auto flows = testing::brute_flows(rc.papers, rc.citations, 2000, 2006, fractional);
      std::size_t nonzero_pairs = 0;
      for (const auto& [key, series] : flows) {
        if (key.first < key.second || !flows.count({key.second, key.first})) ++nonzero_pairs;
      }
      CHECK(table.pairs.size() == nonzero_pairs);
      for (const auto& s : table.pairs) {
        const auto ab = flows.find({s.pair.a, s.pair.b});
        const auto ba = flows.find({s.pair.b, s.pair.a});
        for (std::size_t t = 0; t < s.size(); ++t) {
          const double want_ir = ab == flows.end() ? 0.0 : ab->second[t];
          const double want_ic = ba == flows.end() ? 0.0 : ba->second[t];
          CHECK(s.ir_at(t) == doctest::Approx(want_ir).epsilon(1e-12));
          CHECK(s.ic_at(t) == doctest::Approx(want_ic).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("yearly ordered-pair totals equal the edge enumeration identity") {
  const auto rc = testing::random_corpus(77, 120, 500, 5, 2000, 2003, 3);
  const auto built = build(rc);
  const auto table = aggregate(built.corpus, built.edges, {{2000, 2003}});
  std::vector<std::uint64_t> expected(4, 0);
  for (const auto& e : built.edges) {
    const auto from = built.corpus.subjects(e.citing);
    const auto to = built.corpus.subjects(e.cited);
    std::uint64_t same = 0;
    for (auto x : from) same += static_cast<std::uint64_t>(std::count(to.begin(), to.end(), x));
    expected[static_cast<std::size_t>(built.corpus.year(e.citing) - 2000)] += from.size() * to.size() - same;
  }
  std::vector<std::uint64_t> got(4, 0);
  for (const auto& s : table.pairs) {
    for (std::size_t t = 0; t < 4; ++t) got[t] += s.ir[t] + s.ic[t];
  }
  CHECK(got == expected);
}

TEST_CASE("shard merge equals sequential aggregation in any order") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto rc = testing::random_corpus(seed, 300, 1000, 9, 1995, 2004, 3);
    const auto built = build(rc);
    const AggregationOptions options{{1995, 2004}, seed % 2 ? CountingMode::Fractional : CountingMode::Full};
    const auto sequential = aggregate(built.corpus, built.edges, options);

    std::mt19937_64 rng(seed);
    std::vector<CitationEdge> shuffled = built.edges;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<PairAggregator> shards(4, PairAggregator(built.corpus, options));
    for (std::size_t i = 0; i < shuffled.size(); ++i) shards[rng() % 4].add(shuffled[i]);
    PairAggregator merged(built.corpus, options);
    for (std::size_t i : {2u, 0u, 3u, 1u}) merged.merge(shards[i]);
    CHECK(merged.finalize() == sequential);

    for (unsigned threads : {2u, 3u, 8u}) {
      AggregationOptions threaded = options;
      threaded.threads = threads;
      auto result = aggregate(built.corpus, built.edges, threaded);
      result.window = sequential.window;
      CHECK(result == sequential);
    }
  }
}

TEST_CASE("merging incompatible aggregators is refused") {
  const std::vector<PaperRecord> records{{"p", 2000, {"A"}}, {"q", 2000, {"B"}}};
  const Corpus c = corpus_from_records(records);
  PairAggregator a(c, {{2000, 2001}});
  PairAggregator b(c, {{2000, 2002}});
  CHECK_THROWS_AS(a.merge(b), DomainError);
}

TEST_CASE("pair dump format") {
  testing::TempDir dir;
  const std::vector<PaperRecord> records{{"p", 2000, {"A"}}, {"q", 2000, {"B"}}};
  const Corpus c = corpus_from_records(records);
  const std::vector<CitationEdge> edges{{0, 1}, {0, 1}, {1, 0}};
  write_pair_dump(aggregate(c, edges, {{2000, 2001}}), dir / "pairs.tsv");
  CHECK(testing::read_text(dir / "pairs.tsv") == "a\tb\tyear\tir\tic\nA\tB\t2000\t2\t1\nA\tB\t2001\t0\t0\n");
}

TEST_CASE("row order of the inputs does not change the aggregate") {
  const auto rc = testing::random_corpus(5, 100, 400, 6, 2000, 2002, 2);
  auto reversed = rc;
  std::reverse(reversed.papers.begin(), reversed.papers.end());
  std::reverse(reversed.citations.begin(), reversed.citations.end());
  const auto a = build(rc);
  const auto b = build(reversed);
  CHECK(aggregate(a.corpus, a.edges, {{2000, 2002}}) == aggregate(b.corpus, b.edges, {{2000, 2002}}));
}

}
