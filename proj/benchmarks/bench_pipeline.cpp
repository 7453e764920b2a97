#include "cyic/aggregation.hpp"
#include "cyic/corpus.hpp"
#include "cyic/detection.hpp"
#include "cyic/io.hpp"
#include "cyic/metrics.hpp"
#include "cyic/synth.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace cyic;

namespace {

struct Fixture {
  synth::Scenario scenario;
  fs::path dir;
  synth::CorpusFiles files;
  Corpus corpus;
  std::vector<CitationEdge> edges;
  PairTable table;
  std::vector<MetricSeries> metrics;

  Fixture() {
    scenario = synth::Scenario::from_json(io::read_file(fs::path(CYIC_DATA_DIR) / "scenarios" / "demo_40y.json"));
    dir = fs::temp_directory_path() / ("cyic_bench_" + std::to_string(::getpid()));
    files = synth::write_corpus(scenario, dir);
    corpus = ingest_papers(files.papers);
    edges = ingest_citations(files.citations, corpus);
    table = aggregate(corpus, edges, {scenario.window});
    metrics = compute_metrics(table);
  }
  ~Fixture() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_IngestPapers(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(ingest_papers(f.files.papers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.corpus.paper_count()));
}
BENCHMARK(BM_IngestPapers)->Unit(benchmark::kMillisecond);

void BM_IngestCitations(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    std::size_t seen = 0;
    scan_citations(f.files.citations, f.corpus, {}, [&](std::span<const CitationEdge> batch) { seen += batch.size(); });
    benchmark::DoNotOptimize(seen);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.edges.size()));
}
BENCHMARK(BM_IngestCitations)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  auto& f = fixture();
  AggregationOptions options{f.scenario.window};
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aggregate(f.corpus, f.edges, options));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.edges.size()));
}
BENCHMARK(BM_Aggregate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_AggregateFractional(benchmark::State& state) {
  auto& f = fixture();
  AggregationOptions options{f.scenario.window, CountingMode::Fractional};
  for (auto _ : state) benchmark::DoNotOptimize(aggregate(f.corpus, f.edges, options));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.edges.size()));
}
BENCHMARK(BM_AggregateFractional)->Unit(benchmark::kMillisecond);

void BM_Metrics(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(f.table));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.table.pairs.size()));
}
BENCHMARK(BM_Metrics)->Unit(benchmark::kMicrosecond);

void BM_Detect(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(detect(f.metrics, {}, static_cast<unsigned>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.metrics.size()));
}
BENCHMARK(BM_Detect)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Generate(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(synth::generate(f.scenario));
}
BENCHMARK(BM_Generate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
