#include "commands.hpp"

#include "cyic/corpus.hpp"
#include "cyic/error.hpp"
#include "cyic/io.hpp"
#include "cyic/metrics.hpp"
#include "cyic/pipeline.hpp"
#include "cyic/reporting.hpp"
#include "cyic/schema.hpp"
#include "cyic/synth.hpp"
#include "cyic/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <deque>
#include <functional>
#include <map>
#include <ostream>

namespace cyic::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void require_file(const fs::path& path, std::string_view flag) {
  if (path.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw InputError("file not found", path.string());
}

IngestOptions ingest_options(const RunConfig& c) {
  IngestOptions o;
  o.mode = c.strict ? IngestMode::Strict : IngestMode::Lenient;
  return o;
}

class Outputs {
 public:
  explicit Outputs(const fs::path& dir) : dir_(dir) { fs::create_directories(dir_); }

  void write(std::string_view name, std::string_view contents) {
    io::write_file(dir_ / name, contents);
    written_.push_back(dir_ / name);
  }
  fs::path path(std::string_view name) {
    written_.push_back(dir_ / name);
    return dir_ / name;
  }
  std::vector<fs::path> take() { return std::move(written_); }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

ordered_json issues_json(const std::vector<RowIssue>& issues) {
  ordered_json arr = ordered_json::array();
  for (const auto& i : issues) arr.push_back({{"line", i.line}, {"message", i.message}});
  return arr;
}

std::string corpus_stats_json(const Corpus& corpus, const std::optional<CitationScan>& scan) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "corpus-stats";
  const auto stats = ordered_json::parse(corpus.stats().to_json());
  for (const auto& [key, value] : stats.items()) j[key] = value;
  j["paper_issues"] = issues_json(corpus.issues());
  if (scan) {
    j["citation_scan"] = {{"self_loops", scan->self_loops},
                          {"unresolved", scan->unresolved},
                          {"malformed", scan->malformed},
                          {"issues", issues_json(scan->issues)}};
  } else {
    j["citation_scan"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string corpus_summary(const CorpusStats& s) {
  std::string out = "papers: " + std::to_string(s.paper_count) + " (skipped " + std::to_string(s.skipped_papers) + ")\n";
  out += "subjects: " + std::to_string(s.subject_count) + "\n";
  out += "citations: " + std::to_string(s.edge_count) + " (skipped " + std::to_string(s.skipped_edges) + ")\n";
  if (s.paper_count > 0) out += "years: " + std::to_string(s.min_year) + "-" + std::to_string(s.max_year) + "\n";
  return out;
}

struct DetectOutputs {
  DetectSummary summary;
  std::vector<CyicEvent> events;
};

DetectOutputs load_detect(const fs::path& dir) {
  const fs::path summary = dir / "detect_summary.json";
  const fs::path events = dir / "events.jsonl";
  if (!fs::is_regular_file(summary) || !fs::is_regular_file(events)) {
    throw PrerequisiteError("no detect outputs in " + dir.string() + "; run `cyic detect` first");
  }
  DetectOutputs out{DetectSummary::from_json(io::read_file(summary)), parse_events_jsonl(io::read_file(events))};
  if (out.events.size() != out.summary.event_count) {
    throw SchemaError("events.jsonl holds " + std::to_string(out.events.size()) + " events, summary says " +
                      std::to_string(out.summary.event_count));
  }
  return out;
}

ClusterMap require_clusters(const RunConfig& c) {
  require_file(c.clusters, "--clusters");
  return load_cluster_map(c.clusters);
}

std::string list_written(const std::vector<fs::path>& written) {
  std::string out;
  for (const auto& p : written) out += "wrote " + p.string() + "\n";
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (window.empty()) throw ConfigError("window is empty");
  if (threads == 0) throw ConfigError("--threads must be at least 1");
  params.validate();
  rules.validate();
}

std::string slug(std::string_view name) {
  std::string out;
  bool gap = false;
  for (char ch : name) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      if (gap && !out.empty()) out += '_';
      out += static_cast<char>(std::tolower(u));
      gap = false;
    } else {
      gap = true;
    }
  }
  return out.empty() ? "cluster" : out;
}

CommandResult cmd_ingest(const RunConfig& c) {
  c.validate();
  require_file(c.papers, "--papers");
  const auto opts = ingest_options(c);
  Corpus corpus = ingest_papers(c.papers, opts);
  std::optional<CitationScan> scan;
  if (!c.citations.empty()) {
    require_file(c.citations, "--citations");
    scan = scan_citations(c.citations, corpus, opts, [](std::span<const CitationEdge>) {});
    corpus.note_citations(*scan);
  }
  Outputs out(c.out);
  out.write("corpus_stats.json", corpus_stats_json(corpus, scan));
  CommandResult r{out.take(), corpus_summary(corpus.stats())};
  r.summary += list_written(r.written);
  return r;
}

CommandResult cmd_detect(const RunConfig& c) {
  c.validate();
  require_file(c.papers, "--papers");
  require_file(c.citations, "--citations");
  std::optional<ClusterMap> map;
  if (!c.clusters.empty()) map = require_clusters(c);

  const auto opts = ingest_options(c);
  Corpus corpus = ingest_papers(c.papers, opts);
  auto streamed = aggregate_file(corpus, c.citations, opts, {c.window, c.counting, c.threads});
  const auto metrics = compute_metrics(streamed.table, c.threads);
  Detection detection;
  if (!metrics.empty()) detection = detect(metrics, c.params, c.threads);

  DetectSummary summary;
  summary.window = c.window;
  summary.counting = c.counting;
  summary.unit = streamed.table.unit;
  summary.params = c.params;
  summary.global_median = detection.global_median;
  summary.pair_count = streamed.table.pairs.size();
  summary.event_count = detection.events.size();
  summary.corpus = corpus.stats();
  summary.yearly_citations = streamed.table.yearly_citations;
  if (map) summary.classification = classify_events(detection.events, *map, c.policy());

  Outputs out(c.out);
  out.write("corpus_stats.json", corpus_stats_json(corpus, streamed.scan));
  write_pair_dump(streamed.table, out.path("pair_counts.tsv"));
  write_metric_dump(metrics, out.path("metrics.tsv"));
  out.write("events.jsonl", events_jsonl(detection.events));
  out.write("events.csv", events_csv(detection.events));
  out.write("detect_summary.json", summary.to_json() + "\n");

  CommandResult r{out.take(), corpus_summary(corpus.stats())};
  r.summary += "pairs: " + std::to_string(summary.pair_count) + "\n";
  r.summary += "global median z: " + text::fixed(summary.global_median, 6) + "\n";
  r.summary += "events: " + std::to_string(summary.event_count) + "\n";
  if (summary.classification && summary.classification->total() > 0) {
    r.summary += "classification: " + summary.classification->report() + "\n";
  }
  r.summary += list_written(r.written);
  return r;
}

namespace {

struct Segmented {
  std::vector<AnnualActivity> activity;
  PhaseSegmentation segmentation;
};

Segmented segment(const DetectOutputs& detect, const ClusterMap& map, const RunConfig& c) {
  Segmented s;
  s.activity = annual_activity(detect.events, map, detect.summary.window, detect.summary.yearly_citations, c.policy());
  s.segmentation = detect_turning_points(s.activity, c.rules);
  return s;
}

}  // namespace

CommandResult cmd_segment(const RunConfig& c) {
  c.validate();
  const auto detect = load_detect(c.out);
  const auto map = require_clusters(c);
  const auto s = segment(detect, map, c);
  const auto growth = growth_stats(s.activity, s.segmentation);

  Outputs out(c.out);
  out.write("segmentation.json", s.segmentation.to_json() + "\n");
  out.write("activity.json", activity_json(s.activity) + "\n");
  out.write("growth.json", growth_json(growth) + "\n");

  CommandResult r{out.take(), {}};
  r.summary += "turning points:";
  for (int tp : s.segmentation.turning_points) r.summary += " " + std::to_string(tp);
  r.summary += s.segmentation.turning_points.empty() ? " none\n" : "\n";
  for (const auto& g : growth) {
    r.summary += "period " + g.period.label + " " + std::to_string(g.period.start) + "-" +
                 std::to_string(g.period.end) + ": " + std::to_string(g.total_events) + " events, " +
                 g.events_per_year + "/year";
    if (g.events_change) r.summary += ", " + *g.events_change + " vs previous";
    r.summary += "\n";
  }
  r.summary += list_written(r.written);
  return r;
}

CommandResult cmd_report(const RunConfig& c) {
  c.validate();
  const auto detect = load_detect(c.out);
  const auto map = require_clusters(c);
  const YearWindow window = detect.summary.window;

  PhaseSegmentation seg;
  const fs::path seg_path = c.out / "segmentation.json";
  if (fs::is_regular_file(seg_path)) {
    seg = PhaseSegmentation::from_json(io::read_file(seg_path));
    if (seg.window != window) throw SchemaError("segmentation.json window differs from the detect run");
  } else {
    seg = segment(detect, map, c).segmentation;
  }

  Outputs out(c.out);
  const auto rankings = rank_clusters(detect.events, seg, map, c.policy());
  out.write("rankings.json", rankings_json(rankings) + "\n");
  for (const auto& r : rankings) out.write("rankings_" + r.period.label + ".csv", ranking_csv(r));

  const std::size_t np = seg.periods.size();
  const std::string pa = !c.period_a.empty() ? c.period_a : seg.periods[np >= 2 ? np - 2 : 0].label;
  const std::string pb = !c.period_b.empty() ? c.period_b : seg.periods[np - 1].label;
  const auto delta = delta_matrix(detect.events, seg, pa, pb, map, {c.exclude}, c.policy());
  out.write("delta_matrix.json", delta_matrix_json(delta) + "\n");
  out.write("delta_matrix.csv", delta_matrix_csv(delta));

  std::vector<std::string> focal = c.focal;
  if (focal.empty()) focal = map.clusters();
  for (const auto& f : focal) {
    const auto timeline = partner_timeline(detect.events, f, c.top_k, map, window, c.policy());
    out.write("partners_" + slug(f) + ".json", partner_timeline_json(timeline) + "\n");
  }

  ClusterPublications publications;
  if (!c.papers.empty()) {
    require_file(c.papers, "--papers");
    publications = cluster_publications(ingest_papers(c.papers, ingest_options(c)), map, window, c.policy());
  }
  out.write("timeline.json", timeline_json(export_timeline(detect.events, publications, map, window, c.policy())) + "\n");

  CommandResult r{out.take(), {}};
  for (const auto& rk : rankings) {
    r.summary += "period " + rk.period.label + ": " + std::to_string(rk.unique_events) + " cross-cluster events";
    if (!rk.rows.empty() && rk.rows.front().count > 0) r.summary += ", top " + rk.rows.front().cluster;
    r.summary += "\n";
  }
  r.summary += "delta matrix: " + delta.period_b + " minus " + delta.period_a + "\n";
  r.summary += list_written(r.written);
  return r;
}

CommandResult cmd_simulate(const RunConfig& c) {
  require_file(c.scenario, "--scenario");
  auto scenario = synth::Scenario::from_json(io::read_file(c.scenario));
  if (c.seed) scenario.seed = *c.seed;
  c.params.validate();

  Outputs out(c.out);
  const auto files = synth::write_corpus(scenario, c.out, c.gzip);
  const auto manifest = synth::Manifest::from_json(io::read_file(files.manifest));
  for (const auto& p : {files.papers, files.citations, files.clusters, files.manifest}) out.path(p.filename().string());

  CommandResult r{{}, {}};
  r.summary += "seed: " + std::to_string(scenario.seed) + "\n";
  r.summary += "papers: " + std::to_string(manifest.paper_count) + "\n";
  r.summary += "citations: " + std::to_string(manifest.edge_count) + "\n";
  if (scenario.mode == synth::RateMode::Deterministic) {
    auto expected = synth::expected_detections(scenario, c.params);
    classify_events(expected, load_cluster_map(files.clusters));
    out.write("expected_events.jsonl", events_jsonl(expected));
    r.summary += "expected events: " + std::to_string(expected.size()) + "\n";
  }
  r.written = out.take();
  r.summary += list_written(r.written);
  return r;
}

namespace {

using Values = std::vector<std::string>;
using Setter = std::function<void(RunConfig&, const Values&)>;

double to_double(const Values& v, std::string_view name) {
  const auto d = text::parse_double(v.back());
  if (!d) throw ConfigError(std::string(name) + " expects a number, got '" + v.back() + "'");
  return *d;
}

std::int64_t to_int(const Values& v, std::string_view name, std::int64_t min) {
  const auto i = text::parse_int(v.back());
  if (!i || *i < min) {
    throw ConfigError(std::string(name) + " expects an integer >= " + std::to_string(min) + ", got '" + v.back() + "'");
  }
  return *i;
}

bool to_bool(const Values& v, std::string_view name) {
  if (v.back() == "true" || v.back() == "1") return true;
  if (v.back() == "false" || v.back() == "0") return false;
  throw ConfigError(std::string(name) + " expects true|false, got '" + v.back() + "'");
}

/// Registers options whose values are applied after parsing, first from a JSON config
/// file and then from the command line, so flags override the file.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  void value(const std::string& name, const std::string& help, Setter set, bool repeat = false) {
    auto& storage = values_.emplace_back();
    CLI::Option* opt = nullptr;
    if (repeat) {
      opt = app_->add_option("--" + name, storage, help);
    } else {
      auto& single = singles_.emplace_back();
      opt = app_->add_option_function<std::string>(
          "--" + name, [&storage, &single](const std::string& v) { storage = {v}; }, help);
    }
    add(name, opt, storage, std::move(set));
  }

  void flag(const std::string& name, const std::string& help, Setter set) {
    auto& storage = values_.emplace_back();
    auto* opt = app_->add_flag("--" + name, help);
    add(name, opt, storage, std::move(set));
  }

  void apply(RunConfig& c, const std::string& config_path) const {
    if (!config_path.empty()) apply_file(c, config_path);
    for (const auto& e : entries_) {
      if (e.opt->count() == 0) continue;
      if (e.opt->get_expected_min() == 0) {
        e.set(c, {"true"});
      } else {
        e.set(c, *e.storage);
      }
    }
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt;
    const Values* storage;
    Setter set;
  };

  void add(const std::string& name, CLI::Option* opt, const Values& storage, Setter set) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    entries_.push_back({key, opt, &storage, std::move(set)});
  }

  void apply_file(RunConfig& c, const std::string& path) const {
    require_file(path, "--config");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
      if (it == entries_.end()) throw ConfigError("config file " + path + ": unknown key '" + key + "'");
      Values v;
      const auto scalar = [](const nlohmann::json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
      if (value.is_array()) {
        for (const auto& x : value) v.push_back(scalar(x));
        if (v.empty()) {
          it->set(c, {});
          continue;
        }
      } else {
        v.push_back(scalar(value));
      }
      it->set(c, v);
    }
  }

  CLI::App* app_;
  std::deque<Values> values_;
  std::deque<std::string> singles_;
  std::vector<Entry> entries_;
};

void common_flags(Binder& b) {
  b.value("papers", "Papers file: paper_id<TAB>year<TAB>subjects (';'-joined), optionally .gz",
          [](RunConfig& c, const Values& v) { c.papers = v.back(); });
  b.value("citations", "Citations file: citing_id<TAB>cited_id, optionally .gz",
          [](RunConfig& c, const Values& v) { c.citations = v.back(); });
  b.value("clusters", "Cluster map: subject<TAB>cluster<TAB>group (natural|humsoc)",
          [](RunConfig& c, const Values& v) { c.clusters = v.back(); });
  b.value("window", "Analysis window START:END (default 1981:2020)",
          [](RunConfig& c, const Values& v) { c.window = YearWindow::parse(v.back()); });
  b.value("out", "Output directory (default cyic-out)", [](RunConfig& c, const Values& v) { c.out = v.back(); });
  b.value("sigma-mult", "Slope threshold in standard deviations (default 2.0)",
          [](RunConfig& c, const Values& v) { c.params.sigma_multiplier = to_double(v, "--sigma-mult"); });
  b.value("counting", "Citation counting: full|fractional (default full)",
          [](RunConfig& c, const Values& v) { c.counting = parse_counting_mode(v.back()); });
  b.flag("strict", "Fail on the first malformed input row instead of skipping it",
         [](RunConfig& c, const Values& v) { c.strict = to_bool(v, "--strict"); });
  b.value("threads", "Worker threads for aggregation and detection (default 1)",
          [](RunConfig& c, const Values& v) { c.threads = static_cast<unsigned>(to_int(v, "--threads", 1)); });
  b.value("seed", "Random seed (overrides the scenario seed in simulate)",
          [](RunConfig& c, const Values& v) { c.seed = static_cast<std::uint64_t>(to_int(v, "--seed", 0)); });
  b.flag("lenient-clusters", "Put subjects missing from the cluster map into 'Unassigned' instead of failing",
         [](RunConfig& c, const Values& v) { c.lenient_clusters = to_bool(v, "--lenient-clusters"); });
}

void detection_flags(Binder& b) {
  b.value("sigma-kind", "Standard deviation: population|sample (default population)",
          [](RunConfig& c, const Values& v) { c.params.sigma_kind = parse_sigma_kind(v.back()); });
  b.value("median-scope", "Global median over all-pair-year-values|pair-means (default all-pair-year-values)",
          [](RunConfig& c, const Values& v) { c.params.median_scope = parse_median_scope(v.back()); });
}

void segmentation_flags(Binder& b) {
  b.value("emergence-count-mult", "Emergence: multiplier on the prior event count (default 2.0)",
          [](RunConfig& c, const Values& v) { c.rules.emergence_count_multiplier = to_double(v, "--emergence-count-mult"); });
  b.value("emergence-cluster-mult", "Emergence: multiplier on the prior cluster count (default 2.0)",
          [](RunConfig& c, const Values& v) {
            c.rules.emergence_cluster_multiplier = to_double(v, "--emergence-cluster-mult");
          });
  b.value("emergence-baseline", "Emergence baseline over prior years: max|average (default max)",
          [](RunConfig& c, const Values& v) {
            if (v.back() == "max") {
              c.rules.emergence_baseline = EmergenceBaseline::PriorMaximum;
            } else if (v.back() == "average") {
              c.rules.emergence_baseline = EmergenceBaseline::PriorAverage;
            } else {
              throw ConfigError("--emergence-baseline must be max|average, got '" + v.back() + "'");
            }
          });
  b.value("accel-growth", "Acceleration: year-over-year growth threshold (default 0.5)",
          [](RunConfig& c, const Values& v) { c.rules.acceleration_growth_threshold = to_double(v, "--accel-growth"); });
  b.value("accel-base", "Acceleration: minimum previous-year event count (default 100)",
          [](RunConfig& c, const Values& v) { c.rules.acceleration_base_threshold = to_double(v, "--accel-base"); });
  b.value("collapse-years", "Firings this close to the previous firing are folded into it (default 2)",
          [](RunConfig& c, const Values& v) { c.rules.collapse_years = static_cast<int>(to_int(v, "--collapse-years", 0)); });
}

void report_flags(Binder& b) {
  b.value(
      "focal", "Focal cluster for partner timelines; repeatable (default every cluster)",
      [](RunConfig& c, const Values& v) { c.focal = v; }, true);
  b.value("top-k", "Partners kept per year (default 5)",
          [](RunConfig& c, const Values& v) { c.top_k = static_cast<std::size_t>(to_int(v, "--top-k", 1)); });
  b.value("period-a", "Earlier period label for the delta matrix (default second to last)",
          [](RunConfig& c, const Values& v) { c.period_a = v.back(); });
  b.value("period-b", "Later period label for the delta matrix (default last)",
          [](RunConfig& c, const Values& v) { c.period_b = v.back(); });
  b.value(
      "exclude", "Cluster left out of the delta matrix; repeatable (default General)",
      [](RunConfig& c, const Values& v) { c.exclude = v; }, true);
}

void simulate_flags(Binder& b) {
  b.value("scenario", "Scenario JSON file", [](RunConfig& c, const Values& v) { c.scenario = v.back(); });
  b.flag("gzip", "Write papers and citations gzip-compressed",
         [](RunConfig& c, const Values& v) { c.gzip = to_bool(v, "--gzip"); });
}

int exit_code(std::string_view kind) {
  static const std::map<std::string_view, int> kCodes{
      {"config", 2}, {"input", 3}, {"schema", 4}, {"prerequisite", 5}, {"domain", 6}};
  const auto it = kCodes.find(kind);
  return it == kCodes.end() ? 1 : it->second;
}

int report_error(std::ostream& err, std::string_view kind, std::string_view message, const InputError* input = nullptr) {
  ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  if (input) {
    j["error"]["path"] = input->path();
    j["error"]["line"] = input->line();
  }
  err << j.dump() << "\n";
  return exit_code(kind);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Critical years for interdisciplinary citations"};
  app.name("cyic");
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::unique_ptr<Binder> binder;
    std::string config;
    std::function<CommandResult(const RunConfig&)> fn;
  };
  std::deque<Sub> subs;
  const auto add = [&](const std::string& name, const std::string& help,
                       std::function<CommandResult(const RunConfig&)> fn,
                       std::initializer_list<void (*)(Binder&)> groups) {
    auto& s = subs.emplace_back(Sub{app.add_subcommand(name, help), nullptr, {}, std::move(fn)});
    s.binder = std::make_unique<Binder>(s.app);
    s.app->add_option("--config", s.config, "JSON config file; command-line flags override its keys");
    common_flags(*s.binder);
    for (auto g : groups) g(*s.binder);
  };
  add("ingest", "Validate papers (and citations) and write corpus_stats.json", cmd_ingest, {});
  add("detect", "Aggregate pair counts, compute metrics and detect critical years", cmd_detect, {detection_flags});
  add("segment", "Split the window into periods from detect outputs", cmd_segment, {segmentation_flags});
  add("report", "Write rankings, delta matrix, partner timelines and the timeline export", cmd_report,
      {segmentation_flags, report_flags});
  add("simulate", "Generate a synthetic corpus with a ground-truth manifest", cmd_simulate,
      {detection_flags, simulate_flags});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    return report_error(err, "config", e.what());
  }

  try {
    for (auto& s : subs) {
      if (!s.app->parsed()) continue;
      RunConfig config;
      s.binder->apply(config, s.config);
      const auto result = s.fn(config);
      out << result.summary;
      return 0;
    }
    return report_error(err, "config", "no subcommand given");
  } catch (const InputError& e) {
    return report_error(err, e.kind(), e.what(), &e);
  } catch (const Error& e) {
    return report_error(err, e.kind(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, "io", e.what());
  } catch (const std::exception& e) {
    return report_error(err, "internal", e.what());
  }
}

}  // namespace cyic::cli
