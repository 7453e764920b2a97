#include "cyic/pipeline.hpp"

#include "cyic/error.hpp"
#include "cyic/schema.hpp"
#include "cyic/text.hpp"

#include <json.hpp>

namespace cyic {

using nlohmann::ordered_json;

StreamedAggregation aggregate_file(Corpus& corpus, const std::filesystem::path& citations,
                                   const IngestOptions& ingest, const AggregationOptions& options,
                                   std::size_t batch_size) {
  PairAggregator aggregator(corpus, options);
  StreamedAggregation out;
  out.scan = scan_citations(
      citations, corpus, ingest, [&](std::span<const CitationEdge> batch) { aggregator.add(batch); }, batch_size);
  corpus.note_citations(out.scan);
  out.table = aggregator.finalize();
  return out;
}

std::string events_jsonl(std::span<const CyicEvent> events) {
  std::string out;
  for (const auto& e : events) {
    ordered_json j;
    j["pair_a"] = e.pair.a;
    j["pair_b"] = e.pair.b;
    j["year"] = e.year;
    j["z_value"] = e.z_value;
    j["slope"] = e.slope;
    j["pair_mean"] = e.pair_mean;
    j["pair_sigma"] = e.pair_sigma;
    j["global_median"] = e.global_median;
    j["cross_cluster"] = e.cross_cluster ? ordered_json(*e.cross_cluster) : ordered_json(nullptr);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<CyicEvent> parse_events_jsonl(std::string_view text) {
  std::vector<CyicEvent> out;
  std::size_t line_no = 0;
  for (auto line : text::split(text, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      CyicEvent e;
      e.pair = SubjectPair::of(j.at("pair_a").get<std::string>(), j.at("pair_b").get<std::string>());
      e.year = j.at("year").get<int>();
      e.z_value = j.at("z_value").get<double>();
      e.slope = j.at("slope").get<double>();
      e.pair_mean = j.at("pair_mean").get<double>();
      e.pair_sigma = j.at("pair_sigma").get<double>();
      e.global_median = j.at("global_median").get<double>();
      const auto& cc = j.at("cross_cluster");
      if (!cc.is_null()) e.cross_cluster = cc.get<bool>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw SchemaError("events line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const DomainError& ex) {
      throw SchemaError("events line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

std::string events_csv(std::span<const CyicEvent> events) {
  std::string out = "pair_a,pair_b,year,z_value,slope,pair_mean,pair_sigma,global_median,cross_cluster\n";
  for (const auto& e : events) {
    out += text::csv_field(e.pair.a) + "," + text::csv_field(e.pair.b) + "," + std::to_string(e.year);
    for (double v : {e.z_value, e.slope, e.pair_mean, e.pair_sigma, e.global_median}) {
      out += "," + text::fixed(v, 6);
    }
    out += ",";
    if (e.cross_cluster) out += *e.cross_cluster ? "true" : "false";
    out += "\n";
  }
  return out;
}

std::string DetectSummary::to_json() const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "detect-summary";
  j["window"] = {window.start, window.end};
  j["counting"] = to_string(counting);
  j["unit"] = unit;
  j["params"] = {{"sigma_multiplier", params.sigma_multiplier},
                 {"sigma_kind", to_string(params.sigma_kind)},
                 {"median_scope", to_string(params.median_scope)},
                 {"slope_method", to_string(params.slope_method)}};
  j["global_median"] = global_median;
  j["pair_count"] = pair_count;
  j["event_count"] = event_count;
  j["corpus_stats"] = ordered_json::parse(corpus.to_json());
  j["yearly_citations"] = yearly_citations;
  if (classification) {
    j["classification"] = {{"cross", classification->cross},
                           {"intra", classification->intra},
                           {"total", classification->total()},
                           {"cross_share", classification->total() ? classification->cross_share() : ""}};
  } else {
    j["classification"] = nullptr;
  }
  return j.dump(2);
}

DetectSummary DetectSummary::from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw SchemaError("detect summary schema_version " + j.at("schema_version").dump() + ", expected " +
                        std::to_string(kSchemaVersion));
    }
    DetectSummary s;
    s.window = {j.at("window").at(0).get<int>(), j.at("window").at(1).get<int>()};
    s.counting = parse_counting_mode(j.at("counting").get<std::string>());
    s.unit = j.at("unit").get<std::uint64_t>();
    const auto& p = j.at("params");
    s.params.sigma_multiplier = p.at("sigma_multiplier").get<double>();
    s.params.sigma_kind = parse_sigma_kind(p.at("sigma_kind").get<std::string>());
    s.params.median_scope = parse_median_scope(p.at("median_scope").get<std::string>());
    s.global_median = j.at("global_median").get<double>();
    s.pair_count = j.at("pair_count").get<std::uint64_t>();
    s.event_count = j.at("event_count").get<std::uint64_t>();
    const auto& c = j.at("corpus_stats");
    s.corpus.paper_count = c.at("paper_count").get<std::uint64_t>();
    s.corpus.edge_count = c.at("edge_count").get<std::uint64_t>();
    s.corpus.skipped_edges = c.at("skipped_edges").get<std::uint64_t>();
    s.corpus.subject_count = c.at("subject_count").get<std::uint64_t>();
    s.corpus.skipped_papers = c.at("skipped_papers").get<std::uint64_t>();
    if (!c.at("year_range").is_null()) {
      s.corpus.min_year = c.at("year_range").at(0).get<int>();
      s.corpus.max_year = c.at("year_range").at(1).get<int>();
    }
    s.yearly_citations = j.at("yearly_citations").get<std::vector<std::uint64_t>>();
    const auto& cl = j.at("classification");
    if (!cl.is_null()) s.classification = ClassificationSummary{cl.at("cross").get<std::uint64_t>(), cl.at("intra").get<std::uint64_t>()};
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed detect summary: ") + e.what());
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("malformed detect summary: ") + e.what());
  }
}

}  // namespace cyic
