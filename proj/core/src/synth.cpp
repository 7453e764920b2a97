#include "cyic/synth.hpp"

#include "cyic/error.hpp"
#include "cyic/io.hpp"
#include "cyic/schema.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

namespace cyic::synth {

using nlohmann::ordered_json;

namespace {

std::string_view to_string(RateMode mode) { return mode == RateMode::Deterministic ? "deterministic" : "stochastic"; }

RateMode parse_rate_mode(std::string_view s) {
  if (s == "deterministic") return RateMode::Deterministic;
  if (s == "stochastic") return RateMode::Stochastic;
  throw ConfigError("mode must be deterministic|stochastic, got '" + std::string(s) + "'");
}

std::string_view to_string(BalanceMode mode) { return mode == BalanceMode::Scale ? "scale" : "equalize"; }

BalanceMode parse_balance_mode(std::string_view s) {
  if (s == "scale") return BalanceMode::Scale;
  if (s == "equalize") return BalanceMode::Equalize;
  throw ConfigError("balance_mode must be scale|equalize, got '" + std::string(s) + "'");
}

ordered_json planted_json(const std::vector<PlantedEvent>& events) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : events) {
    arr.push_back({{"a", e.a},
                   {"b", e.b},
                   {"year", e.year},
                   {"surge_factor", e.surge_factor},
                   {"balance_mode", to_string(e.balance)}});
  }
  return arr;
}

std::vector<PlantedEvent> planted_from_json(const nlohmann::json& arr) {
  std::vector<PlantedEvent> out;
  for (const auto& e : arr) {
    out.push_back({e.at("a").get<std::string>(), e.at("b").get<std::string>(), e.at("year").get<int>(),
                   e.at("surge_factor").get<double>(),
                   parse_balance_mode(e.value("balance_mode", std::string("equalize")))});
  }
  return out;
}

/// Count schedule plus the paper pools that realize it.
struct Plan {
  std::size_t subjects = 0;
  std::size_t years = 0;
  std::vector<std::uint64_t> counts;  // [from][to][t]
  std::vector<std::uint32_t> pool;    // [subject][t]
  std::vector<std::vector<std::int32_t>> extra;  // [subject * years + t][i], -1 for none

  std::uint64_t count(std::size_t x, std::size_t y, std::size_t t) const {
    return counts[(x * subjects + y) * years + t];
  }
  std::uint32_t pool_of(std::size_t x, std::size_t t) const { return pool[x * years + t]; }
  std::int32_t extra_of(std::size_t x, std::size_t t, std::size_t i) const {
    const auto& v = extra[x * years + t];
    return v.empty() ? -1 : v[i];
  }
};

Plan make_plan(const Scenario& s) {
  s.validate();
  Plan plan;
  plan.subjects = s.subjects.size();
  plan.years = s.window.size();
  plan.counts.assign(plan.subjects * plan.subjects * plan.years, 0);

  std::mt19937_64 rng(s.seed);
  for (std::size_t x = 0; x < plan.subjects; ++x) {
    for (std::size_t y = 0; y < plan.subjects; ++y) {
      if (x == y) continue;
      for (std::size_t t = 0; t < plan.years; ++t) {
        const double rate = s.rate(x, y, s.window.year_at(t));
        std::uint64_t k = 0;
        if (rate > 0.0) {
          if (s.mode == RateMode::Deterministic) {
            k = static_cast<std::uint64_t>(std::llround(rate));
          } else {
            k = static_cast<std::uint64_t>(std::poisson_distribution<long long>(rate)(rng));
          }
        }
        plan.counts[(x * plan.subjects + y) * plan.years + t] = k;
      }
    }
  }

  plan.pool.assign(plan.subjects * plan.years, s.papers_per_subject_year);
  for (std::size_t x = 0; x < plan.subjects; ++x) {
    for (std::size_t t = 0; t < plan.years; ++t) {
      auto& p = plan.pool[x * plan.years + t];
      for (std::size_t y = 0; y < plan.subjects; ++y) {
        p = static_cast<std::uint32_t>(std::max<std::uint64_t>(p, plan.count(x, y, t)));
      }
    }
  }

  plan.extra.resize(plan.subjects * plan.years);
  if (s.multi_subject_fraction > 0.0) {
    std::mt19937_64 mix(s.seed ^ 0x9e3779b97f4a7c15ULL);
    std::bernoulli_distribution coin(s.multi_subject_fraction);
    std::uniform_int_distribution<std::size_t> other(0, plan.subjects - 2);
    for (std::size_t t = 0; t < plan.years; ++t) {
      for (std::size_t x = 0; x < plan.subjects; ++x) {
        auto& v = plan.extra[x * plan.years + t];
        v.assign(plan.pool_of(x, t), -1);
        for (auto& e : v) {
          if (!coin(mix)) continue;
          std::size_t pick = other(mix);
          if (pick >= x) ++pick;
          e = static_cast<std::int32_t>(pick);
        }
      }
    }
  }
  return plan;
}

std::string paper_id(std::size_t x, int year, std::size_t i) {
  return "p" + std::to_string(x) + "_" + std::to_string(year) + "_" + std::to_string(i);
}

/// Visits every paper then every edge in a fixed order.
template <class PaperFn, class EdgeFn>
void realize(const Scenario& s, const Plan& plan, PaperFn&& on_paper, EdgeFn&& on_edge) {
  for (std::size_t t = 0; t < plan.years; ++t) {
    for (std::size_t x = 0; x < plan.subjects; ++x) {
      for (std::size_t i = 0; i < plan.pool_of(x, t); ++i) on_paper(x, t, i);
    }
  }
  for (std::size_t t = 0; t < plan.years; ++t) {
    for (std::size_t x = 0; x < plan.subjects; ++x) {
      for (std::size_t y = 0; y < plan.subjects; ++y) {
        if (x == y) continue;
        const std::uint64_t k = plan.count(x, y, t);
        const std::uint32_t target_pool = plan.pool_of(y, t);
        for (std::uint64_t i = 0; i < k; ++i) on_edge(x, t, static_cast<std::size_t>(i), y, static_cast<std::size_t>(i % target_pool));
      }
    }
  }
  (void)s;
}

/// Realized full-counting directed counts, recounted from the generated papers and edges.
struct Recount {
  std::size_t subjects;
  std::size_t years;
  std::vector<std::uint64_t> directed;
  std::uint64_t papers = 0;
  std::uint64_t edges = 0;

  void paper() { ++papers; }
  void edge(const Plan& plan, std::size_t x, std::size_t t, std::size_t i, std::size_t y, std::size_t j) {
    ++edges;
    const std::int32_t from_extra = plan.extra_of(x, t, i);
    const std::int32_t to_extra = plan.extra_of(y, t, j);
    const std::int64_t from[2] = {static_cast<std::int64_t>(x), from_extra};
    const std::int64_t to[2] = {static_cast<std::int64_t>(y), to_extra};
    for (auto u : from) {
      if (u < 0) continue;
      for (auto v : to) {
        if (v < 0 || u == v) continue;
        ++directed[(static_cast<std::size_t>(u) * subjects + static_cast<std::size_t>(v)) * years + t];
      }
    }
  }
};

Manifest make_manifest(const Scenario& s, const Recount& rc) {
  Manifest m;
  m.seed = s.seed;
  m.window = s.window;
  m.mode = s.mode;
  m.paper_count = rc.papers;
  m.edge_count = rc.edges;
  for (const auto& subj : s.subjects) m.subjects.push_back(subj.label);
  for (std::size_t x = 0; x < rc.subjects; ++x) {
    for (std::size_t y = 0; y < rc.subjects; ++y) {
      const auto* first = rc.directed.data() + (x * rc.subjects + y) * rc.years;
      if (std::all_of(first, first + rc.years, [](std::uint64_t v) { return v == 0; })) continue;
      m.directed[{s.subjects[x].label, s.subjects[y].label}] = std::vector<std::uint64_t>(first, first + rc.years);
    }
  }
  m.planted_events = s.planted_events;
  return m;
}

std::vector<std::string> subject_list(const Scenario& s, const Plan& plan, std::size_t x, std::size_t t,
                                      std::size_t i) {
  std::vector<std::string> out{s.subjects[x].label};
  const auto e = plan.extra_of(x, t, i);
  if (e >= 0) out.push_back(s.subjects[static_cast<std::size_t>(e)].label);
  return out;
}

ClusterMap scenario_clusters(const Scenario& s) {
  std::vector<ClusterRow> rows;
  for (const auto& subj : s.subjects) rows.push_back({subj.label, subj.cluster, subj.group});
  return ClusterMap::from_rows(rows);
}

}  // namespace

void Scenario::validate() const {
  if (subjects.empty()) throw ConfigError("scenario has no subjects");
  if (window.empty()) throw ConfigError("scenario window is empty");
  std::set<std::string, std::less<>> labels;
  for (const auto& s : subjects) {
    if (s.label.empty() || s.label.find_first_of("\t;\n\r") != std::string::npos) {
      throw ConfigError("subject labels must be non-empty without tabs, ';' or newlines: '" + s.label + "'");
    }
    if (s.cluster.empty()) throw ConfigError("subject '" + s.label + "' has no cluster");
    if (s.group == ClusterGroup::Unassigned) throw ConfigError("subject '" + s.label + "' needs a group");
    if (!labels.insert(s.label).second) throw ConfigError("duplicate subject '" + s.label + "'");
  }
  const auto known = [&](const std::string& l) {
    if (!labels.contains(l)) throw ConfigError("unknown subject '" + l + "' in scenario");
  };
  const auto rate_ok = [](double r) { return r >= 0.0 && std::isfinite(r); };
  if (!rate_ok(default_rate)) throw ConfigError("default_rate must be a non-negative number");
  for (const auto& r : baseline_rates) {
    known(r.from);
    known(r.to);
    if (r.from == r.to) throw ConfigError("baseline rate from a subject to itself: '" + r.from + "'");
    if (!rate_ok(r.rate)) throw ConfigError("rates must be non-negative");
  }
  for (const auto& e : planted_events) {
    known(e.a);
    known(e.b);
    if (e.a == e.b) throw ConfigError("planted event on a single subject '" + e.a + "'");
    if (!window.contains(e.year)) throw ConfigError("planted event year " + std::to_string(e.year) + " outside window");
    if (!(e.surge_factor > 1.0) || !std::isfinite(e.surge_factor)) throw ConfigError("surge_factor must exceed 1");
  }
  if (papers_per_subject_year == 0) throw ConfigError("papers_per_subject_year must be at least 1");
  if (!(multi_subject_fraction >= 0.0 && multi_subject_fraction <= 1.0)) {
    throw ConfigError("multi_subject_fraction must lie in [0, 1]");
  }
  if (multi_subject_fraction > 0.0 && subjects.size() < 2) {
    throw ConfigError("multi-subject papers need at least two subjects");
  }
}

double Scenario::rate(std::size_t from, std::size_t to, int year) const {
  const auto& lf = subjects.at(from).label;
  const auto& lt = subjects.at(to).label;
  const auto base = [&](const std::string& f, const std::string& t) {
    for (const auto& r : baseline_rates) {
      if (r.from == f && r.to == t) return r.rate;
    }
    return default_rate;
  };
  double forward = base(lf, lt);
  double backward = base(lt, lf);
  for (const auto& e : planted_events) {
    if (year < e.year) continue;
    if (!((e.a == lf && e.b == lt) || (e.a == lt && e.b == lf))) continue;
    if (e.balance == BalanceMode::Scale) {
      forward *= e.surge_factor;
      backward *= e.surge_factor;
    } else {
      forward = backward = e.surge_factor * std::max(forward, backward);
    }
  }
  return forward;
}

Scenario Scenario::from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    Scenario s;
    s.seed = j.value("seed", std::uint64_t{0});
    const auto& w = j.at("window");
    s.window = {w.at(0).get<int>(), w.at(1).get<int>()};
    s.mode = parse_rate_mode(j.value("mode", std::string("deterministic")));
    for (const auto& subj : j.at("subjects")) {
      s.subjects.push_back({subj.at("label").get<std::string>(),
                            subj.value("cluster", subj.at("label").get<std::string>()),
                            parse_cluster_group(subj.value("group", std::string("natural")))});
    }
    s.default_rate = j.value("default_rate", 0.0);
    for (const auto& r : j.value("baseline_rates", nlohmann::json::array())) {
      s.baseline_rates.push_back({r.at("from").get<std::string>(), r.at("to").get<std::string>(),
                                  r.at("rate").get<double>()});
    }
    s.planted_events = planted_from_json(j.value("planted_events", nlohmann::json::array()));
    s.papers_per_subject_year = j.value("papers_per_subject_year", std::uint32_t{1});
    s.multi_subject_fraction = j.value("multi_subject_fraction", 0.0);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

std::string Scenario::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["window"] = {window.start, window.end};
  j["mode"] = to_string(mode);
  j["subjects"] = ordered_json::array();
  for (const auto& s : subjects) {
    j["subjects"].push_back({{"label", s.label}, {"cluster", s.cluster}, {"group", cyic::to_string(s.group)}});
  }
  j["default_rate"] = default_rate;
  j["baseline_rates"] = ordered_json::array();
  for (const auto& r : baseline_rates) j["baseline_rates"].push_back({{"from", r.from}, {"to", r.to}, {"rate", r.rate}});
  j["planted_events"] = planted_json(planted_events);
  j["papers_per_subject_year"] = papers_per_subject_year;
  j["multi_subject_fraction"] = multi_subject_fraction;
  return j.dump(2);
}

std::vector<std::uint64_t> Manifest::flow(std::string_view from, std::string_view to) const {
  const auto it = directed.find({std::string(from), std::string(to)});
  if (it == directed.end()) return std::vector<std::uint64_t>(window.size(), 0);
  return it->second;
}

std::uint64_t Manifest::total_flow(std::string_view from, std::string_view to) const {
  std::uint64_t total = 0;
  for (auto v : flow(from, to)) total += v;
  return total;
}

std::string Manifest::to_json() const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = seed;
  j["window"] = {window.start, window.end};
  j["mode"] = to_string(mode);
  j["paper_count"] = paper_count;
  j["edge_count"] = edge_count;
  j["subjects"] = subjects;
  j["directed"] = ordered_json::array();
  for (const auto& [key, counts] : directed) {
    j["directed"].push_back({{"from", key.first}, {"to", key.second}, {"counts", counts}});
  }
  j["planted_events"] = planted_json(planted_events);
  return j.dump(2);
}

Manifest Manifest::from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw SchemaError("manifest schema_version mismatch");
    Manifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.window = {j.at("window").at(0).get<int>(), j.at("window").at(1).get<int>()};
    m.mode = parse_rate_mode(j.at("mode").get<std::string>());
    m.paper_count = j.at("paper_count").get<std::uint64_t>();
    m.edge_count = j.at("edge_count").get<std::uint64_t>();
    m.subjects = j.at("subjects").get<std::vector<std::string>>();
    for (const auto& d : j.at("directed")) {
      m.directed[{d.at("from").get<std::string>(), d.at("to").get<std::string>()}] =
          d.at("counts").get<std::vector<std::uint64_t>>();
    }
    m.planted_events = planted_from_json(j.at("planted_events"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed manifest JSON: ") + e.what());
  }
}

GeneratedCorpus generate(const Scenario& scenario) {
  const Plan plan = make_plan(scenario);
  GeneratedCorpus out;
  Recount rc{plan.subjects, plan.years, std::vector<std::uint64_t>(plan.counts.size(), 0)};
  realize(
      scenario, plan,
      [&](std::size_t x, std::size_t t, std::size_t i) {
        const int year = scenario.window.year_at(t);
        out.papers.push_back({paper_id(x, year, i), year, subject_list(scenario, plan, x, t, i)});
        rc.paper();
      },
      [&](std::size_t x, std::size_t t, std::size_t i, std::size_t y, std::size_t j) {
        const int year = scenario.window.year_at(t);
        out.citations.emplace_back(paper_id(x, year, i), paper_id(y, year, j));
        rc.edge(plan, x, t, i, y, j);
      });
  out.clusters = scenario_clusters(scenario);
  out.manifest = make_manifest(scenario, rc);
  return out;
}

CorpusFiles write_corpus(const Scenario& scenario, const std::filesystem::path& dir, bool gzip) {
  const Plan plan = make_plan(scenario);
  std::filesystem::create_directories(dir);
  const std::string ext = gzip ? ".tsv.gz" : ".tsv";
  CorpusFiles files{dir / ("papers" + ext), dir / ("citations" + ext), dir / "clusters.tsv", dir / "manifest.json"};

  Recount rc{plan.subjects, plan.years, std::vector<std::uint64_t>(plan.counts.size(), 0)};
  io::Writer papers(files.papers);
  io::Writer citations(files.citations);
  papers << "paper_id\tyear\tsubjects\n";
  citations << "citing_id\tcited_id\n";
  realize(
      scenario, plan,
      [&](std::size_t x, std::size_t t, std::size_t i) {
        const int year = scenario.window.year_at(t);
        papers << paper_id(x, year, i) << '\t' << std::to_string(year) << '\t' << scenario.subjects[x].label;
        const auto e = plan.extra_of(x, t, i);
        if (e >= 0) papers << ';' << scenario.subjects[static_cast<std::size_t>(e)].label;
        papers << '\n';
        rc.paper();
      },
      [&](std::size_t x, std::size_t t, std::size_t i, std::size_t y, std::size_t j) {
        const int year = scenario.window.year_at(t);
        citations << paper_id(x, year, i) << '\t' << paper_id(y, year, j) << '\n';
        rc.edge(plan, x, t, i, y, j);
      });
  papers.close();
  citations.close();
  write_cluster_map(scenario_clusters(scenario), files.clusters);
  io::write_file(files.manifest, make_manifest(scenario, rc).to_json() + "\n");
  return files;
}

std::vector<CyicEvent> oracle_detections(const Manifest& manifest, const DetectionParams& params) {
  params.validate();
  const std::size_t n = manifest.window.size();
  if (n < 2) throw DomainError("oracle needs a window of at least 2 years");

  std::vector<std::string> labels = manifest.subjects;
  std::sort(labels.begin(), labels.end());

  struct Candidate {
    std::string a;
    std::string b;
    std::vector<double> z;
  };
  std::vector<Candidate> pairs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      const auto forward = manifest.flow(labels[i], labels[j]);
      const auto backward = manifest.flow(labels[j], labels[i]);
      bool any = false;
      Candidate c{labels[i], labels[j], std::vector<double>(n, 0.0)};
      for (std::size_t t = 0; t < n; ++t) {
        const double ir = static_cast<double>(forward[t]);
        const double ic = static_cast<double>(backward[t]);
        any = any || forward[t] != 0 || backward[t] != 0;
        const double hi = ir > ic ? ir : ic;
        c.z[t] = hi == 0.0 ? 0.0 : (1.0 - std::fabs(ir - ic) / hi) * ((ir + ic) / 2.0);
      }
      if (any) pairs.push_back(std::move(c));
    }
  }
  if (pairs.empty()) return {};

  const auto mean = [&](const std::vector<double>& z) {
    double sum = 0.0;
    for (std::size_t t = 0; t < z.size(); ++t) sum += z[t];
    return sum / static_cast<double>(z.size());
  };

  std::vector<double> pool;
  for (const auto& c : pairs) {
    if (params.median_scope == MedianScope::PairMeans) {
      pool.push_back(mean(c.z));
    } else {
      pool.insert(pool.end(), c.z.begin(), c.z.end());
    }
  }
  std::sort(pool.begin(), pool.end());
  const std::size_t m = pool.size();
  const double median = m % 2 == 1 ? pool[m / 2] : (pool[m / 2 - 1] + pool[m / 2]) / 2.0;

  std::vector<CyicEvent> events;
  for (const auto& c : pairs) {
    const double mu = mean(c.z);
    double ss = 0.0;
    for (double v : c.z) ss += (v - mu) * (v - mu);
    const double sigma =
        std::sqrt(ss / static_cast<double>(params.sigma_kind == SigmaKind::Population ? n : n - 1));
    for (std::size_t tau = 1; tau < n; ++tau) {
      const double slope = c.z[tau] - c.z[tau - 1];
      const bool cond1 = mu > median;
      const bool cond2 = slope > params.sigma_multiplier * sigma;
      const bool cond3 = c.z[tau] > mu;
      if (cond1 && cond2 && cond3) {
        events.push_back({{c.a, c.b}, manifest.window.year_at(tau), c.z[tau], slope, mu, sigma, median, std::nullopt});
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const CyicEvent& l, const CyicEvent& r) {
    return std::tie(l.year, l.pair.a, l.pair.b) < std::tie(r.year, r.pair.a, r.pair.b);
  });
  return events;
}

std::vector<CyicEvent> expected_detections(const Scenario& scenario, const DetectionParams& params) {
  if (scenario.mode != RateMode::Deterministic) {
    throw DomainError("ground truth is only defined for deterministic scenarios");
  }
  const Plan plan = make_plan(scenario);
  Recount rc{plan.subjects, plan.years, std::vector<std::uint64_t>(plan.counts.size(), 0)};
  realize(
      scenario, plan, [&](std::size_t, std::size_t, std::size_t) { rc.paper(); },
      [&](std::size_t x, std::size_t t, std::size_t i, std::size_t y, std::size_t j) { rc.edge(plan, x, t, i, y, j); });
  return oracle_detections(make_manifest(scenario, rc), params);
}

}  // namespace cyic::synth
