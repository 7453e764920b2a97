#include "cyic/corpus.hpp"

#include "cyic/error.hpp"
#include "cyic/io.hpp"
#include "cyic/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <numeric>

namespace cyic {

namespace {

constexpr std::string_view kPapersHeader[] = {"paper_id", "year", "subjects"};
constexpr std::string_view kCitationsHeader[] = {"citing_id", "cited_id"};

template <std::size_t N>
void expect_header(io::LineReader& reader, const std::string_view (&expected)[N]) {
  std::string_view line;
  if (!reader.next(line)) throw InputError("empty file, header row expected", reader.path().string());
  const auto fields = text::split(line, '\t');
  bool ok = fields.size() == N;
  for (std::size_t i = 0; ok && i < N; ++i) ok = text::trim(fields[i]) == expected[i];
  if (!ok) {
    std::string want;
    for (std::size_t i = 0; i < N; ++i) want += (i ? "<TAB>" : "") + std::string(expected[i]);
    throw InputError("bad header, expected " + want, reader.path().string(), reader.line_number());
  }
}

void record_issue(std::vector<RowIssue>& issues, std::size_t max_reported, std::size_t line,
                  std::string message) {
  if (issues.size() < max_reported) issues.push_back({line, std::move(message)});
}

}  // namespace

std::string CorpusStats::to_json() const {
  nlohmann::ordered_json j;
  j["paper_count"] = paper_count;
  j["edge_count"] = edge_count;
  j["skipped_edges"] = skipped_edges;
  j["subject_count"] = subject_count;
  j["skipped_papers"] = skipped_papers;
  if (paper_count > 0) {
    j["year_range"] = {min_year, max_year};
  } else {
    j["year_range"] = nullptr;
  }
  return j.dump(2);
}

PaperRecord Corpus::record(PaperIndex p) const {
  PaperRecord r{std::string(paper_id(p)), year(p), {}};
  for (SubjectId s : subjects(p)) r.subjects.push_back(labels_[s]);
  return r;
}

std::optional<PaperIndex> Corpus::find(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<SubjectId> Corpus::find_subject(std::string_view label) const {
  const auto it = label_index_.find(label);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

void Corpus::note_citations(const CitationScan& scan) {
  stats_.edge_count += scan.edges;
  stats_.skipped_edges += scan.skipped();
}

CorpusBuilder::CorpusBuilder() = default;

std::optional<std::string> CorpusBuilder::add(std::string_view paper_id, int year,
                                              std::span<const std::string_view> subjects) {
  paper_id = text::trim(paper_id);
  if (paper_id.empty()) return "empty paper_id";
  if (subjects.empty()) return "empty subjects field";

  trimmed_.clear();
  for (std::string_view raw : subjects) {
    const auto label = text::trim(raw);
    if (label.empty()) return "empty subject label";
    trimmed_.push_back(label);
  }
  std::sort(trimmed_.begin(), trimmed_.end());
  if (std::adjacent_find(trimmed_.begin(), trimmed_.end()) != trimmed_.end()) {
    return "duplicate subject label";
  }
  if (corpus_.index_.find(paper_id) != corpus_.index_.end()) {
    throw InputError("duplicate paper_id '" + std::string(paper_id) + "'");
  }
  if (corpus_.years_.size() >= std::numeric_limits<PaperIndex>::max()) {
    throw InputError("too many papers for 32-bit paper indices");
  }

  const auto index = static_cast<PaperIndex>(corpus_.years_.size());
  const auto it = corpus_.index_.emplace(std::string(paper_id), index).first;
  corpus_.ids_.push_back(&it->first);
  corpus_.years_.push_back(year);
  for (std::string_view label : trimmed_) {
    auto found = corpus_.label_index_.find(label);
    if (found == corpus_.label_index_.end()) {
      const auto id = static_cast<SubjectId>(corpus_.labels_.size());
      corpus_.labels_.emplace_back(label);
      found = corpus_.label_index_.emplace(std::string(label), id).first;
    }
    corpus_.subject_ids_.push_back(found->second);
  }
  corpus_.offsets_.push_back(static_cast<std::uint32_t>(corpus_.subject_ids_.size()));
  corpus_.max_subjects_ = std::max(corpus_.max_subjects_, trimmed_.size());

  auto& st = corpus_.stats_;
  if (st.paper_count == 0) {
    st.min_year = st.max_year = year;
  } else {
    st.min_year = std::min(st.min_year, year);
    st.max_year = std::max(st.max_year, year);
  }
  ++st.paper_count;
  return std::nullopt;
}

std::optional<std::string> CorpusBuilder::add(const PaperRecord& record) {
  std::vector<std::string_view> views(record.subjects.begin(), record.subjects.end());
  return add(record.paper_id, record.year, views);
}

void CorpusBuilder::note_skipped(RowIssue issue, std::size_t max_reported) {
  ++corpus_.stats_.skipped_papers;
  record_issue(corpus_.issues_, max_reported, issue.line, std::move(issue.message));
}

Corpus CorpusBuilder::finish() {
  Corpus out = std::move(corpus_);
  corpus_ = Corpus{};

  // Relabel subjects so that id order equals lexicographic label order.
  const std::size_t n = out.labels_.size();
  std::vector<SubjectId> order(n);
  std::iota(order.begin(), order.end(), SubjectId{0});
  std::sort(order.begin(), order.end(),
            [&](SubjectId a, SubjectId b) { return out.labels_[a] < out.labels_[b]; });
  std::vector<SubjectId> remap(n);
  std::vector<std::string> sorted_labels(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    remap[order[rank]] = static_cast<SubjectId>(rank);
    sorted_labels[rank] = std::move(out.labels_[order[rank]]);
  }
  out.labels_ = std::move(sorted_labels);
  for (auto& [label, id] : out.label_index_) id = remap[id];
  for (auto& s : out.subject_ids_) s = remap[s];
  for (std::size_t p = 0; p + 1 < out.offsets_.size(); ++p) {
    std::sort(out.subject_ids_.begin() + out.offsets_[p],
              out.subject_ids_.begin() + out.offsets_[p + 1]);
  }
  out.stats_.subject_count = n;
  return out;
}

Corpus ingest_papers(const std::filesystem::path& path, const IngestOptions& options) {
  io::LineReader reader(path);
  expect_header(reader, kPapersHeader);

  CorpusBuilder builder;
  std::string_view line;
  std::vector<std::string_view> labels;
  while (reader.next(line)) {
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    std::optional<std::string> problem;
    if (fields.size() != 3) {
      problem = "expected 3 tab-separated fields, got " + std::to_string(fields.size());
    } else if (const auto year = text::parse_int(fields[1]);
               !year || *year < std::numeric_limits<int>::min() ||
               *year > std::numeric_limits<int>::max()) {
      problem = "year is not an integer: '" + std::string(fields[1]) + "'";
    } else {
      labels.clear();
      if (!text::trim(fields[2]).empty()) labels = text::split(fields[2], ';');
      try {
        problem = builder.add(fields[0], static_cast<int>(*year), labels);
      } catch (const InputError& e) {
        throw InputError(e.what(), path.string(), reader.line_number());
      }
    }
    if (problem) {
      if (options.mode == IngestMode::Strict) {
        throw InputError(*problem, path.string(), reader.line_number());
      }
      builder.note_skipped({reader.line_number(), *problem}, options.max_reported_issues);
    }
  }
  return builder.finish();
}

Corpus corpus_from_records(std::span<const PaperRecord> records) {
  CorpusBuilder builder;
  for (const auto& r : records) {
    if (auto problem = builder.add(r)) {
      throw InputError(*problem + " (paper '" + r.paper_id + "')");
    }
  }
  return builder.finish();
}

CitationScan scan_citations(const std::filesystem::path& path, const Corpus& corpus,
                            const IngestOptions& options,
                            const std::function<void(std::span<const CitationEdge>)>& sink,
                            std::size_t batch_size) {
  io::LineReader reader(path);
  expect_header(reader, kCitationsHeader);

  CitationScan scan;
  std::vector<CitationEdge> batch;
  batch.reserve(std::max<std::size_t>(batch_size, 1));
  std::string_view line;
  while (reader.next(line)) {
    if (text::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    const bool two_fields = tab != std::string_view::npos && line.find('\t', tab + 1) == std::string_view::npos;
    const auto citing = two_fields ? text::trim(line.substr(0, tab)) : std::string_view{};
    const auto cited = two_fields ? text::trim(line.substr(tab + 1)) : std::string_view{};
    if (citing.empty() || cited.empty()) {
      const std::string problem = two_fields ? "empty paper id" : "expected 2 tab-separated fields";
      if (options.mode == IngestMode::Strict) {
        throw InputError(problem, path.string(), reader.line_number());
      }
      ++scan.malformed;
      record_issue(scan.issues, options.max_reported_issues, reader.line_number(), problem);
      continue;
    }
    if (citing == cited) {
      ++scan.self_loops;
      record_issue(scan.issues, options.max_reported_issues, reader.line_number(),
                   "self-citation '" + std::string(citing) + "'");
      continue;
    }
    const auto from = corpus.find(citing);
    const auto to = corpus.find(cited);
    if (!from || !to) {
      ++scan.unresolved;
      record_issue(scan.issues, options.max_reported_issues, reader.line_number(),
                   "unresolved paper id '" + std::string(from ? cited : citing) + "'");
      continue;
    }
    batch.push_back({*from, *to});
    ++scan.edges;
    if (batch.size() >= batch_size) {
      sink(batch);
      batch.clear();
    }
  }
  if (!batch.empty()) sink(batch);
  return scan;
}

std::vector<CitationEdge> ingest_citations(const std::filesystem::path& path, Corpus& corpus,
                                           const IngestOptions& options) {
  std::vector<CitationEdge> edges;
  const auto scan = scan_citations(path, corpus, options, [&](std::span<const CitationEdge> b) {
    edges.insert(edges.end(), b.begin(), b.end());
  });
  corpus.note_citations(scan);
  return edges;
}

}  // namespace cyic
