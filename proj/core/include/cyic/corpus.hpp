#pragma once

#include "cyic/years.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cyic {

using SubjectId = std::uint32_t;
using PaperIndex = std::uint32_t;

enum class IngestMode { Lenient, Strict };

struct IngestOptions {
  IngestMode mode = IngestMode::Lenient;
  /// Row issues kept verbatim for the summary report; later ones are only counted.
  std::size_t max_reported_issues = 50;
};

struct RowIssue {
  std::size_t line = 0;
  std::string message;
};

struct PaperRecord {
  std::string paper_id;
  int year = 0;
  std::vector<std::string> subjects;

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

/// A resolved citation, endpoints are indices into the owning Corpus.
struct CitationEdge {
  PaperIndex citing = 0;
  PaperIndex cited = 0;

  friend bool operator==(const CitationEdge&, const CitationEdge&) = default;
};

struct CorpusStats {
  std::uint64_t paper_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t skipped_edges = 0;
  std::uint64_t subject_count = 0;
  std::uint64_t skipped_papers = 0;
  /// Meaningful only when paper_count > 0.
  int min_year = 0;
  int max_year = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;

  /// Fixed field order: paper_count, edge_count, skipped_edges, subject_count,
  /// skipped_papers, year_range.
  std::string to_json() const;
};

/// Per-file citation scan outcome.
struct CitationScan {
  std::uint64_t edges = 0;
  std::uint64_t self_loops = 0;
  std::uint64_t unresolved = 0;
  std::uint64_t malformed = 0;
  std::vector<RowIssue> issues;

  std::uint64_t skipped() const noexcept { return self_loops + unresolved + malformed; }
};

/// Subject-labelled paper universe. Subject ids follow lexicographic label order, so
/// comparing ids compares labels. Paper subject lists are sorted by id.
class Corpus {
 public:
  Corpus() = default;
  // ids_ points into index_ nodes, which survive a move but not a copy.
  Corpus(Corpus&&) noexcept = default;
  Corpus& operator=(Corpus&&) noexcept = default;
  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;

  std::size_t paper_count() const noexcept { return years_.size(); }
  std::string_view paper_id(PaperIndex p) const { return *ids_[p]; }
  int year(PaperIndex p) const { return years_[p]; }
  std::span<const SubjectId> subjects(PaperIndex p) const {
    return {subject_ids_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
  }
  PaperRecord record(PaperIndex p) const;
  std::optional<PaperIndex> find(std::string_view paper_id) const;

  const std::vector<std::string>& subject_labels() const noexcept { return labels_; }
  const std::string& label(SubjectId s) const { return labels_[s]; }
  std::optional<SubjectId> find_subject(std::string_view label) const;
  /// Largest subject-set size of any paper (0 for an empty corpus).
  std::size_t max_subjects_per_paper() const noexcept { return max_subjects_; }

  const CorpusStats& stats() const noexcept { return stats_; }
  const std::vector<RowIssue>& issues() const noexcept { return issues_; }

  /// Folds a citation scan into the corpus totals.
  void note_citations(const CitationScan& scan);

 private:
  friend class CorpusBuilder;

  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::unordered_map<std::string, PaperIndex, StringHash, std::equal_to<>> index_;
  std::vector<const std::string*> ids_;
  std::vector<int> years_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<SubjectId> subject_ids_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, SubjectId, StringHash, std::equal_to<>> label_index_;
  std::size_t max_subjects_ = 0;
  CorpusStats stats_;
  std::vector<RowIssue> issues_;
};

/// Incremental, validating corpus construction.
class CorpusBuilder {
 public:
  CorpusBuilder();

  /// Validates and appends one paper. Returns a description of the problem when the row
  /// violates a PaperRecord invariant (the row is then not added). Duplicate ids throw
  /// InputError naming the id.
  std::optional<std::string> add(std::string_view paper_id, int year,
                                 std::span<const std::string_view> subjects);
  std::optional<std::string> add(const PaperRecord& record);

  void note_skipped(RowIssue issue, std::size_t max_reported);

  /// Sorts the subject vocabulary and remaps ids. The builder is left empty.
  Corpus finish();

 private:
  Corpus corpus_;
  std::vector<std::string_view> trimmed_;
};

/// Reads a papers file (`paper_id<TAB>year<TAB>subjects`, subjects `;`-joined, optional
/// gzip). Strict mode throws InputError on the first malformed row; lenient mode counts
/// and skips it.
Corpus ingest_papers(const std::filesystem::path& path, const IngestOptions& options = {});

Corpus corpus_from_records(std::span<const PaperRecord> records);

/// Streams resolved citation edges in batches. Self-loops and unresolved endpoints are
/// always skipped and counted; malformed rows throw in strict mode.
CitationScan scan_citations(const std::filesystem::path& path, const Corpus& corpus,
                            const IngestOptions& options,
                            const std::function<void(std::span<const CitationEdge>)>& sink,
                            std::size_t batch_size = 1 << 16);

/// Convenience wrapper collecting every edge and updating the corpus stats.
std::vector<CitationEdge> ingest_citations(const std::filesystem::path& path, Corpus& corpus,
                                           const IngestOptions& options = {});

}  // namespace cyic
