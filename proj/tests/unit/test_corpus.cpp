#include "cyic/corpus.hpp"
#include "cyic/error.hpp"
#include "cyic/io.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace cyic;
using cyic::testing::TempDir;
using cyic::testing::write_text;

namespace {

const char* kPapers =
    "paper_id\tyear\tsubjects\n"
    "p1\t2001\tPhysics;Optics\n"
    "p2\t2001\tSociology\n"
    "p3\t2002\tOptics\n";

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("well-formed papers file") {
  TempDir dir;
  write_text(dir / "papers.tsv", kPapers);
  const Corpus c = ingest_papers(dir / "papers.tsv");
  CHECK(c.paper_count() == 3);
  CHECK(c.subject_labels() == std::vector<std::string>{"Optics", "Physics", "Sociology"});
  const auto p1 = c.find("p1");
  REQUIRE(p1);
  CHECK(c.year(*p1) == 2001);
  const auto subjects = c.subjects(*p1);
  REQUIRE(subjects.size() == 2);
  CHECK(c.label(subjects[0]) == "Optics");
  CHECK(c.label(subjects[1]) == "Physics");
  CHECK(c.max_subjects_per_paper() == 2);
  CHECK(c.stats().min_year == 2001);
  CHECK(c.stats().max_year == 2002);
  CHECK(c.record(*p1) == PaperRecord{"p1", 2001, {"Optics", "Physics"}});
  CHECK_FALSE(c.find("p9").has_value());
}

TEST_CASE("subject ids follow label order whatever the first-seen order") {
  const std::vector<PaperRecord> records{{"a", 2000, {"Zoology"}}, {"b", 2000, {"Anatomy", "Music"}}};
  const Corpus c = corpus_from_records(records);
  CHECK(*c.find_subject("Anatomy") < *c.find_subject("Music"));
  CHECK(*c.find_subject("Music") < *c.find_subject("Zoology"));
}

TEST_CASE("lenient mode skips malformed rows and reports them") {
  TempDir dir;
  write_text(dir / "papers.tsv",
             "paper_id\tyear\tsubjects\n"
             "p1\t2001\tPhysics\n"
             "p2\tnineteen\tPhysics\n"
             "p3\t2001\t\n"
             "p4\t2001\tA;;B\n"
             "p5\t2001\tA;A\n"
             "\n"
             "p6\t2001\n"
             "p7\t2002\tChemistry\n");
  const Corpus c = ingest_papers(dir / "papers.tsv");
  CHECK(c.paper_count() == 2);
  CHECK(c.stats().skipped_papers == 5);
  CHECK(c.issues().size() == 5);
  CHECK(c.issues().front().line == 3);
  CHECK(c.subject_labels() == std::vector<std::string>{"Chemistry", "Physics"});
}

TEST_CASE("strict mode stops at the first malformed row with its line number") {
  TempDir dir;
  write_text(dir / "papers.tsv", "paper_id\tyear\tsubjects\np1\t2001\tPhysics\np2\t20x1\tPhysics\n");
  IngestOptions strict{IngestMode::Strict};
  try {
    ingest_papers(dir / "papers.tsv", strict);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("duplicate paper ids are fatal in both modes") {
  TempDir dir;
  write_text(dir / "papers.tsv", "paper_id\tyear\tsubjects\np1\t2001\tPhysics\np1\t2002\tOptics\n");
  for (auto mode : {IngestMode::Lenient, IngestMode::Strict}) {
    try {
      ingest_papers(dir / "papers.tsv", {mode});
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("p1") != std::string::npos);
    }
  }
}

TEST_CASE("a wrong header is rejected") {
  TempDir dir;
  write_text(dir / "papers.tsv", "id\tyear\tsubjects\np1\t2001\tPhysics\n");
  CHECK_THROWS_AS(ingest_papers(dir / "papers.tsv"), InputError);
  write_text(dir / "empty.tsv", "");
  CHECK_THROWS_AS(ingest_papers(dir / "empty.tsv"), InputError);
}

TEST_CASE("citations: self-loops and unresolved ids are skipped and counted") {
  TempDir dir;
  write_text(dir / "papers.tsv", kPapers);
  write_text(dir / "citations.tsv",
             "citing_id\tcited_id\n"
             "p1\tp2\n"
             "p1\tp1\n"
             "p1\tghost\n"
             "p3\tp1\n"
             "broken-row\n");
  Corpus c = ingest_papers(dir / "papers.tsv");
  const auto edges = ingest_citations(dir / "citations.tsv", c);
  REQUIRE(edges.size() == 2);
  CHECK(c.paper_id(edges[0].citing) == "p1");
  CHECK(c.paper_id(edges[0].cited) == "p2");
  CHECK(c.stats().edge_count == 2);
  CHECK(c.stats().skipped_edges == 3);

  IngestOptions strict{IngestMode::Strict};
  Corpus c2 = ingest_papers(dir / "papers.tsv");
  CHECK_THROWS_AS(ingest_citations(dir / "citations.tsv", c2, strict), InputError);
}

TEST_CASE("citation batches cover every edge once") {
  TempDir dir;
  const auto rc = testing::random_corpus(3, 200, 1000, 6, 2000, 2004, 2, true);
  write_text(dir / "papers.tsv", testing::papers_tsv(rc.papers));
  write_text(dir / "citations.tsv", testing::citations_tsv(rc.citations));
  const Corpus c = ingest_papers(dir / "papers.tsv");
  std::size_t seen = 0;
  std::size_t batches = 0;
  const auto scan = scan_citations(dir / "citations.tsv", c, {}, [&](std::span<const CitationEdge> b) {
    CHECK(b.size() <= 64);
    seen += b.size();
    ++batches;
  }, 64);
  CHECK(seen == scan.edges);
  CHECK(scan.edges + scan.skipped() == rc.citations.size());
  CHECK(batches >= scan.edges / 64);
}

TEST_CASE("stats json has a fixed field order") {
  TempDir dir;
  write_text(dir / "papers.tsv", kPapers);
  const Corpus c = ingest_papers(dir / "papers.tsv");
  const std::string json = c.stats().to_json();
  const auto pos = [&](const char* key) { return json.find(key); };
  CHECK(pos("paper_count") < pos("edge_count"));
  CHECK(pos("edge_count") < pos("skipped_edges"));
  CHECK(pos("subject_count") < pos("skipped_papers"));
  CHECK(pos("skipped_papers") < pos("year_range"));
  CHECK(CorpusStats{}.to_json().find("null") != std::string::npos);
}

TEST_CASE("rejected rows leave no trace in the vocabulary") {
  CorpusBuilder b;
  const std::vector<std::string_view> bad{"Ghost", "Ghost"};
  CHECK(b.add("x", 2000, bad).has_value());
  const std::vector<std::string_view> good{"Real"};
  CHECK_FALSE(b.add("y", 2000, good).has_value());
  const Corpus c = b.finish();
  CHECK(c.subject_labels() == std::vector<std::string>{"Real"});
}

TEST_CASE("gzip inputs ingest like plain ones") {
  TempDir dir;
  write_text(dir / "papers.tsv", kPapers);
  io::write_file(dir / "papers.tsv.gz", kPapers);
  const Corpus a = ingest_papers(dir / "papers.tsv");
  const Corpus b = ingest_papers(dir / "papers.tsv.gz");
  CHECK(a.stats() == b.stats());
  CHECK(a.subject_labels() == b.subject_labels());
}

}
