#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "defalign/errors.hpp"
#include "defalign/ingest.hpp"
#include "defalign/lexicon.hpp"
#include "defalign/synth.hpp"
#include "tempdir.hpp"

using namespace defalign;
using testsupport::TempDir;
using testsupport::slurp;

TEST_CASE("synthetic corpora are reproducible byte for byte") {
  TempDir dir;
  SynthSpec spec;
  spec.word_count = 24;
  write_synth_corpus(dir.path() / "one", spec);
  write_synth_corpus(dir.path() / "two", spec);

  std::size_t compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "one")) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(dir.path() / "two" / name));
    ++compared;
  }
  CHECK(compared >= 10);  // lexicon, pos, four definition files, six vector files

  SynthSpec other = spec;
  other.seed = 8;
  write_synth_corpus(dir.path() / "three", other);
  CHECK(slurp(dir.path() / "one" / "defs_dicta.jsonl") !=
        slurp(dir.path() / "three" / "defs_dicta.jsonl"));
}

TEST_CASE("synthetic files load through the regular ingest paths") {
  TempDir dir;
  SynthSpec spec;
  spec.word_count = 30;
  write_synth_corpus(dir.path() / "c", spec);

  const auto lexicon = load_lexicon(dir.path() / "c" / "lexicon.txt");
  CHECK(lexicon.size() == 30);
  for (std::size_t i = 0; i < lexicon.size(); ++i) CHECK(lexicon[i].rank == i + 1);

  const auto dicta = load_definitions(dir.path() / "c" / "defs_dicta.jsonl",
                                      SourceId{"dicta", SourceKind::PublishedDictionary, 0});
  CHECK(dicta.size() == 30);  // full coverage by design
  const auto dictb = load_definitions(dir.path() / "c" / "defs_dictb.jsonl",
                                      SourceId{"dictb", SourceKind::PublishedDictionary, 0});
  CHECK(dictb.size() < 30);  // deliberate gaps

  const auto alpha = load_vectors(dir.path() / "c" / "wvec_alpha.vec",
                                  detect_vector_format(dir.path() / "c" / "wvec_alpha.vec"),
                                  "alpha");
  CHECK(alpha.size() == 30);
  CHECK(alpha.dim() == spec.word_dim);

  const auto beta = load_vectors(dir.path() / "c" / "wvec_beta.vec",
                                 detect_vector_format(dir.path() / "c" / "wvec_beta.vec"),
                                 "beta");
  CHECK(beta.size() == 28);  // two words deliberately missing
}

TEST_CASE("synthetic frequency lists rank every word exactly once") {
  TempDir dir;
  write_synth_lexicon(dir.path() / "lex.txt", 500, 7);
  const auto lexicon = load_lexicon(dir.path() / "lex.txt");
  REQUIRE(lexicon.size() == 500);
  CHECK(lexicon.front().rank == 1);
  CHECK(lexicon.back().rank == 500);

  CHECK_THROWS_AS(write_synth_lexicon(dir.path() / "big.txt", 100000, 7), ValidationError);

  SUBCASE("corpus size limits are validated") {
    SynthSpec bad;
    bad.word_count = 4;
    CHECK_THROWS_AS(write_synth_corpus(dir.path() / "x", bad), ValidationError);
  }
}
