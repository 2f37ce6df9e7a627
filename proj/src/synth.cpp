#include "defalign/synth.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <vector>

#include "defalign/errors.hpp"
#include "defalign/hash.hpp"
#include "defalign/ingest.hpp"

namespace defalign {

namespace {

using detail::bounded;
using detail::splitmix64;
using detail::uniform;

// CV syllables, no 'y' anywhere, so appending -ly/-ous/-ate style suffixes
// can never collide with another generated word.
constexpr const char* kConsonants = "bdklmnrt";
constexpr const char* kVowels = "aeiou";

std::string word_for_index(std::size_t index) {
  std::string out;
  for (int place = 2; place >= 0; --place) {
    std::size_t digit = index;
    for (int k = 0; k < place; ++k) digit /= 40;
    digit %= 40;
    out.push_back(kConsonants[digit / 5]);
    out.push_back(kVowels[digit % 5]);
  }
  return out;
}

const std::vector<std::string>& filler_pool() {
  static const std::vector<std::string> pool = {
      "a",       "the",     "of",      "small",  "large",   "animal", "device",  "used",
      "for",     "to",      "measure", "unit",   "person",  "who",    "makes",   "state",
      "being",   "quality", "act",     "process", "result", "place",  "where",   "time",
      "when",    "manner",  "object",  "that",   "moves",   "system", "part",    "body",
      "covering", "liquid", "substance", "found", "in",     "nature", "tool",    "or"};
  return pool;
}

std::string sentence(std::uint64_t& state, std::size_t min_tokens, std::size_t max_tokens) {
  const auto& pool = filler_pool();
  const std::size_t n = min_tokens + bounded(state, max_tokens - min_tokens + 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out.push_back(' ');
    out += pool[bounded(state, pool.size())];
  }
  out.push_back('.');
  return out;
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (const auto& [word, definition] : rows) {
    const nlohmann::json obj{{"word", word}, {"definition", definition}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError(path.string(), "write failure");
}

Eigen::VectorXd random_vector(std::uint64_t& state, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) {
    // Rounded to 4 decimals so the fixture files stay short and readable.
    v(i) = std::round(uniform(state, -1.0, 1.0) * 1e4) / 1e4;
  }
  if (v.squaredNorm() == 0.0) v(0) = 0.5;
  return v;
}

}  // namespace

void write_synth_lexicon(const std::filesystem::path& path, std::size_t word_count,
                         std::uint64_t seed) {
  if (word_count > 64000) {
    throw ValidationError("write_synth_lexicon: at most 64,000 distinct words");
  }
  std::uint64_t state = seed ^ fnv1a64("lexicon");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (std::size_t i = 0; i < word_count; ++i) {
    // Stride 5 with jitter < 5 keeps counts strictly decreasing.
    const std::uint64_t count = (word_count - i) * 5 + bounded(state, 5);
    out << word_for_index(i) << '\t' << count << '\n';
  }
  if (!out) throw IoError(path.string(), "write failure");
}

void write_synth_corpus(const std::filesystem::path& out_dir, const SynthSpec& spec) {
  if (spec.word_count < 10 || spec.word_count > 64000) {
    throw ValidationError("write_synth_corpus: word_count out of range");
  }
  if (spec.word_dim < 1 || spec.def_dim < 1) {
    throw ValidationError("write_synth_corpus: dimensions must be positive");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string(), "cannot create fixture directory");

  const std::size_t n = static_cast<std::size_t>(spec.word_count);
  std::vector<std::string> words(n);
  for (std::size_t i = 0; i < n; ++i) {
    words[i] = word_for_index(i);
    // Sprinkle suffixes the POS heuristic reacts to.
    if (i % 10 == 3) words[i] += "ly";
    if (i % 10 == 6) words[i] += "ous";
    if (i % 10 == 9) words[i] += "ate";
  }

  {
    std::uint64_t state = spec.seed ^ fnv1a64("lexicon");
    std::ofstream out(out_dir / "lexicon.txt", std::ios::binary);
    if (!out) throw IoError((out_dir / "lexicon.txt").string(), "cannot open for writing");
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t count = (n - i) * 5 + bounded(state, 5);
      out << words[i] << '\t' << count << '\n';
    }
  }

  {
    static const char* kTags[5] = {"NOUN", "VERB", "ADJ", "ADV", "OTHER"};
    std::ofstream out(out_dir / "pos.tsv", std::ios::binary);
    if (!out) throw IoError((out_dir / "pos.tsv").string(), "cannot open for writing");
    for (std::size_t i = 0; i < n; i += 2) {
      out << words[i] << '\t' << kTags[(i / 2) % 5] << '\n';
    }
  }

  // dicta: full coverage, the reference texts other sources borrow from.
  std::vector<std::string> dicta_texts(n);
  {
    std::uint64_t state = spec.seed ^ fnv1a64("dicta");
    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      dicta_texts[i] = sentence(state, 8, 16);
      rows.emplace_back(words[i], dicta_texts[i]);
    }
    write_jsonl(out_dir / "defs_dicta.jsonl", rows);
  }

  // dictb: gaps at i % 13 == 7; an extra sense line at i % 17 == 3.
  std::vector<std::string> dictb_texts(n);
  {
    std::uint64_t state = spec.seed ^ fnv1a64("dictb");
    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 13 == 7) continue;
      dictb_texts[i] = sentence(state, 6, 12);
      rows.emplace_back(words[i], dictb_texts[i]);
      if (i % 17 == 3) rows.emplace_back(words[i], sentence(state, 4, 8));
    }
    write_jsonl(out_dir / "defs_dictb.jsonl", rows);
  }

  // genx-1: gaps at i % 19 == 11; every third word quotes dicta (long
  // matches); two canned refusals.
  {
    std::uint64_t state = spec.seed ^ fnv1a64("genx-1");
    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 19 == 11) continue;
      std::string text;
      if (i == 14 || i == 22) {
        text = "i don't know the meaning of this word";
      } else if (i % 3 == 0) {
        text = "the term means " + dicta_texts[i] + " in most uses";
      } else {
        text = sentence(state, 7, 14);
      }
      rows.emplace_back(words[i], text);
    }
    write_jsonl(out_dir / "defs_genx-1.jsonl", rows);
  }

  // genx-2: gaps at i % 11 == 5, empty answers at 23 and 41, quotes dictb
  // at i % 4 == 1 when dictb has the word.
  {
    std::uint64_t state = spec.seed ^ fnv1a64("genx-2");
    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 11 == 5) continue;
      std::string text;
      if (i == 23 || i == 41) {
        text = "";
      } else if (i % 4 == 1 && i % 13 != 7) {
        text = "it is " + dictb_texts[i] + " roughly speaking";
      } else {
        text = sentence(state, 7, 14);
      }
      rows.emplace_back(words[i], text);
    }
    write_jsonl(out_dir / "defs_genx-2.jsonl", rows);
  }

  {
    std::uint64_t state = spec.seed ^ fnv1a64("wvec_alpha");
    EmbeddingTable table("alpha", spec.word_dim);
    for (std::size_t i = 0; i < n; ++i) {
      table.insert(words[i], random_vector(state, spec.word_dim));
    }
    save_vectors(table, out_dir / "wvec_alpha.vec", VectorFileFormat::PlainText);
  }
  {
    std::uint64_t state = spec.seed ^ fnv1a64("wvec_beta");
    EmbeddingTable table("beta", spec.word_dim);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == n - 10 || i == n - 3) continue;  // coverage gaps
      table.insert(words[i], random_vector(state, spec.word_dim));
    }
    save_vectors(table, out_dir / "wvec_beta.vec", VectorFileFormat::HeaderedText);
  }

  const auto write_defvec = [&](const std::string& source, auto covered) {
    std::uint64_t state = spec.seed ^ fnv1a64("defvec_" + source);
    EmbeddingTable table(source, spec.def_dim);
    for (std::size_t i = 0; i < n; ++i) {
      if (!covered(i)) continue;
      table.insert(words[i], random_vector(state, spec.def_dim));
    }
    save_vectors(table, out_dir / ("defvec_" + source + ".vec"),
                 VectorFileFormat::HeaderedText);
  };
  write_defvec("dicta", [](std::size_t) { return true; });
  write_defvec("dictb", [](std::size_t i) { return i % 13 != 7; });
  write_defvec("genx-1", [](std::size_t i) { return i % 19 != 11; });
  // Word 2's row is deliberately missing so downstream skip tallies have
  // something to count.
  write_defvec("genx-2",
               [](std::size_t i) { return i % 11 != 5 && i != 23 && i != 41 && i != 2; });
}

}  // namespace defalign
