#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace defalign {

enum class Tier { High, Medium, Low };
enum class Pos { Noun, Verb, Adjective, Adverb, Other };
enum class PosProvenance { File, Heuristic };

const char* to_string(Tier tier);
const char* to_string(Pos pos);
const char* to_string(PosProvenance provenance);
std::optional<Tier> tier_from_string(const std::string& s);
std::optional<Pos> pos_from_string(const std::string& s);
// Annotation-file tags: NOUN, VERB, ADJ, ADV, OTHER.
std::optional<Pos> pos_from_tag(const std::string& tag);

struct LexiconEntry {
  std::string word;
  std::size_t rank = 0;  // 1 = most frequent
  Tier tier = Tier::High;
  Pos pos = Pos::Noun;
  PosProvenance pos_provenance = PosProvenance::Heuristic;
};

// Inclusive interval of frequency ranks.
struct RankInterval {
  std::size_t lo = 0;
  std::size_t hi = 0;
  bool contains(std::size_t rank) const { return rank >= lo && rank <= hi; }
  std::size_t width() const { return hi - lo + 1; }
  std::string label() const;
};

struct TierConfig {
  RankInterval top_window;
  std::vector<RankInterval> mid_windows;
  std::vector<RankInterval> low_windows;

  // 1-1000 / {5001-5500, 10001-10500} / {20001-20500, 50001-50500}.
  static TierConfig defaults();

  // Throws ValidationError on zero-based, reversed, or overlapping windows.
  // Medium/low window lists may be empty; the top window is required.
  void validate() const;
  std::size_t max_rank() const;
  std::size_t total_width() const;
};

struct RankedWord {
  std::string word;
  std::size_t rank = 0;
};

// One `word` or `word<TAB>count` per line. Words are lowercased; when counts
// are present the list is ordered by count (descending, ties by word) before
// ranks are assigned, so permuting the file does not change the result.
// Case-fold collapses keep the first occurrence; an identical raw duplicate
// is a validation error.
std::vector<RankedWord> load_lexicon(const std::filesystem::path& path);

std::vector<LexiconEntry> sample_tiers(const std::vector<RankedWord>& lexicon,
                                       const TierConfig& config);

// Suffix fallback used for words absent from the annotation file:
// -ly -> Adverb; -ous/-ful/-ive/-able -> Adjective; -ize/-ate/-ify -> Verb;
// anything else -> Noun. A rule fires only when the stem before the suffix
// is at least 3 characters ("table" stays a Noun).
Pos heuristic_pos(const std::string& word);

// pos_file format: `word<TAB>TAG` with tags NOUN/VERB/ADJ/ADV/OTHER.
void assign_pos(std::vector<LexiconEntry>& entries,
                const std::optional<std::filesystem::path>& pos_file);

// Sampled-lexicon TSV (word, rank, tier, pos, pos provenance); written by the
// CLI `sample` command and reread by `analyze`.
void save_entries(const std::vector<LexiconEntry>& entries,
                  const std::filesystem::path& path);
std::vector<LexiconEntry> load_entries(const std::filesystem::path& path);

}  // namespace defalign
