#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "defalign/ingest.hpp"

namespace defalign {

struct MatchResult {
  std::string substring;
  std::size_t char_len = 0;
  std::size_t word_count = 0;  // whitespace-delimited segments inside the match
  std::size_t pos_a = 0;
  std::size_t pos_b = 0;
};

// Longest common contiguous character substring, case-insensitive. Ties are
// broken by smallest pos_a, then smallest pos_b. Dynamic programming with
// rolling rows: O(|a|*|b|) time, O(|b|) memory.
MatchResult lcs(std::string_view text_a, std::string_view text_b);

// Maximal whitespace-delimited segments; partial boundary tokens count.
std::size_t segment_count(std::string_view s);

// Classic Levenshtein (insertions, deletions, replacements; unit costs).
std::size_t edit_distance(std::string_view a, std::string_view b);

// Levenshtein divided by max(|a|, |b|); both empty -> 0.
double norm_edit_distance(std::string_view a, std::string_view b);

struct MatchHistogram {
  std::string source_a;
  std::string source_b;
  std::map<std::size_t, std::size_t> bins;  // word_count -> frequency
  double mean_word_count = 0.0;
  std::size_t long_match_threshold = 5;
  std::size_t long_match_count = 0;  // matches with word_count >= threshold
  std::size_t compared = 0;
  std::size_t skipped = 0;  // vocabulary words missing from either source
};

MatchHistogram match_histogram(const DefinitionSet& defs_a, const DefinitionSet& defs_b,
                               const std::vector<std::string>& vocabulary,
                               std::size_t long_match_threshold = 5);

// Per-bin mean frequency across several pair histograms.
struct AveragedHistogram {
  std::string label;
  std::map<std::size_t, double> bins;
  std::size_t histogram_count = 0;
};

AveragedHistogram average_histograms(const std::vector<const MatchHistogram*>& histograms,
                                     std::string label);

enum class LengthUnit { Chars, Tokens };
const char* to_string(LengthUnit unit);

struct LengthStats {
  std::size_t n = 0;
  double mean = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
  double stddev = 0.0;  // population sigma
};

LengthStats length_stats(const DefinitionSet& records, LengthUnit unit);

// Pearson correlation of definition lengths over the shared vocabulary.
// Throws InsufficientDataError when fewer than two words are shared or one
// side is constant (undefined correlation).
double length_correlation(const DefinitionSet& defs_a, const DefinitionSet& defs_b,
                          LengthUnit unit);

}  // namespace defalign
