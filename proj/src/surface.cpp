#include "defalign/surface.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <vector>

#include "defalign/consistency.hpp"
#include "defalign/errors.hpp"

namespace defalign {

namespace {

std::string fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

const char* to_string(LengthUnit unit) { return unit == LengthUnit::Chars ? "chars" : "tokens"; }

MatchResult lcs(std::string_view text_a, std::string_view text_b) {
  MatchResult best;
  const std::size_t n = text_a.size();
  const std::size_t m = text_b.size();
  if (n == 0 || m == 0) return best;

  const std::string a = fold(text_a);
  const std::string b = fold(text_b);

  // prev[j+1] = length of the common suffix of a[..i-1] and b[..j]. Scanning
  // rows then columns with a strict improvement test lands the final answer
  // on the match with the smallest pos_a, then the smallest pos_b.
  std::vector<std::size_t> prev(m + 1, 0);
  std::vector<std::size_t> cur(m + 1, 0);
  std::size_t best_len = 0;
  std::size_t best_end_a = 0;
  std::size_t best_end_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (a[i] == b[j]) {
        cur[j + 1] = prev[j] + 1;
        if (cur[j + 1] > best_len) {
          best_len = cur[j + 1];
          best_end_a = i;
          best_end_b = j;
        }
      } else {
        cur[j + 1] = 0;
      }
    }
    std::swap(prev, cur);
  }

  if (best_len == 0) return best;
  best.char_len = best_len;
  best.pos_a = best_end_a + 1 - best_len;
  best.pos_b = best_end_b + 1 - best_len;
  best.substring = std::string(text_a.substr(best.pos_a, best_len));
  best.word_count = segment_count(best.substring);
  return best;
}

std::size_t segment_count(std::string_view s) {
  std::size_t count = 0;
  bool in_segment = false;
  for (char raw : s) {
    const bool ws = std::isspace(static_cast<unsigned char>(raw)) != 0;
    if (!ws && !in_segment) ++count;
    in_segment = !ws;
  }
  return count;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;

  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double norm_edit_distance(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

MatchHistogram match_histogram(const DefinitionSet& defs_a, const DefinitionSet& defs_b,
                               const std::vector<std::string>& vocabulary,
                               std::size_t long_match_threshold) {
  MatchHistogram h;
  h.source_a = defs_a.source().name;
  h.source_b = defs_b.source().name;
  h.long_match_threshold = long_match_threshold;

  std::size_t total_words = 0;
  for (const std::string& word : vocabulary) {
    const DefinitionRecord* ra = defs_a.find(word);
    const DefinitionRecord* rb = defs_b.find(word);
    if (!ra || !rb) {
      ++h.skipped;
      continue;
    }
    const MatchResult match = lcs(ra->norm_text, rb->norm_text);
    ++h.bins[match.word_count];
    total_words += match.word_count;
    if (match.word_count >= long_match_threshold) ++h.long_match_count;
    ++h.compared;
  }
  h.mean_word_count =
      h.compared == 0 ? 0.0 : static_cast<double>(total_words) / static_cast<double>(h.compared);
  return h;
}

AveragedHistogram average_histograms(const std::vector<const MatchHistogram*>& histograms,
                                     std::string label) {
  if (histograms.empty()) {
    throw InsufficientDataError("average_histograms: no histograms to average");
  }
  AveragedHistogram out;
  out.label = std::move(label);
  out.histogram_count = histograms.size();
  for (const MatchHistogram* h : histograms) {
    for (const auto& [bin, count] : h->bins) {
      out.bins[bin] += static_cast<double>(count);
    }
  }
  for (auto& [bin, value] : out.bins) {
    value /= static_cast<double>(out.histogram_count);
  }
  return out;
}

LengthStats length_stats(const DefinitionSet& records, LengthUnit unit) {
  const auto& recs = records.records();
  if (recs.empty()) {
    throw InsufficientDataError("length_stats: source '" + records.source().name +
                                "' has no definitions");
  }
  LengthStats s;
  s.n = recs.size();
  double sum = 0.0;
  bool first = true;
  for (const DefinitionRecord& rec : recs) {
    const std::size_t len = unit == LengthUnit::Chars ? rec.char_len : rec.token_len;
    if (first) {
      s.min = len;
      s.max = len;
      first = false;
    } else {
      s.min = std::min(s.min, len);
      s.max = std::max(s.max, len);
    }
    sum += static_cast<double>(len);
  }
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (const DefinitionRecord& rec : recs) {
    const std::size_t len = unit == LengthUnit::Chars ? rec.char_len : rec.token_len;
    const double d = static_cast<double>(len) - s.mean;
    sq += d * d;
  }
  s.stddev = std::sqrt(sq / static_cast<double>(s.n));
  return s;
}

double length_correlation(const DefinitionSet& defs_a, const DefinitionSet& defs_b,
                          LengthUnit unit) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const DefinitionRecord& ra : defs_a.records()) {
    const DefinitionRecord* rb = defs_b.find(ra.word);
    if (!rb) continue;
    xs.push_back(static_cast<double>(unit == LengthUnit::Chars ? ra.char_len : ra.token_len));
    ys.push_back(static_cast<double>(unit == LengthUnit::Chars ? rb->char_len : rb->token_len));
  }
  if (xs.size() < 2) {
    throw InsufficientDataError("length_correlation: sources '" + defs_a.source().name +
                                "' and '" + defs_b.source().name + "' share " +
                                std::to_string(xs.size()) + " words; need at least 2");
  }
  const Eigen::Map<const Eigen::VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return pearson(x, y);
}

}  // namespace defalign
