#include "defalign/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "defalign/errors.hpp"

namespace defalign {

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string strip(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool ends_with(const std::string& word, const std::string& suffix) {
  // A suffix rule only fires when at least 3 characters of stem precede it,
  // so "table" is not caught by -able.
  return word.size() >= suffix.size() + 3 &&
         word.compare(word.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

const char* to_string(Tier tier) {
  switch (tier) {
    case Tier::High: return "high";
    case Tier::Medium: return "medium";
    case Tier::Low: return "low";
  }
  return "high";
}

const char* to_string(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "noun";
    case Pos::Verb: return "verb";
    case Pos::Adjective: return "adjective";
    case Pos::Adverb: return "adverb";
    case Pos::Other: return "other";
  }
  return "noun";
}

const char* to_string(PosProvenance provenance) {
  return provenance == PosProvenance::File ? "file" : "heuristic";
}

std::optional<Tier> tier_from_string(const std::string& s) {
  if (s == "high") return Tier::High;
  if (s == "medium") return Tier::Medium;
  if (s == "low") return Tier::Low;
  return std::nullopt;
}

std::optional<Pos> pos_from_string(const std::string& s) {
  if (s == "noun") return Pos::Noun;
  if (s == "verb") return Pos::Verb;
  if (s == "adjective") return Pos::Adjective;
  if (s == "adverb") return Pos::Adverb;
  if (s == "other") return Pos::Other;
  return std::nullopt;
}

std::optional<Pos> pos_from_tag(const std::string& tag) {
  if (tag == "NOUN") return Pos::Noun;
  if (tag == "VERB") return Pos::Verb;
  if (tag == "ADJ") return Pos::Adjective;
  if (tag == "ADV") return Pos::Adverb;
  if (tag == "OTHER") return Pos::Other;
  return std::nullopt;
}

std::string RankInterval::label() const {
  return std::to_string(lo) + "-" + std::to_string(hi);
}

TierConfig TierConfig::defaults() {
  TierConfig c;
  c.top_window = {1, 1000};
  c.mid_windows = {{5001, 5500}, {10001, 10500}};
  c.low_windows = {{20001, 20500}, {50001, 50500}};
  return c;
}

void TierConfig::validate() const {
  // Medium and low window lists may be empty (a top-only sample is legal);
  // the high window is always required.
  std::vector<RankInterval> all;
  all.push_back(top_window);
  all.insert(all.end(), mid_windows.begin(), mid_windows.end());
  all.insert(all.end(), low_windows.begin(), low_windows.end());
  for (const auto& w : all) {
    if (w.lo == 0) throw ValidationError("tier window " + w.label() + ": ranks start at 1");
    if (w.hi < w.lo) throw ValidationError("tier window " + w.label() + ": reversed interval");
  }
  std::sort(all.begin(), all.end(),
            [](const RankInterval& a, const RankInterval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].lo <= all[i - 1].hi) {
      throw ValidationError("tier windows " + all[i - 1].label() + " and " + all[i].label() +
                            " overlap");
    }
  }
}

std::size_t TierConfig::max_rank() const {
  std::size_t m = top_window.hi;
  for (const auto& w : mid_windows) m = std::max(m, w.hi);
  for (const auto& w : low_windows) m = std::max(m, w.hi);
  return m;
}

std::size_t TierConfig::total_width() const {
  std::size_t n = top_window.width();
  for (const auto& w : mid_windows) n += w.width();
  for (const auto& w : low_windows) n += w.width();
  return n;
}

std::vector<RankedWord> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open lexicon");

  struct Row {
    std::string word;
    unsigned long long count;
  };
  std::vector<Row> rows;
  std::unordered_set<std::string> raw_seen;
  bool any_count = false;
  bool any_plain = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = strip(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;

    std::string word_part = trimmed;
    unsigned long long count = 0;
    bool has_count = false;
    const std::size_t tab = trimmed.find('\t');
    if (tab != std::string::npos) {
      word_part = strip(trimmed.substr(0, tab));
      const std::string count_part = strip(trimmed.substr(tab + 1));
      if (word_part.empty()) throw ParseError(path.string(), line_no, "empty word field");
      const char* first = count_part.data();
      const char* last = first + count_part.size();
      const auto [ptr, ec] = std::from_chars(first, last, count);
      if (ec != std::errc() || ptr != last) {
        throw ParseError(path.string(), line_no, "count is not a non-negative integer: '" +
                                                     count_part + "'");
      }
      has_count = true;
    }
    if (word_part.find(' ') != std::string::npos) {
      throw ParseError(path.string(), line_no, "word contains a space: '" + word_part + "'");
    }

    if (!raw_seen.insert(word_part).second) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate word '" + word_part + "'");
    }
    (has_count ? any_count : any_plain) = true;
    rows.push_back(Row{lowercase(word_part), count});
  }
  if (in.bad()) throw IoError(path.string(), "read failure");
  if (rows.empty()) throw InsufficientDataError(path.string() + ": lexicon is empty");
  if (any_count && any_plain) {
    throw ParseError(path.string() + ": mixes counted and plain lines");
  }

  if (any_count) {
    // Rank by count so a permuted file yields the same ranking. Ties break
    // lexicographically to keep the order total.
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.word < b.word;
    });
  }

  // Case-fold collapses keep the earliest (highest-ranked) occurrence.
  std::vector<RankedWord> out;
  out.reserve(rows.size());
  std::unordered_set<std::string> folded_seen;
  for (const Row& row : rows) {
    if (!folded_seen.insert(row.word).second) continue;
    out.push_back(RankedWord{row.word, out.size() + 1});
  }
  return out;
}

std::vector<LexiconEntry> sample_tiers(const std::vector<RankedWord>& lexicon,
                                       const TierConfig& config) {
  config.validate();
  if (lexicon.size() < config.max_rank()) {
    throw InsufficientDataError("lexicon has " + std::to_string(lexicon.size()) +
                                " words but the tier windows need ranks up to " +
                                std::to_string(config.max_rank()));
  }

  std::vector<LexiconEntry> out;
  out.reserve(config.total_width());
  auto take = [&](const RankInterval& w, Tier tier) {
    for (std::size_t rank = w.lo; rank <= w.hi; ++rank) {
      const RankedWord& rw = lexicon[rank - 1];
      LexiconEntry e;
      e.word = rw.word;
      e.rank = rw.rank;
      e.tier = tier;
      out.push_back(std::move(e));
    }
  };
  take(config.top_window, Tier::High);
  for (const auto& w : config.mid_windows) take(w, Tier::Medium);
  for (const auto& w : config.low_windows) take(w, Tier::Low);
  return out;
}

Pos heuristic_pos(const std::string& word) {
  const std::string w = lowercase(word);
  if (ends_with(w, "ly")) return Pos::Adverb;
  if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") || ends_with(w, "able")) {
    return Pos::Adjective;
  }
  if (ends_with(w, "ize") || ends_with(w, "ate") || ends_with(w, "ify")) return Pos::Verb;
  return Pos::Noun;
}

void assign_pos(std::vector<LexiconEntry>& entries,
                const std::optional<std::filesystem::path>& pos_file) {
  std::unordered_map<std::string, Pos> tagged;
  if (pos_file) {
    std::ifstream in(*pos_file);
    if (!in) throw IoError(pos_file->string(), "cannot open part-of-speech file");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string trimmed = strip(line);
      if (trimmed.empty() || trimmed[0] == '#') continue;
      const std::size_t tab = trimmed.find('\t');
      if (tab == std::string::npos) {
        throw ParseError(pos_file->string(), line_no, "expected word<TAB>TAG");
      }
      const std::string word = lowercase(strip(trimmed.substr(0, tab)));
      const std::string tag = strip(trimmed.substr(tab + 1));
      const auto pos = pos_from_tag(tag);
      if (!pos) throw ParseError(pos_file->string(), line_no, "unknown tag '" + tag + "'");
      tagged[word] = *pos;  // later lines win
    }
    if (in.bad()) throw IoError(pos_file->string(), "read failure");
  }

  for (LexiconEntry& e : entries) {
    const auto it = tagged.find(e.word);
    if (it != tagged.end()) {
      e.pos = it->second;
      e.pos_provenance = PosProvenance::File;
    } else {
      e.pos = heuristic_pos(e.word);
      e.pos_provenance = PosProvenance::Heuristic;
    }
  }
}

void save_entries(const std::vector<LexiconEntry>& entries,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "word\trank\ttier\tpos\tpos_provenance\n";
  for (const LexiconEntry& e : entries) {
    out << e.word << '\t' << e.rank << '\t' << to_string(e.tier) << '\t' << to_string(e.pos)
        << '\t' << to_string(e.pos_provenance) << '\n';
  }
  if (!out) throw IoError(path.string(), "write failure");
}

std::vector<LexiconEntry> load_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open sampled lexicon");
  std::string line;
  std::size_t line_no = 0;
  std::vector<LexiconEntry> out;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("word\t", 0) == 0) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() != 5) {
      throw ParseError(path.string(), line_no, "expected 5 tab-separated fields, got " +
                                                   std::to_string(fields.size()));
    }

    LexiconEntry e;
    e.word = lowercase(strip(fields[0]));
    if (e.word.empty()) throw ParseError(path.string(), line_no, "empty word");
    if (!seen.insert(e.word).second) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate word '" + e.word + "'");
    }

    const std::string rank_s = strip(fields[1]);
    const auto [ptr, ec] =
        std::from_chars(rank_s.data(), rank_s.data() + rank_s.size(), e.rank);
    if (ec != std::errc() || ptr != rank_s.data() + rank_s.size() || e.rank == 0) {
      throw ParseError(path.string(), line_no, "bad rank '" + rank_s + "'");
    }

    const auto tier = tier_from_string(strip(fields[2]));
    if (!tier) throw ParseError(path.string(), line_no, "bad tier '" + fields[2] + "'");
    e.tier = *tier;

    const auto pos = pos_from_string(strip(fields[3]));
    if (!pos) throw ParseError(path.string(), line_no, "bad pos '" + fields[3] + "'");
    e.pos = *pos;

    const std::string prov = strip(fields[4]);
    if (prov == "file") {
      e.pos_provenance = PosProvenance::File;
    } else if (prov == "heuristic") {
      e.pos_provenance = PosProvenance::Heuristic;
    } else {
      throw ParseError(path.string(), line_no, "bad pos provenance '" + prov + "'");
    }
    out.push_back(std::move(e));
  }
  if (in.bad()) throw IoError(path.string(), "read failure");
  if (out.empty()) throw InsufficientDataError(path.string() + ": no entries");
  return out;
}

}  // namespace defalign
