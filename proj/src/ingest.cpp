#include "defalign/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "defalign/errors.hpp"
#include "defalign/report.hpp"

namespace defalign {

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_size(std::string_view token, std::size_t& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string normalize_definition(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::size_t token_count(std::string_view norm_text) {
  if (norm_text.empty()) return 0;
  std::size_t n = 1;
  for (char c : norm_text) {
    if (c == ' ') ++n;
  }
  return n;
}

void DefinitionSet::add(const std::string& word, const std::string& raw_text) {
  const std::string key = lowercase(word);
  if (key.empty()) throw ValidationError("definition record with empty word");
  std::string norm = normalize_definition(raw_text);
  if (norm.empty()) {
    ++dropped_empty_;
    return;
  }

  const auto it = index_.find(key);
  if (it != index_.end()) {
    DefinitionRecord& rec = records_[it->second];
    rec.text += "; " + raw_text;
    rec.norm_text = normalize_definition(rec.text);
    rec.char_len = rec.norm_text.size();
    rec.token_len = token_count(rec.norm_text);
    ++merged_senses_;
    return;
  }

  DefinitionRecord rec;
  rec.word = key;
  rec.source = source_;
  rec.text = raw_text;
  rec.norm_text = std::move(norm);
  rec.char_len = rec.norm_text.size();
  rec.token_len = token_count(rec.norm_text);
  index_.emplace(key, records_.size());
  records_.push_back(std::move(rec));
}

const DefinitionRecord* DefinitionSet::find(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? nullptr : &records_[it->second];
}

DefinitionSet load_definitions(const std::filesystem::path& path, SourceId source) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open definitions");
  DefinitionSet set(std::move(source));

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("word") || !obj.contains("definition") ||
        !obj["word"].is_string() || !obj["definition"].is_string()) {
      throw ParseError(path.string(), line_no,
                       "expected an object with string fields 'word' and 'definition'");
    }
    set.add(obj["word"].get<std::string>(), obj["definition"].get<std::string>());
  }
  if (in.bad()) throw IoError(path.string(), "read failure");
  return set;
}

EmbeddingTable::EmbeddingTable(std::string space_name, Eigen::Index dim)
    : space_name_(std::move(space_name)), dim_(dim) {
  if (dim <= 0) throw ValidationError("embedding table '" + space_name_ + "': dim must be positive");
}

std::optional<Eigen::Index> EmbeddingTable::index_of(const std::string& word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::MatrixXd::ConstRowXpr EmbeddingTable::row(const std::string& word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) {
    throw BoundsError("space '" + space_name_ + "' has no vector for '" + word + "'");
  }
  return rows_.row(it->second);
}

void EmbeddingTable::insert(const std::string& word, const Eigen::VectorXd& v) {
  if (word.empty()) throw ValidationError("embedding table: empty word");
  if (dim_ == 0) {
    if (v.size() == 0) throw ValidationError("embedding table: empty vector for '" + word + "'");
    dim_ = v.size();
  }
  if (v.size() != dim_) {
    throw ArityError("space '" + space_name_ + "': '" + word + "' has " +
                     std::to_string(v.size()) + " components, expected " + std::to_string(dim_));
  }
  if (!v.allFinite()) {
    throw ValidationError("space '" + space_name_ + "': non-finite component in '" + word + "'");
  }
  if (v.squaredNorm() == 0.0) {
    throw DomainError("space '" + space_name_ + "': zero vector for '" + word + "'");
  }
  if (index_.count(word) != 0) {
    throw ValidationError("space '" + space_name_ + "': duplicate word '" + word + "'");
  }

  if (size_ == rows_.rows()) {
    const Eigen::Index grown = std::max<Eigen::Index>(16, rows_.rows() * 2);
    rows_.conservativeResize(grown, dim_);
  }
  rows_.row(size_) = v.transpose();
  index_.emplace(word, size_);
  words_.push_back(word);
  ++size_;
}

EmbeddingTable load_vectors(const std::filesystem::path& path, VectorFileFormat format,
                            std::string space_name, VectorLoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open vector file");
  if (space_name.empty()) space_name = path.stem().string();

  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_rows = 0;
  Eigen::Index dim = 0;

  if (format == VectorFileFormat::HeaderedText) {
    if (!std::getline(in, line)) throw ParseError(path.string(), 1, "missing header line");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    std::size_t d = 0;
    if (tokens.size() != 2 || !parse_size(tokens[0], declared_rows) || !parse_size(tokens[1], d)) {
      throw ParseError(path.string(), 1, "header must be two nonnegative integers 'N d'");
    }
    if (d == 0) throw ParseError(path.string(), 1, "header declares dimension 0");
    dim = static_cast<Eigen::Index>(d);
  }

  EmbeddingTable table;
  Eigen::VectorXd v;
  std::size_t duplicate_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2) {
      throw ParseError(path.string(), line_no, "expected 'word v1 ... vd'");
    }
    const std::string word = lowercase(std::string(tokens[0]));
    const std::size_t components = tokens.size() - 1;

    if (dim == 0) {
      dim = static_cast<Eigen::Index>(components);
    } else if (components != static_cast<std::size_t>(dim)) {
      throw ParseError(path.string(), line_no,
                       "'" + word + "' has " + std::to_string(components) +
                           " components, expected " + std::to_string(dim));
    }
    if (table.dim() == 0 && table.size() == 0) {
      table = EmbeddingTable(space_name, dim);
    }
    // Case-folding can collide (e.g. "The"/"the" in a cased file); as with the
    // lexicon, the first occurrence wins.
    if (table.contains(word)) {
      ++duplicate_rows;
      continue;
    }

    v.resize(dim);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      double value = 0.0;
      if (!parse_double(tokens[i], value)) {
        throw ParseError(path.string(), line_no,
                         "'" + word + "': component " + std::to_string(i) +
                             " is not a number: '" + std::string(tokens[i]) + "'");
      }
      v(static_cast<Eigen::Index>(i - 1)) = value;
    }
    table.insert(word, v);
  }
  if (in.bad()) throw IoError(path.string(), "read failure");
  if (table.size() == 0) throw InsufficientDataError(path.string() + ": no vector rows");

  if (stats) {
    stats->rows = static_cast<std::size_t>(table.size());
    if (duplicate_rows > 0) {
      stats->warnings.push_back(path.string() + ": " + std::to_string(duplicate_rows) +
                                " duplicate word rows ignored (first kept)");
    }
    if (format == VectorFileFormat::HeaderedText &&
        declared_rows != static_cast<std::size_t>(table.size()) + duplicate_rows) {
      stats->warnings.push_back(path.string() + ": header declares " +
                                std::to_string(declared_rows) + " rows, parsed " +
                                std::to_string(table.size()));
    }
  }
  return table;
}

void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path,
                  VectorFileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  if (format == VectorFileFormat::HeaderedText) {
    out << table.size() << ' ' << table.dim() << '\n';
  }
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    out << table.word_at(i);
    const auto row = table.row(i);
    for (Eigen::Index j = 0; j < table.dim(); ++j) {
      out << ' ' << format_double(row(j));
    }
    out << '\n';
  }
  if (!out) throw IoError(path.string(), "write failure");
}

VectorFileFormat detect_vector_format(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open vector file");
  std::string line;
  if (!std::getline(in, line)) return VectorFileFormat::PlainText;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto tokens = split_ws(line);
  std::size_t a = 0;
  std::size_t b = 0;
  if (tokens.size() == 2 && parse_size(tokens[0], a) && parse_size(tokens[1], b)) {
    return VectorFileFormat::HeaderedText;
  }
  return VectorFileFormat::PlainText;
}

std::vector<std::string> clean_intersection(const std::vector<const DefinitionSet*>& sets) {
  if (sets.empty()) throw ValidationError("clean_intersection: no sources given");
  std::vector<std::string> out;
  for (const DefinitionRecord& rec : sets.front()->records()) {
    bool everywhere = true;
    for (std::size_t i = 1; i < sets.size(); ++i) {
      if (!sets[i]->find(rec.word)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) out.push_back(rec.word);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> clean_intersection(const std::vector<const DefinitionSet*>& sets,
                                            const std::vector<LexiconEntry>& vocabulary) {
  if (sets.empty()) throw ValidationError("clean_intersection: no sources given");
  std::vector<std::string> out;
  for (const LexiconEntry& entry : vocabulary) {
    bool everywhere = true;
    for (const DefinitionSet* set : sets) {
      if (!set->find(entry.word)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) out.push_back(entry.word);
  }
  return out;
}

}  // namespace defalign
