#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "defalign/lexicon.hpp"

namespace defalign {

enum class SourceKind { PublishedDictionary, GeneratedModel };

struct SourceId {
  std::string name;
  SourceKind kind = SourceKind::PublishedDictionary;
  int prompt_type = 0;  // 1 or 2 for generated sources, 0 otherwise
};

// Lowercase, collapse whitespace runs to single spaces, trim the ends.
std::string normalize_definition(std::string_view text);
std::size_t token_count(std::string_view norm_text);

struct DefinitionRecord {
  std::string word;
  SourceId source;
  std::string text;       // raw; multiple senses joined with "; "
  std::string norm_text;  // lowercased, whitespace-collapsed
  std::size_t char_len = 0;
  std::size_t token_len = 0;
};

// All definitions from one source, in order of first appearance.
class DefinitionSet {
 public:
  DefinitionSet() = default;
  explicit DefinitionSet(SourceId source) : source_(std::move(source)) {}

  const SourceId& source() const { return source_; }
  const std::vector<DefinitionRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // Empty (after normalization) texts are dropped and counted; a repeated
  // word merges its senses with "; " in insertion order.
  void add(const std::string& word, const std::string& raw_text);

  const DefinitionRecord* find(const std::string& word) const;

  std::size_t dropped_empty() const { return dropped_empty_; }
  std::size_t merged_senses() const { return merged_senses_; }

 private:
  SourceId source_;
  std::vector<DefinitionRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dropped_empty_ = 0;
  std::size_t merged_senses_ = 0;
};

// JSON Lines, one {"word": ..., "definition": ...} object per line.
DefinitionSet load_definitions(const std::filesystem::path& path, SourceId source);

// A named vector space: one row per word, all rows finite and nonzero.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::string space_name, Eigen::Index dim);

  const std::string& space_name() const { return space_name_; }
  Eigen::Index dim() const { return dim_; }
  Eigen::Index size() const { return size_; }
  const std::vector<std::string>& words() const { return words_; }

  bool contains(const std::string& word) const { return index_.count(word) != 0; }
  std::optional<Eigen::Index> index_of(const std::string& word) const;
  const std::string& word_at(Eigen::Index i) const { return words_.at(static_cast<std::size_t>(i)); }

  Eigen::MatrixXd::ConstRowXpr row(Eigen::Index i) const { return rows_.row(i); }
  Eigen::MatrixXd::ConstRowXpr row(const std::string& word) const;
  // One row per word, in insertion order.
  Eigen::Ref<const Eigen::MatrixXd> vectors() const { return rows_.topRows(size_); }

  // Validates dimension, finiteness, nonzero norm, and uniqueness.
  void insert(const std::string& word, const Eigen::VectorXd& v);

 private:
  std::string space_name_;
  Eigen::Index dim_ = 0;
  Eigen::Index size_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, Eigen::Index> index_;
  Eigen::MatrixXd rows_;
};

enum class VectorFileFormat { PlainText, HeaderedText };

struct VectorLoadStats {
  std::size_t rows = 0;
  std::vector<std::string> warnings;
};

// PlainText: `word v1 ... vd` per line, dimension inferred from the first row.
// HeaderedText: first line `N d`, then the same row format. A header count
// that disagrees with the parsed rows is a warning, not an error.
EmbeddingTable load_vectors(const std::filesystem::path& path, VectorFileFormat format,
                            std::string space_name = "", VectorLoadStats* stats = nullptr);

void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path,
                  VectorFileFormat format);

// Headered iff the first line is exactly two nonnegative integers.
VectorFileFormat detect_vector_format(const std::filesystem::path& path);

// Words that have a definition in every given source, sorted lexicographically.
std::vector<std::string> clean_intersection(const std::vector<const DefinitionSet*>& sets);

// Same, restricted to the sampled vocabulary and returned in rank order.
std::vector<std::string> clean_intersection(const std::vector<const DefinitionSet*>& sets,
                                            const std::vector<LexiconEntry>& vocabulary);

}  // namespace defalign
