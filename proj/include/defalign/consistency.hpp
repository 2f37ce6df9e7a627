#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "defalign/ingest.hpp"
#include "defalign/lexicon.hpp"
#include "defalign/vectorspace.hpp"

namespace defalign {

// Sample Pearson correlation, clamped to [-1, 1]. Throws ArityError on length
// mismatch and InsufficientDataError for n < 2 or a constant side.
double pearson(const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& y);

// Distances from `word` to every other vocabulary word, in vocabulary order,
// self excluded. All words must be present in the table.
Eigen::VectorXd distance_vector(const std::string& word, const EmbeddingTable& table,
                                const std::vector<std::string>& vocabulary,
                                DistanceKind kind);

// Cross-space agreement: per word, the Pearson correlation between its
// distance vectors in the two spaces, averaged over the vocabulary.
struct ConsistencyReport {
  std::string space_word;
  std::string space_def;
  DistanceKind kind = DistanceKind::Cosine;
  std::vector<std::pair<std::string, double>> per_word_r;  // canonical (rank) order
  double mean_r = 0.0;
  std::map<Tier, std::pair<double, std::size_t>> tier_means;  // mean, n
  std::vector<std::string> skipped;  // not co-covered, or undefined correlation
  std::size_t vocabulary_size = 0;
  std::size_t co_covered = 0;
  double coverage = 0.0;  // co_covered / vocabulary_size
};

// Restricted to words covered by BOTH spaces; per-word correlations are
// independent, so `jobs` threads may split the work without changing the
// result (reduction happens in canonical word order).
ConsistencyReport space_consistency(const EmbeddingTable& word_space,
                                    const EmbeddingTable& def_space,
                                    const std::vector<LexiconEntry>& vocabulary,
                                    DistanceKind kind, unsigned jobs = 1);

struct GridCell {
  double mean_r = 0.0;
  std::size_t n = 0;
  bool is_min = false;  // per-source-block, per-column minimum
};

// Tier-stratified grid: (definition source x tier) rows, word-space columns.
struct ConsistencyGrid {
  DistanceKind kind = DistanceKind::Cosine;
  std::vector<std::string> space_names;   // columns
  std::vector<std::string> source_names;  // row groups
  std::vector<Tier> tiers;                // {High, Medium, Low}
  // cells[source_index * tiers.size() + tier_index][space_index]
  std::vector<std::vector<std::optional<GridCell>>> cells;

  const std::optional<GridCell>& cell(std::size_t source, std::size_t tier,
                                      std::size_t space) const;
};

ConsistencyGrid consistency_matrix(const std::vector<const EmbeddingTable*>& def_spaces,
                                   const std::vector<const EmbeddingTable*>& word_spaces,
                                   const std::vector<LexiconEntry>& vocabulary,
                                   DistanceKind kind, unsigned jobs = 1);

// Per-word reports backing a grid, keyed (source index, space index); used by
// the CLI to emit per-word r values alongside the grid.
std::vector<std::vector<ConsistencyReport>> consistency_reports(
    const std::vector<const EmbeddingTable*>& def_spaces,
    const std::vector<const EmbeddingTable*>& word_spaces,
    const std::vector<LexiconEntry>& vocabulary, DistanceKind kind, unsigned jobs = 1);

ConsistencyGrid grid_from_reports(const std::vector<std::vector<ConsistencyReport>>& reports,
                                  const std::vector<const EmbeddingTable*>& def_spaces,
                                  const std::vector<const EmbeddingTable*>& word_spaces,
                                  DistanceKind kind);

}  // namespace defalign
