#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "defalign/errors.hpp"
#include "defalign/ingest.hpp"

namespace defalign {

enum class DistanceKind { Cosine, Euclidean };
const char* to_string(DistanceKind kind);

// 1 - u.v / (|u||v|), clamped to [0, 2] against rounding. The denominator is
// computed as sqrt(|u|^2 |v|^2) so that identical, orthogonal, and positively
// scaled pairs come out exact.
template <typename DerivedA, typename DerivedB>
double cosine_distance(const Eigen::MatrixBase<DerivedA>& u,
                       const Eigen::MatrixBase<DerivedB>& v) {
  if (u.size() != v.size()) {
    throw ArityError("cosine_distance: dimension mismatch (" + std::to_string(u.size()) +
                     " vs " + std::to_string(v.size()) + ")");
  }
  const double sq_u = u.squaredNorm();
  const double sq_v = v.squaredNorm();
  if (sq_u == 0.0 || sq_v == 0.0) {
    throw DomainError("cosine_distance: zero vector");
  }
  const double d = 1.0 - u.dot(v) / std::sqrt(sq_u * sq_v);
  return std::clamp(d, 0.0, 2.0);
}

template <typename DerivedA, typename DerivedB>
double euclidean_distance(const Eigen::MatrixBase<DerivedA>& u,
                          const Eigen::MatrixBase<DerivedB>& v) {
  if (u.size() != v.size()) {
    throw ArityError("euclidean_distance: dimension mismatch (" + std::to_string(u.size()) +
                     " vs " + std::to_string(v.size()) + ")");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double d = u(i) - v(i);
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Full pairwise distance matrix over the rows; symmetric, zero diagonal.
Eigen::MatrixXd pairwise_distances(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                   DistanceKind kind);

// Per-word distance between two sources' definition vectors.
struct PairDistanceTable {
  SourceId source_a;
  SourceId source_b;
  DistanceKind kind = DistanceKind::Cosine;
  std::vector<std::pair<std::string, double>> entries;  // vocabulary order
  std::size_t skipped = 0;  // vocabulary words missing a vector on either side

  const double* find(const std::string& word) const;
  double mean() const;  // throws InsufficientDataError when empty
};

PairDistanceTable pair_distances(const EmbeddingTable& defs_a, const EmbeddingTable& defs_b,
                                 const std::vector<std::string>& vocabulary,
                                 DistanceKind kind);

// k most distant words, non-increasing distance, ties lexicographic.
std::vector<std::pair<std::string, double>> topk_outliers(const PairDistanceTable& table,
                                                          std::size_t k);

struct OutlierRow {
  std::size_t rank = 0;  // 1-based
  std::string word;
  double distance = 0.0;
  std::string def_a;
  std::string def_b;
};

// Review worksheet: the top-k pairs with both definitions side by side.
struct OutlierWorksheet {
  SourceId source_a;
  SourceId source_b;
  DistanceKind kind = DistanceKind::Cosine;
  std::vector<OutlierRow> rows;
};

OutlierWorksheet make_outlier_worksheet(const PairDistanceTable& table, std::size_t k,
                                        const DefinitionSet& defs_a,
                                        const DefinitionSet& defs_b);

}  // namespace defalign
