#include "defalign/vectorspace.hpp"

#include <algorithm>
#include <cmath>

namespace defalign {

const char* to_string(DistanceKind kind) {
  return kind == DistanceKind::Cosine ? "cosine" : "euclidean";
}

Eigen::MatrixXd pairwise_distances(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                   DistanceKind kind) {
  const Eigen::Index n = rows.rows();
  Eigen::MatrixXd d(n, n);
  if (n == 0) return d;

  if (kind == DistanceKind::Cosine) {
    const Eigen::VectorXd norms = rows.rowwise().norm();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (norms(i) == 0.0) {
        throw DomainError("pairwise_distances: zero vector at row " + std::to_string(i));
      }
    }
    Eigen::MatrixXd unit = rows;
    unit.array().colwise() /= norms.array();
    d.noalias() = -(unit * unit.transpose());
    d.array() += 1.0;
    d = d.cwiseMax(0.0).cwiseMin(2.0);
  } else {
    // Gram trick: |u - v|^2 = |u|^2 + |v|^2 - 2 u.v, floored at 0 against
    // cancellation before the square root.
    const Eigen::VectorXd sq = rows.rowwise().squaredNorm();
    Eigen::MatrixXd g(n, n);
    g.noalias() = rows * rows.transpose();
    d = (sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * g)
            .cwiseMax(0.0)
            .cwiseSqrt();
  }
  d.diagonal().setZero();
  return d;
}

const double* PairDistanceTable::find(const std::string& word) const {
  for (const auto& [w, dist] : entries) {
    if (w == word) return &dist;
  }
  return nullptr;
}

double PairDistanceTable::mean() const {
  if (entries.empty()) {
    throw InsufficientDataError("distance table " + source_a.name + " vs " + source_b.name +
                                " is empty");
  }
  double sum = 0.0;
  for (const auto& [w, dist] : entries) sum += dist;
  return sum / static_cast<double>(entries.size());
}

PairDistanceTable pair_distances(const EmbeddingTable& defs_a, const EmbeddingTable& defs_b,
                                 const std::vector<std::string>& vocabulary,
                                 DistanceKind kind) {
  PairDistanceTable table;
  table.source_a.name = defs_a.space_name();
  table.source_b.name = defs_b.space_name();
  table.kind = kind;
  table.entries.reserve(vocabulary.size());
  for (const std::string& word : vocabulary) {
    const auto ia = defs_a.index_of(word);
    const auto ib = defs_b.index_of(word);
    if (!ia || !ib) {
      ++table.skipped;
      continue;
    }
    const double dist = kind == DistanceKind::Cosine
                            ? cosine_distance(defs_a.row(*ia), defs_b.row(*ib))
                            : euclidean_distance(defs_a.row(*ia), defs_b.row(*ib));
    table.entries.emplace_back(word, dist);
  }
  return table;
}

std::vector<std::pair<std::string, double>> topk_outliers(const PairDistanceTable& table,
                                                          std::size_t k) {
  if (k > table.entries.size()) {
    throw BoundsError("topk_outliers: k=" + std::to_string(k) + " exceeds table size " +
                      std::to_string(table.entries.size()));
  }
  std::vector<std::pair<std::string, double>> sorted = table.entries;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  sorted.resize(k);
  return sorted;
}

OutlierWorksheet make_outlier_worksheet(const PairDistanceTable& table, std::size_t k,
                                        const DefinitionSet& defs_a,
                                        const DefinitionSet& defs_b) {
  OutlierWorksheet sheet;
  sheet.source_a = table.source_a;
  sheet.source_b = table.source_b;
  sheet.kind = table.kind;
  const auto top = topk_outliers(table, k);
  sheet.rows.reserve(top.size());
  for (std::size_t i = 0; i < top.size(); ++i) {
    OutlierRow row;
    row.rank = i + 1;
    row.word = top[i].first;
    row.distance = top[i].second;
    const DefinitionRecord* ra = defs_a.find(row.word);
    const DefinitionRecord* rb = defs_b.find(row.word);
    row.def_a = ra ? ra->norm_text : "";
    row.def_b = rb ? rb->norm_text : "";
    sheet.rows.push_back(std::move(row));
  }
  return sheet;
}

}  // namespace defalign
