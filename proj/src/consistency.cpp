#include "defalign/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "defalign/errors.hpp"

namespace defalign {

double pearson(const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw ArityError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw InsufficientDataError("pearson: need at least 2 points, got " +
                                std::to_string(x.size()));
  }
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::ArrayXd dx = x.array() - mx;
  const Eigen::ArrayXd dy = y.array() - my;
  const double sx = (dx * dx).sum();
  const double sy = (dy * dy).sum();
  if (sx == 0.0 || sy == 0.0) {
    throw InsufficientDataError("pearson: constant input, correlation undefined");
  }
  // sqrt of the product (not product of sqrts) so affine-related inputs come
  // out at exactly +/-1.
  const double r = (dx * dy).sum() / std::sqrt(sx * sy);
  return std::clamp(r, -1.0, 1.0);
}

Eigen::VectorXd distance_vector(const std::string& word, const EmbeddingTable& table,
                                const std::vector<std::string>& vocabulary,
                                DistanceKind kind) {
  const auto self = table.index_of(word);
  if (!self) throw BoundsError("space '" + table.space_name() + "' has no vector for '" + word + "'");
  if (vocabulary.empty()) {
    throw ValidationError("distance_vector: '" + word + "' not in the vocabulary");
  }

  Eigen::VectorXd out(static_cast<Eigen::Index>(vocabulary.size()) - 1);
  Eigen::Index k = 0;
  bool saw_self = false;
  for (const std::string& other : vocabulary) {
    if (other == word) {
      saw_self = true;
      continue;
    }
    const auto oi = table.index_of(other);
    if (!oi) {
      throw BoundsError("space '" + table.space_name() + "' has no vector for '" + other + "'");
    }
    if (k >= out.size()) {
      throw ValidationError("distance_vector: '" + word + "' not in the vocabulary");
    }
    out(k++) = kind == DistanceKind::Cosine
                   ? cosine_distance(table.row(*self), table.row(*oi))
                   : euclidean_distance(table.row(*self), table.row(*oi));
  }
  if (!saw_self) throw ValidationError("distance_vector: '" + word + "' not in the vocabulary");
  return out;
}

namespace {

struct PerWordOutcome {
  double r = 0.0;
  bool ok = false;  // false = undefined correlation for this word
};

// Shared implementation: distance matrices over the co-covered vocabulary,
// then one Pearson correlation per word between matrix rows (self column
// dropped). Threads split the word range; results land in fixed slots so the
// reduction order is canonical regardless of `jobs`.
ConsistencyReport consistency_impl(const EmbeddingTable& word_space,
                                   const EmbeddingTable& def_space,
                                   const std::vector<LexiconEntry>& vocabulary,
                                   DistanceKind kind, unsigned jobs) {
  ConsistencyReport report;
  report.space_word = word_space.space_name();
  report.space_def = def_space.space_name();
  report.kind = kind;
  report.vocabulary_size = vocabulary.size();

  std::vector<const LexiconEntry*> covered;
  covered.reserve(vocabulary.size());
  for (const LexiconEntry& entry : vocabulary) {
    if (word_space.contains(entry.word) && def_space.contains(entry.word)) {
      covered.push_back(&entry);
    } else {
      report.skipped.push_back(entry.word);
    }
  }
  report.co_covered = covered.size();
  report.coverage = vocabulary.empty()
                        ? 0.0
                        : static_cast<double>(covered.size()) /
                              static_cast<double>(vocabulary.size());
  if (covered.size() < 3) {
    throw InsufficientDataError("space consistency " + report.space_word + " vs " +
                                report.space_def + ": only " +
                                std::to_string(covered.size()) +
                                " words covered by both spaces; need at least 3");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(covered.size());
  Eigen::MatrixXd rows_w(n, word_space.dim());
  Eigen::MatrixXd rows_d(n, def_space.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    rows_w.row(i) = word_space.row(covered[static_cast<std::size_t>(i)]->word);
    rows_d.row(i) = def_space.row(covered[static_cast<std::size_t>(i)]->word);
  }
  const Eigen::MatrixXd dist_w = pairwise_distances(rows_w, kind);
  const Eigen::MatrixXd dist_d = pairwise_distances(rows_d, kind);

  std::vector<PerWordOutcome> outcomes(covered.size());
  auto run_range = [&](Eigen::Index begin, Eigen::Index end) {
    Eigen::VectorXd x(n - 1);
    Eigen::VectorXd y(n - 1);
    for (Eigen::Index i = begin; i < end; ++i) {
      Eigen::Index k = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        x(k) = dist_w(i, j);
        y(k) = dist_d(i, j);
        ++k;
      }
      PerWordOutcome& out = outcomes[static_cast<std::size_t>(i)];
      try {
        out.r = pearson(x, y);
        out.ok = true;
      } catch (const InsufficientDataError&) {
        out.ok = false;
      }
    }
  };

  const unsigned workers = std::max(1u, jobs);
  if (workers == 1 || n < 64) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (n + static_cast<Eigen::Index>(workers) - 1) /
                               static_cast<Eigen::Index>(workers);
    for (unsigned t = 0; t < workers; ++t) {
      const Eigen::Index begin = static_cast<Eigen::Index>(t) * chunk;
      const Eigen::Index end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }

  struct TierAcc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<Tier, TierAcc> tier_acc;
  double sum_r = 0.0;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!outcomes[i].ok) {
      report.skipped.push_back(covered[i]->word);
      continue;
    }
    report.per_word_r.emplace_back(covered[i]->word, outcomes[i].r);
    sum_r += outcomes[i].r;
    TierAcc& acc = tier_acc[covered[i]->tier];
    acc.sum += outcomes[i].r;
    ++acc.n;
  }
  if (report.per_word_r.empty()) {
    throw InsufficientDataError("space consistency " + report.space_word + " vs " +
                                report.space_def + ": no word had a defined correlation");
  }
  report.mean_r = sum_r / static_cast<double>(report.per_word_r.size());
  for (const auto& [tier, acc] : tier_acc) {
    report.tier_means[tier] = {acc.sum / static_cast<double>(acc.n), acc.n};
  }
  return report;
}

}  // namespace

ConsistencyReport space_consistency(const EmbeddingTable& word_space,
                                    const EmbeddingTable& def_space,
                                    const std::vector<LexiconEntry>& vocabulary,
                                    DistanceKind kind, unsigned jobs) {
  if (vocabulary.size() < 3) {
    throw InsufficientDataError("space consistency: vocabulary of " +
                                std::to_string(vocabulary.size()) + " words; need at least 3");
  }
  return consistency_impl(word_space, def_space, vocabulary, kind, jobs);
}

const std::optional<GridCell>& ConsistencyGrid::cell(std::size_t source, std::size_t tier,
                                                     std::size_t space) const {
  return cells.at(source * tiers.size() + tier).at(space);
}

std::vector<std::vector<ConsistencyReport>> consistency_reports(
    const std::vector<const EmbeddingTable*>& def_spaces,
    const std::vector<const EmbeddingTable*>& word_spaces,
    const std::vector<LexiconEntry>& vocabulary, DistanceKind kind, unsigned jobs) {
  if (def_spaces.empty()) throw ValidationError("consistency grid: no definition spaces");
  if (word_spaces.empty()) throw ValidationError("consistency grid: no word spaces");

  std::vector<std::vector<ConsistencyReport>> reports(def_spaces.size());
  for (std::size_t s = 0; s < def_spaces.size(); ++s) {
    reports[s].reserve(word_spaces.size());
    for (std::size_t w = 0; w < word_spaces.size(); ++w) {
      reports[s].push_back(
          space_consistency(*word_spaces[w], *def_spaces[s], vocabulary, kind, jobs));
    }
  }
  return reports;
}

ConsistencyGrid grid_from_reports(const std::vector<std::vector<ConsistencyReport>>& reports,
                                  const std::vector<const EmbeddingTable*>& def_spaces,
                                  const std::vector<const EmbeddingTable*>& word_spaces,
                                  DistanceKind kind) {
  ConsistencyGrid grid;
  grid.kind = kind;
  grid.tiers = {Tier::High, Tier::Medium, Tier::Low};
  for (const EmbeddingTable* w : word_spaces) grid.space_names.push_back(w->space_name());
  for (const EmbeddingTable* s : def_spaces) grid.source_names.push_back(s->space_name());
  grid.cells.assign(def_spaces.size() * grid.tiers.size(),
                    std::vector<std::optional<GridCell>>(word_spaces.size()));

  for (std::size_t s = 0; s < def_spaces.size(); ++s) {
    for (std::size_t w = 0; w < word_spaces.size(); ++w) {
      const ConsistencyReport& rep = reports.at(s).at(w);
      for (std::size_t t = 0; t < grid.tiers.size(); ++t) {
        const auto it = rep.tier_means.find(grid.tiers[t]);
        if (it == rep.tier_means.end()) continue;  // empty tier: cell absent
        GridCell cell;
        cell.mean_r = it->second.first;
        cell.n = it->second.second;
        grid.cells[s * grid.tiers.size() + t][w] = cell;
      }
    }
    // Flag the per-column minimum inside this source's block of tier rows.
    for (std::size_t w = 0; w < word_spaces.size(); ++w) {
      std::size_t min_t = grid.tiers.size();
      for (std::size_t t = 0; t < grid.tiers.size(); ++t) {
        const auto& cell = grid.cells[s * grid.tiers.size() + t][w];
        if (!cell) continue;
        if (min_t == grid.tiers.size() ||
            cell->mean_r < grid.cells[s * grid.tiers.size() + min_t][w]->mean_r) {
          min_t = t;
        }
      }
      if (min_t < grid.tiers.size()) {
        grid.cells[s * grid.tiers.size() + min_t][w]->is_min = true;
      }
    }
  }
  return grid;
}

ConsistencyGrid consistency_matrix(const std::vector<const EmbeddingTable*>& def_spaces,
                                   const std::vector<const EmbeddingTable*>& word_spaces,
                                   const std::vector<LexiconEntry>& vocabulary,
                                   DistanceKind kind, unsigned jobs) {
  const auto reports = consistency_reports(def_spaces, word_spaces, vocabulary, kind, jobs);
  return grid_from_reports(reports, def_spaces, word_spaces, kind);
}

}  // namespace defalign
