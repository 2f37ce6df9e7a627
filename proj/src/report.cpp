#include "defalign/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "defalign/errors.hpp"

namespace defalign {

namespace {

using nlohmann::json;

std::vector<std::string> strata_for(StratifyBy by) {
  if (by == StratifyBy::Tier) {
    return {to_string(Tier::High), to_string(Tier::Medium), to_string(Tier::Low)};
  }
  return {to_string(Pos::Noun), to_string(Pos::Verb), to_string(Pos::Adjective),
          to_string(Pos::Adverb), to_string(Pos::Other)};
}

// Flag the minimum mean per (model block, column), Table-style.
void flag_minima(StratumTable& table) {
  if (table.rows.empty()) return;
  const std::size_t strata = strata_for(table.by).size();
  for (std::size_t block = 0; block * strata < table.rows.size(); ++block) {
    for (std::size_t col = 0; col < table.columns.size(); ++col) {
      std::size_t min_row = table.rows.size();
      for (std::size_t s = 0; s < strata; ++s) {
        const std::size_t r = block * strata + s;
        if (r >= table.rows.size()) break;
        auto& cell = table.rows[r].cells[col];
        if (!cell) continue;
        cell->is_min = false;
        if (min_row == table.rows.size() ||
            cell->mean < table.rows[min_row].cells[col]->mean) {
          min_row = r;
        }
      }
      if (min_row < table.rows.size()) table.rows[min_row].cells[col]->is_min = true;
    }
  }
}

void require_series(EmitFormat format, const char* kind) {
  if (format == EmitFormat::PlotSeries) {
    throw ConfigError(std::string("no plot-series form for a ") + kind);
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json cell_json(const std::optional<StratumCell>& cell) {
  if (!cell) return nullptr;
  return json{{"mean", cell->mean}, {"n", cell->n}, {"is_min", cell->is_min}};
}

json grid_cell_json(const std::optional<GridCell>& cell) {
  if (!cell) return nullptr;
  return json{{"mean_r", cell->mean_r}, {"n", cell->n}, {"is_min", cell->is_min}};
}

}  // namespace

const char* to_string(StratifyBy by) { return by == StratifyBy::Tier ? "tier" : "pos"; }

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw ValidationError("format_double: value not representable");
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  if (ec != std::errc()) throw ValidationError("format_fixed: value not representable");
  return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError(path.string(), "write failure");
}

StratumTable stratify(const PairDistanceTable& table, const std::vector<LexiconEntry>& entries,
                      StratifyBy by) {
  std::unordered_map<std::string, const LexiconEntry*> lookup;
  lookup.reserve(entries.size());
  for (const LexiconEntry& e : entries) lookup[e.word] = &e;

  const std::vector<std::string> strata = strata_for(by);
  std::unordered_map<std::string, std::size_t> stratum_index;
  for (std::size_t i = 0; i < strata.size(); ++i) stratum_index[strata[i]] = i;

  std::vector<double> sums(strata.size(), 0.0);
  std::vector<std::size_t> counts(strata.size(), 0);
  for (const auto& [word, dist] : table.entries) {
    const auto it = lookup.find(word);
    if (it == lookup.end()) {
      throw ValidationError("stratify: '" + word +
                            "' has no lexicon entry; was the vocabulary cleaned?");
    }
    const char* name = by == StratifyBy::Tier ? to_string(it->second->tier)
                                              : to_string(it->second->pos);
    const std::size_t s = stratum_index.at(name);
    sums[s] += dist;
    ++counts[s];
  }

  StratumTable out;
  out.metric_name = std::string(to_string(table.kind)) + "_distance";
  out.by = by;
  out.columns = {table.source_b.name};
  for (std::size_t s = 0; s < strata.size(); ++s) {
    StratumRow row;
    row.model = table.source_a.name;
    row.stratum = strata[s];
    if (counts[s] > 0) {
      StratumCell cell;
      cell.mean = sums[s] / static_cast<double>(counts[s]);
      cell.n = counts[s];
      row.cells.push_back(cell);
    } else {
      row.cells.push_back(std::nullopt);
    }
    out.rows.push_back(std::move(row));
  }
  flag_minima(out);
  return out;
}

StratumTable merge_stratum_tables(const std::vector<StratumTable>& tables) {
  if (tables.empty()) throw InsufficientDataError("merge_stratum_tables: nothing to merge");

  StratumTable out;
  out.metric_name = tables.front().metric_name;
  out.by = tables.front().by;
  const std::vector<std::string> strata = strata_for(out.by);

  std::vector<std::string> models;
  for (const StratumTable& t : tables) {
    if (t.by != out.by || t.metric_name != out.metric_name) {
      throw ValidationError("merge_stratum_tables: mixed metrics or stratifications");
    }
    for (const std::string& col : t.columns) {
      if (std::find(out.columns.begin(), out.columns.end(), col) == out.columns.end()) {
        out.columns.push_back(col);
      }
    }
    for (const StratumRow& row : t.rows) {
      if (std::find(models.begin(), models.end(), row.model) == models.end()) {
        models.push_back(row.model);
      }
    }
  }

  // (model, stratum) rows in model-major, canonical-stratum order.
  std::unordered_map<std::string, std::size_t> row_index;
  for (const std::string& model : models) {
    for (const std::string& stratum : strata) {
      row_index[model + "\x1f" + stratum] = out.rows.size();
      StratumRow row;
      row.model = model;
      row.stratum = stratum;
      row.cells.assign(out.columns.size(), std::nullopt);
      out.rows.push_back(std::move(row));
    }
  }

  for (const StratumTable& t : tables) {
    for (const StratumRow& row : t.rows) {
      StratumRow& target = out.rows[row_index.at(row.model + "\x1f" + row.stratum)];
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const auto col_it = std::find(out.columns.begin(), out.columns.end(), t.columns[c]);
        const std::size_t col = static_cast<std::size_t>(col_it - out.columns.begin());
        if (row.cells[c] && target.cells[col]) {
          throw ValidationError("merge_stratum_tables: duplicate cell for model '" + row.model +
                                "', stratum '" + row.stratum + "', column '" + t.columns[c] +
                                "'");
        }
        if (row.cells[c]) target.cells[col] = row.cells[c];
      }
    }
  }
  flag_minima(out);
  return out;
}

void emit(const MatchHistogram& artifact, EmitFormat format, const std::filesystem::path& path) {
  if (format == EmitFormat::Json) {
    json bins = json::array();
    for (const auto& [bin, count] : artifact.bins) bins.push_back({bin, count});
    const json doc{{"source_a", artifact.source_a},
                   {"source_b", artifact.source_b},
                   {"bins", bins},
                   {"mean_word_count", artifact.mean_word_count},
                   {"long_match_threshold", artifact.long_match_threshold},
                   {"long_match_count", artifact.long_match_count},
                   {"compared", artifact.compared},
                   {"skipped", artifact.skipped}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "bin,count\n";
  for (const auto& [bin, count] : artifact.bins) {
    out += std::to_string(bin) + "," + std::to_string(count) + "\n";
  }
  write_file(path, out);
}

void emit(const AveragedHistogram& artifact, EmitFormat format,
          const std::filesystem::path& path) {
  if (format == EmitFormat::Json) {
    json bins = json::array();
    for (const auto& [bin, value] : artifact.bins) bins.push_back({bin, value});
    const json doc{{"label", artifact.label},
                   {"bins", bins},
                   {"histogram_count", artifact.histogram_count}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "bin,mean_count\n";
  for (const auto& [bin, value] : artifact.bins) {
    out += std::to_string(bin) + "," + format_double(value) + "\n";
  }
  write_file(path, out);
}

void emit(const LengthSummary& artifact, EmitFormat format, const std::filesystem::path& path) {
  require_series(format, "length summary");
  if (format == EmitFormat::Json) {
    json rows = json::array();
    for (const LengthSummaryRow& row : artifact.rows) {
      rows.push_back({{"source", row.source},
                      {"n", row.stats.n},
                      {"mean", row.stats.mean},
                      {"min", row.stats.min},
                      {"max", row.stats.max},
                      {"std", row.stats.stddev}});
    }
    const json doc{{"unit", to_string(artifact.unit)}, {"rows", rows}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "source,n,mean,min,max,std\n";
  for (const LengthSummaryRow& row : artifact.rows) {
    out += csv_escape(row.source) + "," + std::to_string(row.stats.n) + "," +
           format_fixed(row.stats.mean, 2) + "," + std::to_string(row.stats.min) + "," +
           std::to_string(row.stats.max) + "," + format_fixed(row.stats.stddev, 2) + "\n";
  }
  write_file(path, out);
}

void emit(const StratumTable& artifact, EmitFormat format, const std::filesystem::path& path) {
  require_series(format, "stratum table");
  if (format == EmitFormat::Json) {
    json rows = json::array();
    for (const StratumRow& row : artifact.rows) {
      json cells = json::array();
      for (const auto& cell : row.cells) cells.push_back(cell_json(cell));
      rows.push_back({{"model", row.model}, {"stratum", row.stratum}, {"cells", cells}});
    }
    const json doc{{"metric", artifact.metric_name},
                   {"by", to_string(artifact.by)},
                   {"columns", artifact.columns},
                   {"rows", rows}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "model,stratum";
  for (const std::string& col : artifact.columns) out += "," + csv_escape(col);
  out += "\n";
  for (const StratumRow& row : artifact.rows) {
    out += csv_escape(row.model) + "," + csv_escape(row.stratum);
    for (const auto& cell : row.cells) {
      out += ",";
      if (cell) out += format_fixed(cell->mean, 2);
    }
    out += "\n";
  }
  write_file(path, out);
}

void emit(const PairDistanceTable& artifact, EmitFormat format,
          const std::filesystem::path& path) {
  require_series(format, "pair distance table");
  if (format == EmitFormat::Json) {
    json entries = json::array();
    for (const auto& [word, dist] : artifact.entries) {
      entries.push_back({{"word", word}, {"distance", dist}});
    }
    json doc{{"source_a", artifact.source_a.name},
             {"source_b", artifact.source_b.name},
             {"kind", to_string(artifact.kind)},
             {"skipped", artifact.skipped},
             {"entries", entries}};
    if (!artifact.entries.empty()) doc["mean"] = artifact.mean();
    write_file(path, dump(doc));
    return;
  }
  std::string out = "word,distance\n";
  for (const auto& [word, dist] : artifact.entries) {
    out += csv_escape(word) + "," + format_double(dist) + "\n";
  }
  write_file(path, out);
}

void emit(const OutlierWorksheet& artifact, EmitFormat format,
          const std::filesystem::path& path) {
  require_series(format, "outlier worksheet");
  if (format == EmitFormat::Json) {
    json rows = json::array();
    for (const OutlierRow& row : artifact.rows) {
      rows.push_back({{"rank", row.rank},
                      {"word", row.word},
                      {"distance", row.distance},
                      {"def_a", row.def_a},
                      {"def_b", row.def_b}});
    }
    const json doc{{"source_a", artifact.source_a.name},
                   {"source_b", artifact.source_b.name},
                   {"kind", to_string(artifact.kind)},
                   {"rows", rows}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "rank,word,distance,def_a,def_b\n";
  for (const OutlierRow& row : artifact.rows) {
    out += std::to_string(row.rank) + "," + csv_escape(row.word) + "," +
           format_double(row.distance) + "," + csv_escape(row.def_a) + "," +
           csv_escape(row.def_b) + "\n";
  }
  write_file(path, out);
}

void emit(const ConsistencyReport& artifact, EmitFormat format,
          const std::filesystem::path& path) {
  require_series(format, "consistency report");
  if (format == EmitFormat::Json) {
    json per_word = json::array();
    for (const auto& [word, r] : artifact.per_word_r) {
      per_word.push_back({{"word", word}, {"r", r}});
    }
    json tier_means = json::object();
    for (const auto& [tier, stats] : artifact.tier_means) {
      tier_means[to_string(tier)] = {{"mean_r", stats.first}, {"n", stats.second}};
    }
    const json doc{{"space_word", artifact.space_word},
                   {"space_def", artifact.space_def},
                   {"kind", to_string(artifact.kind)},
                   {"mean_r", artifact.mean_r},
                   {"tier_means", tier_means},
                   {"vocabulary_size", artifact.vocabulary_size},
                   {"co_covered", artifact.co_covered},
                   {"coverage", artifact.coverage},
                   {"per_word_r", per_word},
                   {"skipped", artifact.skipped}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "word,r\n";
  for (const auto& [word, r] : artifact.per_word_r) {
    out += csv_escape(word) + "," + format_double(r) + "\n";
  }
  write_file(path, out);
}

void emit(const ConsistencyGrid& artifact, EmitFormat format,
          const std::filesystem::path& path) {
  require_series(format, "consistency grid");
  if (format == EmitFormat::Json) {
    json rows = json::array();
    for (std::size_t s = 0; s < artifact.source_names.size(); ++s) {
      for (std::size_t t = 0; t < artifact.tiers.size(); ++t) {
        json cells = json::array();
        for (std::size_t w = 0; w < artifact.space_names.size(); ++w) {
          cells.push_back(grid_cell_json(artifact.cell(s, t, w)));
        }
        rows.push_back({{"source", artifact.source_names[s]},
                        {"tier", to_string(artifact.tiers[t])},
                        {"cells", cells}});
      }
    }
    const json doc{{"kind", to_string(artifact.kind)},
                   {"spaces", artifact.space_names},
                   {"sources", artifact.source_names},
                   {"rows", rows}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "source,tier";
  for (const std::string& space : artifact.space_names) out += "," + csv_escape(space);
  out += "\n";
  for (std::size_t s = 0; s < artifact.source_names.size(); ++s) {
    for (std::size_t t = 0; t < artifact.tiers.size(); ++t) {
      out += csv_escape(artifact.source_names[s]);
      out += ",";
      out += to_string(artifact.tiers[t]);
      for (std::size_t w = 0; w < artifact.space_names.size(); ++w) {
        const auto& cell = artifact.cell(s, t, w);
        out += ",";
        if (cell) out += format_fixed(cell->mean_r, 2);
      }
      out += "\n";
    }
  }
  write_file(path, out);
}

void emit(const PlotSeries& artifact, EmitFormat format, const std::filesystem::path& path) {
  if (format == EmitFormat::Json) {
    json points = json::array();
    for (const auto& [x, y] : artifact.points) points.push_back({x, y});
    const json doc{{"name", artifact.name}, {"points", points}};
    write_file(path, dump(doc));
    return;
  }
  std::string out = "x,y\n";
  for (const auto& [x, y] : artifact.points) {
    out += format_double(x) + "," + format_double(y) + "\n";
  }
  write_file(path, out);
}

}  // namespace defalign
