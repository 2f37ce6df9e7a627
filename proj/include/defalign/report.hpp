#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "defalign/consistency.hpp"
#include "defalign/lexicon.hpp"
#include "defalign/surface.hpp"
#include "defalign/vectorspace.hpp"

namespace defalign {

enum class StratifyBy { Tier, Pos };
const char* to_string(StratifyBy by);

struct StratumCell {
  double mean = 0.0;
  std::size_t n = 0;
  bool is_min = false;  // per-model, per-column minimum across strata
};

struct StratumRow {
  std::string model;
  std::string stratum;
  std::vector<std::optional<StratumCell>> cells;  // aligned with columns
};

struct StratumTable {
  std::string metric_name;
  StratifyBy by = StratifyBy::Tier;
  std::vector<std::string> columns;  // dictionary source names
  std::vector<StratumRow> rows;      // model-major, canonical stratum order
};

// Mean distance per stratum for one (model, dictionary) pair; every table
// word must have a lexicon entry.
StratumTable stratify(const PairDistanceTable& table,
                      const std::vector<LexiconEntry>& entries, StratifyBy by);

// Join single-pair tables into one model x stratum x dictionary grid.
StratumTable merge_stratum_tables(const std::vector<StratumTable>& tables);

// One row of length stats per source.
struct LengthSummaryRow {
  std::string source;
  LengthStats stats;
};

struct LengthSummary {
  LengthUnit unit = LengthUnit::Chars;
  std::vector<LengthSummaryRow> rows;
};

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

enum class EmitFormat { Csv, Json, PlotSeries };

// Deterministic emission: stable key ordering, shortest round-trip float
// rendering (stratum CSV cells are fixed two-decimal). I/O failures carry the
// path; the parent directory must exist.
void emit(const MatchHistogram& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const AveragedHistogram& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const LengthSummary& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const StratumTable& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const PairDistanceTable& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const OutlierWorksheet& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const ConsistencyReport& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const ConsistencyGrid& artifact, EmitFormat format, const std::filesystem::path& path);
void emit(const PlotSeries& artifact, EmitFormat format, const std::filesystem::path& path);

// RFC-4180: quote when a field contains comma, quote, or newline.
std::string csv_escape(const std::string& field);

std::string format_double(double value);             // shortest round-trip
std::string format_fixed(double value, int decimals);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace defalign
