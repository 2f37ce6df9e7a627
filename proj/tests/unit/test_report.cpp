#include <doctest.h>

#include <json.hpp>

#include <string>
#include <vector>

#include "defalign/errors.hpp"
#include "defalign/report.hpp"
#include "tempdir.hpp"

using namespace defalign;
using nlohmann::json;
using testsupport::TempDir;
using testsupport::slurp;

namespace {

std::vector<LexiconEntry> sample_entries() {
  std::vector<LexiconEntry> entries;
  const auto add = [&](const char* word, std::size_t rank, Tier tier, Pos pos) {
    entries.push_back({word, rank, tier, pos, PosProvenance::Heuristic});
  };
  add("w1", 1, Tier::High, Pos::Noun);
  add("w2", 2, Tier::High, Pos::Verb);
  add("w3", 3, Tier::Medium, Pos::Noun);
  add("w4", 4, Tier::Low, Pos::Adverb);
  return entries;
}

PairDistanceTable sample_table() {
  PairDistanceTable t;
  t.source_a = {"genx-1", SourceKind::GeneratedModel, 1};
  t.source_b = {"dicta", SourceKind::PublishedDictionary, 0};
  t.kind = DistanceKind::Cosine;
  t.entries = {{"w1", 0.25}, {"w2", 0.75}, {"w3", 0.4}, {"w4", 0.9}};
  return t;
}

}  // namespace

TEST_CASE("csv escaping follows the quoting rules") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("with,comma") == "\"with,comma\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(csv_escape("") == "");
}

TEST_CASE("float formatting is shortest round-trip or fixed precision") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

  CHECK(format_fixed(1.25, 2) == "1.25");
  CHECK(format_fixed(1.0, 2) == "1.00");
  CHECK(format_fixed(-0.0, 2) == "0.00");  // negative zero is normalized
  CHECK(format_fixed(35.969, 2) == "35.97");
}

TEST_CASE("stratified tables compute per-stratum means with minima flags") {
  const StratumTable table = stratify(sample_table(), sample_entries(), StratifyBy::Tier);
  CHECK(table.metric_name == "cosine_distance");
  REQUIRE(table.columns == std::vector<std::string>{"dicta"});
  REQUIRE(table.rows.size() == 3);  // high, medium, low

  CHECK(table.rows[0].model == "genx-1");
  CHECK(table.rows[0].stratum == "high");
  REQUIRE(table.rows[0].cells[0].has_value());
  CHECK(table.rows[0].cells[0]->mean == doctest::Approx(0.5));  // (0.25 + 0.75) / 2
  CHECK(table.rows[0].cells[0]->n == 2);
  CHECK(table.rows[1].cells[0]->mean == doctest::Approx(0.4));
  CHECK(table.rows[2].cells[0]->mean == doctest::Approx(0.9));

  // medium (0.4) is the column minimum
  CHECK(!table.rows[0].cells[0]->is_min);
  CHECK(table.rows[1].cells[0]->is_min);
  CHECK(!table.rows[2].cells[0]->is_min);

  SUBCASE("part-of-speech strata") {
    const StratumTable by_pos = stratify(sample_table(), sample_entries(), StratifyBy::Pos);
    REQUIRE(by_pos.rows.size() == 5);  // noun, verb, adjective, adverb, other
    CHECK(by_pos.rows[0].stratum == "noun");
    CHECK(by_pos.rows[0].cells[0]->n == 2);  // w1, w3
    CHECK(!by_pos.rows[2].cells[0].has_value());  // no adjectives in the sample
  }
  SUBCASE("a table word without a lexicon entry is an error") {
    PairDistanceTable t = sample_table();
    t.entries.emplace_back("w9", 0.1);
    CHECK_THROWS_AS(stratify(t, sample_entries(), StratifyBy::Tier), ValidationError);
  }
}

TEST_CASE("merging stratum tables joins models and dictionary columns") {
  StratumTable t1 = stratify(sample_table(), sample_entries(), StratifyBy::Tier);

  PairDistanceTable p2 = sample_table();
  p2.source_b.name = "dictb";
  for (auto& [word, d] : p2.entries) d += 0.05;
  StratumTable t2 = stratify(p2, sample_entries(), StratifyBy::Tier);

  PairDistanceTable p3 = sample_table();
  p3.source_a.name = "genx-2";
  StratumTable t3 = stratify(p3, sample_entries(), StratifyBy::Tier);

  const StratumTable merged = merge_stratum_tables({t1, t2, t3});
  REQUIRE(merged.columns == std::vector<std::string>{"dicta", "dictb"});
  REQUIRE(merged.rows.size() == 6);  // two models x three tiers
  CHECK(merged.rows[0].model == "genx-1");
  CHECK(merged.rows[3].model == "genx-2");

  // genx-2 has no dictb cells.
  REQUIRE(merged.rows[3].cells.size() == 2);
  CHECK(merged.rows[3].cells[0].has_value());
  CHECK(!merged.rows[3].cells[1].has_value());

  // Minima are flagged within each model block and column.
  CHECK(merged.rows[1].cells[0]->is_min);   // genx-1 / medium / dicta
  CHECK(merged.rows[4].cells[0]->is_min);   // genx-2 / medium / dicta

  SUBCASE("mixed stratification kinds refuse to merge") {
    StratumTable pos_table = stratify(sample_table(), sample_entries(), StratifyBy::Pos);
    CHECK_THROWS_AS(merge_stratum_tables({t1, pos_table}), ValidationError);
  }
  SUBCASE("duplicate pair is rejected") {
    CHECK_THROWS_AS(merge_stratum_tables({t1, t1}), ValidationError);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(merge_stratum_tables({}), InsufficientDataError);
  }
}

TEST_CASE("stratum tables emit model-major CSV with two-decimal cells") {
  TempDir dir;
  const StratumTable table = stratify(sample_table(), sample_entries(), StratifyBy::Tier);
  const auto csv_path = dir.path() / "strata.csv";
  emit(table, EmitFormat::Csv, csv_path);
  CHECK(slurp(csv_path) ==
        "model,stratum,dicta\n"
        "genx-1,high,0.50\n"
        "genx-1,medium,0.40\n"
        "genx-1,low,0.90\n");

  const auto json_path = dir.path() / "strata.json";
  emit(table, EmitFormat::Json, json_path);
  const json doc = json::parse(slurp(json_path));
  CHECK(doc["metric"] == "cosine_distance");
  CHECK(doc["by"] == "tier");
  CHECK(doc["rows"][0]["cells"][0]["mean"] == 0.5);
  CHECK(doc["rows"][1]["cells"][0]["is_min"] == true);

  CHECK_THROWS_AS(emit(table, EmitFormat::PlotSeries, dir.path() / "s.csv"), ConfigError);
}

TEST_CASE("histograms emit sorted bin and count rows") {
  TempDir dir;
  MatchHistogram h;
  h.source_a = "a";
  h.source_b = "b";
  h.bins = {{3, 2}, {1, 5}, {7, 1}};
  h.compared = 8;
  h.mean_word_count = 2.0;

  const auto csv_path = dir.path() / "hist.csv";
  emit(h, EmitFormat::Csv, csv_path);
  CHECK(slurp(csv_path) == "bin,count\n1,5\n3,2\n7,1\n");

  const auto series_path = dir.path() / "hist_series.csv";
  emit(h, EmitFormat::PlotSeries, series_path);
  CHECK(slurp(series_path) == slurp(csv_path));  // the plot series is the same table

  const auto json_path = dir.path() / "hist.json";
  emit(h, EmitFormat::Json, json_path);
  const json doc = json::parse(slurp(json_path));
  CHECK(doc["source_a"] == "a");
  CHECK(doc["bins"].size() == 3);
  CHECK(doc["bins"][0][0] == 1);
  CHECK(doc["bins"][0][1] == 5);
  CHECK(doc["compared"] == 8);
}

TEST_CASE("length summaries emit csv with fixed decimals and full-precision json") {
  TempDir dir;
  LengthSummary summary;
  summary.unit = LengthUnit::Chars;
  LengthStats stats;
  stats.n = 2459;
  stats.mean = 35.969;
  stats.min = 3;
  stats.max = 253;
  stats.stddev = 20.214;
  summary.rows.push_back({"genx-1", stats});

  const auto csv_path = dir.path() / "len.csv";
  emit(summary, EmitFormat::Csv, csv_path);
  CHECK(slurp(csv_path) ==
        "source,n,mean,min,max,std\n"
        "genx-1,2459,35.97,3,253,20.21\n");

  const auto json_path = dir.path() / "len.json";
  emit(summary, EmitFormat::Json, json_path);
  const json doc = json::parse(slurp(json_path));
  CHECK(doc["unit"] == "chars");
  CHECK(doc["rows"][0]["mean"] == 35.969);  // no rounding in JSON
}

TEST_CASE("consistency reports and grids serialize their structure") {
  TempDir dir;
  ConsistencyReport rep;
  rep.space_word = "alpha";
  rep.space_def = "dicta";
  rep.kind = DistanceKind::Cosine;
  rep.per_word_r = {{"w1", 0.5}, {"w2", 0.25}};
  rep.mean_r = 0.375;
  rep.tier_means[Tier::High] = {0.375, 2};
  rep.vocabulary_size = 3;
  rep.co_covered = 2;
  rep.coverage = 2.0 / 3.0;
  rep.skipped = {"w3"};

  const auto csv_path = dir.path() / "rep.csv";
  emit(rep, EmitFormat::Csv, csv_path);
  CHECK(slurp(csv_path) == "word,r\nw1,0.5\nw2,0.25\n");

  const auto json_path = dir.path() / "rep.json";
  emit(rep, EmitFormat::Json, json_path);
  const json doc = json::parse(slurp(json_path));
  CHECK(doc["space_word"] == "alpha");
  CHECK(doc["mean_r"] == 0.375);
  CHECK(doc["tier_means"]["high"]["n"] == 2);
  CHECK(doc["skipped"][0] == "w3");

  ConsistencyGrid grid;
  grid.kind = DistanceKind::Cosine;
  grid.space_names = {"alpha"};
  grid.source_names = {"dicta"};
  grid.tiers = {Tier::High, Tier::Medium, Tier::Low};
  grid.cells = {{GridCell{0.38, 10, false}}, {GridCell{0.35, 10, false}},
                {GridCell{0.29, 10, true}}};

  const auto grid_csv = dir.path() / "grid.csv";
  emit(grid, EmitFormat::Csv, grid_csv);
  CHECK(slurp(grid_csv) ==
        "source,tier,alpha\n"
        "dicta,high,0.38\n"
        "dicta,medium,0.35\n"
        "dicta,low,0.29\n");

  const auto grid_json = dir.path() / "grid.json";
  emit(grid, EmitFormat::Json, grid_json);
  const json doc2 = json::parse(slurp(grid_json));
  CHECK(doc2["rows"].size() == 3);
  CHECK(doc2["rows"][2]["cells"][0]["is_min"] == true);
}

TEST_CASE("pair tables and worksheets emit word rows") {
  TempDir dir;
  const PairDistanceTable t = sample_table();
  const auto csv_path = dir.path() / "dist.csv";
  emit(t, EmitFormat::Csv, csv_path);
  CHECK(slurp(csv_path) == "word,distance\nw1,0.25\nw2,0.75\nw3,0.4\nw4,0.9\n");

  OutlierWorksheet sheet;
  sheet.source_a = t.source_a;
  sheet.source_b = t.source_b;
  sheet.rows.push_back({1, "w4", 0.9, "a def, with comma", ""});

  const auto sheet_path = dir.path() / "sheet.csv";
  emit(sheet, EmitFormat::Csv, sheet_path);
  CHECK(slurp(sheet_path) ==
        "rank,word,distance,def_a,def_b\n"
        "1,w4,0.9,\"a def, with comma\",\n");
}

TEST_CASE("emission fails loudly when the directory does not exist") {
  TempDir dir;
  MatchHistogram h;
  h.source_a = "a";
  h.source_b = "b";
  CHECK_THROWS_AS(emit(h, EmitFormat::Csv, dir.path() / "missing" / "x.csv"), IoError);
}

TEST_CASE("emitted files are byte-stable across repeated writes") {
  TempDir dir;
  const StratumTable table = stratify(sample_table(), sample_entries(), StratifyBy::Tier);
  emit(table, EmitFormat::Json, dir.path() / "one.json");
  emit(table, EmitFormat::Json, dir.path() / "two.json");
  CHECK(slurp(dir.path() / "one.json") == slurp(dir.path() / "two.json"));
}
