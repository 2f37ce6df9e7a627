#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "defalign/consistency.hpp"
#include "defalign/errors.hpp"
#include "defalign/hash.hpp"
#include "defalign/ingest.hpp"
#include "defalign/lexicon.hpp"
#include "defalign/netclient.hpp"
#include "defalign/report.hpp"
#include "defalign/surface.hpp"
#include "defalign/synth.hpp"
#include "defalign/vectorspace.hpp"
#include "defalign/version.hpp"

namespace fs = std::filesystem;
using defalign::ConfigError;
using nlohmann::json;

namespace {

std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& path, const std::string& command, const json& config,
                    const std::vector<fs::path>& inputs,
                    std::optional<std::uint64_t> seed = std::nullopt) {
  json digests = json::object();
  for (const fs::path& input : inputs) {
    digests[input.string()] = defalign::file_digest_hex(input);
  }
  json doc{{"tool", defalign::kToolName},
           {"version", defalign::kToolVersion},
           {"command", command},
           {"timestamp", iso_timestamp()},
           {"config", config},
           {"inputs", digests}};
  if (seed) doc["seed"] = *seed;
  defalign::write_file(path, doc.dump(2) + "\n");
}

// "a-b" (inclusive) or "N" (shorthand for 1-N).
defalign::RankInterval parse_interval(const std::string& text) {
  const auto parse_part = [&](const std::string& part) -> std::size_t {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(part, &pos);
      if (pos != part.size() || v == 0) throw std::invalid_argument(part);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ConfigError("bad rank window '" + text + "': expected 'N' or 'a-b' with ranks >= 1");
    }
  };
  const std::size_t dash = text.find('-');
  if (dash == std::string::npos) return {1, parse_part(text)};
  return {parse_part(text.substr(0, dash)), parse_part(text.substr(dash + 1))};
}

std::vector<defalign::RankInterval> parse_intervals(const std::string& text) {
  std::vector<defalign::RankInterval> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) out.push_back(parse_interval(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty rank window list '" + text + "'");
  return out;
}

struct NamedPath {
  std::string name;
  fs::path path;
};

NamedPath parse_named_path(const std::string& text, const std::string& flag) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) {
    throw ConfigError(flag + " expects NAME=PATH, got '" + text + "'");
  }
  const std::string name = text.substr(0, eq);
  if (name.find_first_not_of(
          "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
      std::string::npos) {
    throw ConfigError(flag + " name '" + name + "' may use only letters, digits, '-' and '_'");
  }
  return {name, fs::path(text.substr(eq + 1))};
}

// Trailing -1/-2 on a generated source's name selects the prompt type.
int prompt_from_name(const std::string& name) {
  if (name.size() >= 2 && name[name.size() - 2] == '-') {
    if (name.back() == '1') return 1;
    if (name.back() == '2') return 2;
  }
  return 0;
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw defalign::IoError(dir.string(), "cannot create output directory");
}

struct ClientFlags {
  defalign::ClientConfig config;
  int prompt = 1;

  void attach(CLI::App* cmd, bool with_prompt) {
    cmd->add_option("--base-url", config.base_url, "API origin, e.g. http://localhost:8080/v1");
    cmd->add_option("--model", config.model_name, "model name sent to the endpoint")
        ->required();
    cmd->add_option("--key-env", config.api_key_env,
                    "environment variable holding the API key (default DEFALIGN_API_KEY)");
    cmd->add_option("--rpm", config.requests_per_minute, "request budget per sliding minute")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-retries", config.max_retries, "retries after the first attempt")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--cache-dir", config.cache_dir, "response cache directory")->required();
    cmd->add_option("--max-batch", config.max_batch, "texts per embeddings request")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--backoff-initial-ms", config.backoff_initial_ms,
                    "first retry delay in milliseconds");
    cmd->add_option("--backoff-max-ms", config.backoff_max_ms, "retry delay ceiling");
    cmd->add_option("--timeout-sec", config.timeout_sec, "per-request timeout")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--offline", config.offline, "forbid network use; serve from cache only");
    if (with_prompt) {
      cmd->add_option("--prompt", prompt, "prompt type: 1 or 2")->check(CLI::Range(1, 2));
    }
  }
};

std::vector<std::string> read_word_list(const fs::path& path) {
  std::ifstream probe(path);
  if (!probe) throw defalign::IoError(path.string(), "cannot open word list");
  std::string first;
  std::getline(probe, first);
  probe.close();

  std::vector<std::string> words;
  if (first.rfind("word\t", 0) == 0) {
    for (const auto& entry : defalign::load_entries(path)) words.push_back(entry.word);
  } else {
    for (const auto& ranked : defalign::load_lexicon(path)) words.push_back(ranked.word);
  }
  return words;
}

std::string pair_stem(const std::string& a, const std::string& b) { return a + "_vs_" + b; }

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  fs::path vocab_path;
  std::vector<std::string> dict_specs;
  std::vector<std::string> gen_specs;
  std::vector<std::string> word_vec_specs;
  std::vector<std::string> def_vec_specs;
  std::string kind_name = "cosine";
  std::vector<std::string> only;
  std::size_t top_k = 50;
  std::size_t min_match_words = 5;
  unsigned jobs = 1;
  fs::path out_dir;
};

struct LoadedSource {
  defalign::SourceId id;
  fs::path path;
  defalign::DefinitionSet defs;
};

void run_analyze(const AnalyzeArgs& args) {
  using namespace defalign;

  const DistanceKind kind =
      args.kind_name == "euclidean" ? DistanceKind::Euclidean : DistanceKind::Cosine;

  bool do_surface = args.only.empty();
  bool do_distance = args.only.empty();
  bool do_consistency = args.only.empty();
  for (const std::string& stage : args.only) {
    if (stage == "surface") {
      do_surface = true;
    } else if (stage == "distance") {
      do_distance = true;
    } else if (stage == "consistency") {
      do_consistency = true;
    } else {
      throw ConfigError("unknown stage '" + stage +
                        "' for --only (expected surface, distance, or consistency)");
    }
  }

  // Validation-first: parse and cross-check every input before writing
  // anything, so a bad flag cannot leave a half-written bundle behind.
  if (args.dict_specs.size() + args.gen_specs.size() < 2) {
    throw ConfigError("analyze needs at least two definition sources (--dict/--gen)");
  }
  std::vector<LexiconEntry> entries = load_entries(args.vocab_path);

  std::vector<LoadedSource> sources;
  std::set<std::string> names;
  const auto add_source = [&](const std::string& spec, const char* flag, SourceKind kind_tag) {
    const NamedPath np = parse_named_path(spec, flag);
    if (!names.insert(np.name).second) {
      throw ConfigError("duplicate source name '" + np.name + "'");
    }
    SourceId id;
    id.name = np.name;
    id.kind = kind_tag;
    id.prompt_type = kind_tag == SourceKind::GeneratedModel ? prompt_from_name(np.name) : 0;
    LoadedSource src{id, np.path, load_definitions(np.path, id)};
    sources.push_back(std::move(src));
  };
  for (const std::string& spec : args.dict_specs) {
    add_source(spec, "--dict", SourceKind::PublishedDictionary);
  }
  for (const std::string& spec : args.gen_specs) {
    add_source(spec, "--gen", SourceKind::GeneratedModel);
  }
  std::vector<const DefinitionSet*> set_ptrs;
  for (const LoadedSource& s : sources) set_ptrs.push_back(&s.defs);
  const std::vector<std::string> vocabulary = clean_intersection(set_ptrs, entries);
  if (vocabulary.empty()) {
    throw InsufficientDataError("no sampled word has a definition in every source");
  }
  std::vector<LexiconEntry> vocab_entries;
  {
    std::set<std::string> vocab_set(vocabulary.begin(), vocabulary.end());
    for (const LexiconEntry& e : entries) {
      if (vocab_set.count(e.word)) vocab_entries.push_back(e);
    }
  }

  VectorLoadStats load_stats;
  std::vector<EmbeddingTable> word_tables;
  for (const std::string& spec : args.word_vec_specs) {
    const NamedPath np = parse_named_path(spec, "--word-vectors");
    word_tables.push_back(
        load_vectors(np.path, detect_vector_format(np.path), np.name, &load_stats));
  }
  std::vector<EmbeddingTable> def_tables;
  std::vector<const LoadedSource*> def_table_sources;
  for (const std::string& spec : args.def_vec_specs) {
    const NamedPath np = parse_named_path(spec, "--def-vectors");
    const auto it = std::find_if(sources.begin(), sources.end(),
                                 [&](const LoadedSource& s) { return s.id.name == np.name; });
    if (it == sources.end()) {
      throw ConfigError("--def-vectors name '" + np.name +
                        "' does not match any --dict/--gen source");
    }
    def_tables.push_back(
        load_vectors(np.path, detect_vector_format(np.path), np.name, &load_stats));
    def_table_sources.push_back(&*it);
  }

  if (do_distance && def_tables.size() < 2) {
    throw ConfigError("the distance stage needs --def-vectors for at least two sources");
  }
  if (do_consistency && (def_tables.empty() || word_tables.empty())) {
    throw ConfigError(
        "the consistency stage needs --word-vectors and at least one --def-vectors");
  }

  ensure_out_dir(args.out_dir);
  for (const std::string& warning : load_stats.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  json summary{{"vocabulary_size", vocabulary.size()},
               {"sampled_entries", entries.size()},
               {"kind", to_string(kind)}};
  json source_info = json::object();
  for (const LoadedSource& s : sources) {
    source_info[s.id.name] = {{"records", s.defs.size()},
                              {"dropped_empty", s.defs.dropped_empty()},
                              {"merged_senses", s.defs.merged_senses()},
                              {"kind", s.id.kind == SourceKind::GeneratedModel
                                           ? "generated"
                                           : "dictionary"},
                              {"prompt_type", s.id.prompt_type}};
  }
  summary["sources"] = source_info;

  if (do_surface) {
    for (const LengthUnit unit : {LengthUnit::Chars, LengthUnit::Tokens}) {
      LengthSummary ls;
      ls.unit = unit;
      for (const LoadedSource& s : sources) {
        ls.rows.push_back({s.id.name, length_stats(s.defs, unit)});
      }
      const std::string stem = std::string("length_summary_") + to_string(unit);
      emit(ls, EmitFormat::Csv, args.out_dir / (stem + ".csv"));
      emit(ls, EmitFormat::Json, args.out_dir / (stem + ".json"));
    }

    std::vector<MatchHistogram> histograms;
    json pair_stats = json::object();
    for (std::size_t i = 0; i < sources.size(); ++i) {
      for (std::size_t j = i + 1; j < sources.size(); ++j) {
        MatchHistogram h = match_histogram(sources[i].defs, sources[j].defs, vocabulary,
                                           args.min_match_words);
        const std::string stem = "hist_" + pair_stem(h.source_a, h.source_b);
        emit(h, EmitFormat::PlotSeries, args.out_dir / (stem + ".csv"));
        emit(h, EmitFormat::Json, args.out_dir / (stem + ".json"));

        double mean_edit = 0.0;
        std::size_t edit_n = 0;
        for (const std::string& word : vocabulary) {
          const DefinitionRecord* ra = sources[i].defs.find(word);
          const DefinitionRecord* rb = sources[j].defs.find(word);
          if (!ra || !rb) continue;
          mean_edit += norm_edit_distance(ra->norm_text, rb->norm_text);
          ++edit_n;
        }
        json stats{{"mean_word_count", h.mean_word_count},
                   {"long_match_count", h.long_match_count},
                   {"long_match_threshold", h.long_match_threshold},
                   {"compared", h.compared},
                   {"skipped", h.skipped}};
        stats["mean_norm_edit_distance"] =
            edit_n == 0 ? json() : json(mean_edit / static_cast<double>(edit_n));
        for (const LengthUnit unit : {LengthUnit::Chars, LengthUnit::Tokens}) {
          const std::string key = std::string("length_correlation_") + to_string(unit);
          try {
            stats[key] = length_correlation(sources[i].defs, sources[j].defs, unit);
          } catch (const Error&) {
            stats[key] = nullptr;  // undefined: too few shared words or constant lengths
          }
        }
        pair_stats[pair_stem(h.source_a, h.source_b)] = stats;
        histograms.push_back(std::move(h));
      }
    }
    summary["surface_pairs"] = pair_stats;

    std::vector<const MatchHistogram*> hist_ptrs;
    for (const MatchHistogram& h : histograms) hist_ptrs.push_back(&h);
    const AveragedHistogram avg = average_histograms(hist_ptrs, "all_pairs");
    emit(avg, EmitFormat::Csv, args.out_dir / "hist_average.csv");
    emit(avg, EmitFormat::Json, args.out_dir / "hist_average.json");
  }

  if (do_distance) {
    std::map<std::pair<std::size_t, std::size_t>, PairDistanceTable> tables;
    json matrix_means = json::object();
    for (std::size_t i = 0; i < def_tables.size(); ++i) {
      for (std::size_t j = i + 1; j < def_tables.size(); ++j) {
        PairDistanceTable t = pair_distances(def_tables[i], def_tables[j], vocabulary, kind);
        t.source_a = def_table_sources[i]->id;
        t.source_b = def_table_sources[j]->id;
        const std::string stem = "dist_" + pair_stem(t.source_a.name, t.source_b.name);
        emit(t, EmitFormat::Csv, args.out_dir / (stem + ".csv"));
        emit(t, EmitFormat::Json, args.out_dir / (stem + ".json"));
        tables.emplace(std::make_pair(i, j), std::move(t));
      }
    }

    // Mean-distance matrix across every source pair.
    {
      std::string csv = "source";
      for (const auto& t : def_tables) csv += "," + csv_escape(t.space_name());
      csv += "\n";
      for (std::size_t i = 0; i < def_tables.size(); ++i) {
        csv += csv_escape(def_tables[i].space_name());
        for (std::size_t j = 0; j < def_tables.size(); ++j) {
          csv += ",";
          if (i == j) {
            csv += "0.00";
            continue;
          }
          const auto key = std::make_pair(std::min(i, j), std::max(i, j));
          const PairDistanceTable& t = tables.at(key);
          if (!t.entries.empty()) {
            csv += format_fixed(t.mean(), 2);
            matrix_means[pair_stem(def_tables[key.first].space_name(),
                                   def_tables[key.second].space_name())] = t.mean();
          }
        }
        csv += "\n";
      }
      write_file(args.out_dir / "distance_matrix.csv", csv);
      defalign::write_file(args.out_dir / "distance_matrix.json",
                           json{{"kind", to_string(kind)}, {"means", matrix_means}}.dump(2) +
                               "\n");
    }

    // Table-III-shaped strata over model x dictionary pairs.
    std::vector<StratumTable> tier_tables;
    std::vector<StratumTable> pos_tables;
    for (std::size_t i = 0; i < def_tables.size(); ++i) {
      for (std::size_t j = 0; j < def_tables.size(); ++j) {
        if (def_table_sources[i]->id.kind != SourceKind::GeneratedModel) continue;
        if (def_table_sources[j]->id.kind != SourceKind::PublishedDictionary) continue;
        const auto key = std::make_pair(std::min(i, j), std::max(i, j));
        PairDistanceTable t = tables.at(key);
        t.source_a = def_table_sources[i]->id;  // model first; distances are symmetric
        t.source_b = def_table_sources[j]->id;
        tier_tables.push_back(stratify(t, vocab_entries, StratifyBy::Tier));
        pos_tables.push_back(stratify(t, vocab_entries, StratifyBy::Pos));
      }
    }
    if (!tier_tables.empty()) {
      const StratumTable merged_tier = merge_stratum_tables(tier_tables);
      emit(merged_tier, EmitFormat::Csv, args.out_dir / "strata_tier.csv");
      emit(merged_tier, EmitFormat::Json, args.out_dir / "strata_tier.json");
      const StratumTable merged_pos = merge_stratum_tables(pos_tables);
      emit(merged_pos, EmitFormat::Csv, args.out_dir / "strata_pos.csv");
      emit(merged_pos, EmitFormat::Json, args.out_dir / "strata_pos.json");
    }

    // Review worksheets use Euclidean distance regardless of --kind.
    for (std::size_t i = 0; i < def_tables.size(); ++i) {
      for (std::size_t j = 0; j < def_tables.size(); ++j) {
        if (def_table_sources[i]->id.kind != SourceKind::GeneratedModel) continue;
        if (def_table_sources[j]->id.kind != SourceKind::PublishedDictionary) continue;
        PairDistanceTable t =
            kind == DistanceKind::Euclidean
                ? tables.at(std::make_pair(std::min(i, j), std::max(i, j)))
                : pair_distances(def_tables[std::min(i, j)], def_tables[std::max(i, j)],
                                 vocabulary, DistanceKind::Euclidean);
        t.source_a = def_table_sources[i]->id;
        t.source_b = def_table_sources[j]->id;
        const std::size_t k = std::min(args.top_k, t.entries.size());
        const OutlierWorksheet sheet = make_outlier_worksheet(
            t, k, def_table_sources[i]->defs, def_table_sources[j]->defs);
        const std::string stem = "outliers_" + pair_stem(t.source_a.name, t.source_b.name);
        emit(sheet, EmitFormat::Csv, args.out_dir / (stem + ".csv"));
        emit(sheet, EmitFormat::Json, args.out_dir / (stem + ".json"));
      }
    }
  }

  if (do_consistency) {
    std::vector<const EmbeddingTable*> def_ptrs;
    std::vector<const EmbeddingTable*> word_ptrs;
    for (const EmbeddingTable& t : def_tables) def_ptrs.push_back(&t);
    for (const EmbeddingTable& t : word_tables) word_ptrs.push_back(&t);

    const auto reports =
        consistency_reports(def_ptrs, word_ptrs, vocab_entries, kind, args.jobs);
    const ConsistencyGrid grid = grid_from_reports(reports, def_ptrs, word_ptrs, kind);
    emit(grid, EmitFormat::Csv, args.out_dir / "consistency_grid.csv");
    emit(grid, EmitFormat::Json, args.out_dir / "consistency_grid.json");

    json observations = json::object();
    for (std::size_t s = 0; s < def_ptrs.size(); ++s) {
      for (std::size_t w = 0; w < word_ptrs.size(); ++w) {
        const ConsistencyReport& rep = reports[s][w];
        const std::string stem =
            "consistency_" + rep.space_def + "_in_" + rep.space_word;
        emit(rep, EmitFormat::Csv, args.out_dir / (stem + ".csv"));
        emit(rep, EmitFormat::Json, args.out_dir / (stem + ".json"));

        const auto hi = rep.tier_means.find(Tier::High);
        const auto lo = rep.tier_means.find(Tier::Low);
        json obs{{"mean_r", rep.mean_r}, {"coverage", rep.coverage}};
        obs["high_tier_exceeds_low"] =
            (hi != rep.tier_means.end() && lo != rep.tier_means.end())
                ? json(hi->second.first > lo->second.first)
                : json();
        observations[rep.space_def + "_in_" + rep.space_word] = obs;
      }
    }
    summary["consistency_observations"] = observations;
  }

  write_file(args.out_dir / "analysis_summary.json", summary.dump(2) + "\n");

  json config{{"vocab", args.vocab_path.string()},
              {"dict", args.dict_specs},
              {"gen", args.gen_specs},
              {"word_vectors", args.word_vec_specs},
              {"def_vectors", args.def_vec_specs},
              {"kind", args.kind_name},
              {"only", args.only},
              {"top_k", args.top_k},
              {"min_match_words", args.min_match_words},
              {"jobs", args.jobs}};
  std::vector<fs::path> inputs{args.vocab_path};
  for (const LoadedSource& s : sources) inputs.push_back(s.path);
  for (const std::string& spec : args.word_vec_specs) {
    inputs.push_back(parse_named_path(spec, "--word-vectors").path);
  }
  for (const std::string& spec : args.def_vec_specs) {
    inputs.push_back(parse_named_path(spec, "--def-vectors").path);
  }
  write_manifest(args.out_dir / "manifest.json", "analyze", config, inputs);

  std::cout << "analyzed " << vocabulary.size() << " words across " << sources.size()
            << " sources into " << args.out_dir.string() << "\n";
}

// ---------------------------------------------------------------------------
// report (render an analyze bundle as plain text)

void run_report(const fs::path& bundle, const fs::path& out_file) {
  const auto load = [&](const char* name) -> std::optional<json> {
    std::ifstream in(bundle / name);
    if (!in) return std::nullopt;
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw defalign::ParseError((bundle / name).string() + ": " + e.what());
    }
  };

  const auto summary = load("analysis_summary.json");
  if (!summary) {
    throw defalign::IoError((bundle / "analysis_summary.json").string(),
                            "not found; is this an analyze output directory?");
  }

  std::string text;
  text += "definition alignment report\n";
  text += "===========================\n\n";
  text += "vocabulary: " + std::to_string((*summary)["vocabulary_size"].get<std::size_t>()) +
          " words (of " + std::to_string((*summary)["sampled_entries"].get<std::size_t>()) +
          " sampled)\n";
  text += "distance kind: " + (*summary)["kind"].get<std::string>() + "\n\n";

  text += "sources\n-------\n";
  for (const auto& [name, info] : (*summary)["sources"].items()) {
    text += "  " + name + ": " + std::to_string(info["records"].get<std::size_t>()) +
            " definitions";
    if (info["dropped_empty"].get<std::size_t>() > 0) {
      text += ", " + std::to_string(info["dropped_empty"].get<std::size_t>()) + " empty dropped";
    }
    if (info["merged_senses"].get<std::size_t>() > 0) {
      text += ", " + std::to_string(info["merged_senses"].get<std::size_t>()) + " senses merged";
    }
    text += "\n";
  }
  text += "\n";

  for (const char* unit : {"chars", "tokens"}) {
    if (const auto ls = load((std::string("length_summary_") + unit + ".json").c_str())) {
      text += "definition length (" + std::string(unit) + ")\n";
      text += "  source: n / mean / min / max / std\n";
      for (const auto& row : (*ls)["rows"]) {
        text += "  " + row["source"].get<std::string>() + ": " +
                std::to_string(row["n"].get<std::size_t>()) + " / " +
                defalign::format_fixed(row["mean"].get<double>(), 2) + " / " +
                std::to_string(row["min"].get<std::size_t>()) + " / " +
                std::to_string(row["max"].get<std::size_t>()) + " / " +
                defalign::format_fixed(row["std"].get<double>(), 2) + "\n";
      }
      text += "\n";
    }
  }

  if (summary->contains("surface_pairs")) {
    text += "surface matches\n---------------\n";
    for (const auto& [pair, stats] : (*summary)["surface_pairs"].items()) {
      text += "  " + pair + ": mean matched words " +
              defalign::format_fixed(stats["mean_word_count"].get<double>(), 2) + ", " +
              std::to_string(stats["long_match_count"].get<std::size_t>()) + " matches >= " +
              std::to_string(stats["long_match_threshold"].get<std::size_t>()) + " words";
      if (!stats["mean_norm_edit_distance"].is_null()) {
        text += ", mean normalized edit distance " +
                defalign::format_fixed(stats["mean_norm_edit_distance"].get<double>(), 3);
      }
      text += "\n";
    }
    text += "\n";
  }

  if (const auto strata = load("strata_tier.json")) {
    text += "mean distance by tier\n";
    text += "  model/stratum";
    for (const auto& col : (*strata)["columns"]) text += "  " + col.get<std::string>();
    text += "\n";
    for (const auto& row : (*strata)["rows"]) {
      text += "  " + row["model"].get<std::string>() + "/" + row["stratum"].get<std::string>();
      for (const auto& cell : row["cells"]) {
        text += cell.is_null() ? "  -" : "  " + defalign::format_fixed(cell["mean"].get<double>(), 2);
        if (!cell.is_null() && cell["is_min"].get<bool>()) text += "*";
      }
      text += "\n";
    }
    text += "  (* lowest mean in its column for that model)\n\n";
  }

  if (const auto grid = load("consistency_grid.json")) {
    text += "space consistency (mean per-word r)\n";
    text += "  source/tier";
    for (const auto& space : (*grid)["spaces"]) text += "  " + space.get<std::string>();
    text += "\n";
    for (const auto& row : (*grid)["rows"]) {
      text += "  " + row["source"].get<std::string>() + "/" + row["tier"].get<std::string>();
      for (const auto& cell : row["cells"]) {
        text += cell.is_null() ? "  -"
                               : "  " + defalign::format_fixed(cell["mean_r"].get<double>(), 2);
      }
      text += "\n";
    }
    text += "\n";
  }

  if (summary->contains("consistency_observations")) {
    text += "observations\n------------\n";
    for (const auto& [pair, obs] : (*summary)["consistency_observations"].items()) {
      text += "  " + pair + ": mean r " +
              defalign::format_fixed(obs["mean_r"].get<double>(), 3);
      if (!obs["high_tier_exceeds_low"].is_null()) {
        text += obs["high_tier_exceeds_low"].get<bool>()
                    ? "; high tier above low tier"
                    : "; high tier NOT above low tier";
      }
      text += "\n";
    }
  }

  if (out_file.empty()) {
    std::cout << text;
  } else {
    defalign::write_file(out_file, text);
    std::cout << "wrote " << out_file.string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"definition alignment toolkit"};
  app.set_config("--config", "", "key=value config file mirroring the flags");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(defalign::kToolName) + " " +
                                        defalign::kToolVersion);

  // sample
  auto* sample = app.add_subcommand("sample", "sample a frequency lexicon into tiers");
  fs::path sample_lexicon;
  std::optional<fs::path> sample_pos;
  fs::path sample_out;
  std::string top_spec;
  std::string mid_spec;
  std::string low_spec;
  sample->add_option("--lexicon", sample_lexicon, "frequency list: word or word<TAB>count")
      ->required();
  fs::path sample_pos_raw;
  auto* pos_opt = sample->add_option("--pos", sample_pos_raw, "word<TAB>TAG annotations");
  sample->add_option("--out", sample_out, "output directory")->required();
  sample->add_option("--top", top_spec, "high-tier window: 'N' or 'a-b'");
  sample->add_option("--mid", mid_spec, "medium-tier windows, comma-separated 'a-b'");
  sample->add_option("--low", low_spec, "low-tier windows, comma-separated 'a-b'");

  // fetch
  auto* fetch = app.add_subcommand("fetch", "fetch generated definitions over HTTP");
  fs::path fetch_words;
  fs::path fetch_out;
  ClientFlags fetch_client;
  fetch->add_option("--words", fetch_words, "sampled lexicon TSV or plain word list")
      ->required();
  fetch->add_option("--out", fetch_out, "output JSONL file")->required();
  fetch_client.attach(fetch, true);

  // embed
  auto* embed = app.add_subcommand("embed", "embed definition texts over HTTP");
  fs::path embed_defs;
  std::string embed_source;
  fs::path embed_out;
  ClientFlags embed_client;
  embed->add_option("--defs", embed_defs, "definitions JSONL to embed")->required();
  embed->add_option("--source", embed_source, "source name label for the vectors")->required();
  embed->add_option("--out", embed_out, "output vector file (headered text)")->required();
  embed_client.attach(embed, false);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "run the full alignment analysis");
  AnalyzeArgs aa;
  analyze->add_option("--vocab", aa.vocab_path, "sampled lexicon TSV")->required();
  analyze->add_option("--dict", aa.dict_specs, "dictionary source NAME=JSONL (repeatable)");
  analyze->add_option("--gen", aa.gen_specs,
                      "generated source NAME=JSONL; trailing -1/-2 gives the prompt type");
  analyze->add_option("--word-vectors", aa.word_vec_specs,
                      "word-embedding space NAME=VECFILE (repeatable)");
  analyze->add_option("--def-vectors", aa.def_vec_specs,
                      "definition-embedding vectors SOURCE=VECFILE (repeatable)");
  analyze->add_option("--kind", aa.kind_name, "distance kind: cosine or euclidean")
      ->check(CLI::IsMember({"cosine", "euclidean"}));
  analyze->add_option("--only", aa.only,
                      "run only these stages: surface, distance, consistency (repeatable)");
  analyze->add_option("--top-k", aa.top_k, "outlier worksheet size (default 50)");
  analyze->add_option("--min-match-words", aa.min_match_words,
                      "long-match threshold in words (default 5)");
  analyze->add_option("--jobs", aa.jobs, "worker threads for consistency")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--out", aa.out_dir, "output directory")->required();

  // report
  auto* report = app.add_subcommand("report", "render an analyze bundle as text");
  fs::path report_bundle;
  fs::path report_out;
  report->add_option("--bundle", report_bundle, "analyze output directory")->required();
  report->add_option("--out", report_out, "write the text here instead of stdout");

  // synth
  auto* synth = app.add_subcommand("synth", "write a deterministic synthetic corpus");
  defalign::SynthSpec synth_spec;
  fs::path synth_out;
  std::size_t synth_lexicon_only = 0;
  synth->add_option("--out", synth_out, "output directory (or file with --lexicon-only)")
      ->required();
  synth->add_option("--seed", synth_spec.seed, "RNG seed (default 7)");
  synth->add_option("--words", synth_spec.word_count, "corpus size (default 60)");
  synth->add_option("--word-dim", synth_spec.word_dim, "word-vector dimension");
  synth->add_option("--def-dim", synth_spec.def_dim, "definition-vector dimension");
  synth->add_option("--lexicon-only", synth_lexicon_only,
                    "write only a frequency list with this many words");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(defalign::ErrorClass::Config);
  }

  try {
    if (sample->parsed()) {
      defalign::TierConfig config = defalign::TierConfig::defaults();
      if (!top_spec.empty() || !mid_spec.empty() || !low_spec.empty()) {
        if (top_spec.empty()) {
          throw ConfigError("custom windows need --top alongside --mid/--low");
        }
        config.top_window = parse_interval(top_spec);
        config.mid_windows =
            mid_spec.empty() ? std::vector<defalign::RankInterval>{} : parse_intervals(mid_spec);
        config.low_windows =
            low_spec.empty() ? std::vector<defalign::RankInterval>{} : parse_intervals(low_spec);
      }
      if (pos_opt->count() > 0) sample_pos = sample_pos_raw;

      const auto lexicon = defalign::load_lexicon(sample_lexicon);
      auto entries = defalign::sample_tiers(lexicon, config);
      defalign::assign_pos(entries, sample_pos);
      ensure_out_dir(sample_out);
      defalign::save_entries(entries, sample_out / "lexicon.tsv");

      json config_json{{"top", config.top_window.label()}};
      json mids = json::array();
      for (const auto& w : config.mid_windows) mids.push_back(w.label());
      json lows = json::array();
      for (const auto& w : config.low_windows) lows.push_back(w.label());
      config_json["mid"] = mids;
      config_json["low"] = lows;
      std::vector<fs::path> inputs{sample_lexicon};
      if (sample_pos) inputs.push_back(*sample_pos);
      write_manifest(sample_out / "manifest.json", "sample", config_json, inputs);
      std::cout << "sampled " << entries.size() << " words into "
                << (sample_out / "lexicon.tsv").string() << "\n";
    } else if (fetch->parsed()) {
      fetch_client.config.prompt_type = fetch_client.prompt == 2
                                            ? defalign::PromptType::Type2
                                            : defalign::PromptType::Type1;
      const auto words = read_word_list(fetch_words);
      defalign::NetClient client(fetch_client.config);

      if (fetch_out.has_parent_path()) ensure_out_dir(fetch_out.parent_path());
      std::ofstream out(fetch_out, std::ios::binary);
      if (!out) throw defalign::IoError(fetch_out.string(), "cannot open for writing");
      std::size_t fetched = 0;
      for (const std::string& word : words) {
        const defalign::DefinitionRecord rec = client.fetch_definition(word);
        out << json{{"word", rec.word}, {"definition", rec.text}}.dump() << '\n';
        ++fetched;
      }
      out.flush();
      if (!out) throw defalign::IoError(fetch_out.string(), "write failure");

      json config_json{{"model", fetch_client.config.model_name},
                       {"prompt", fetch_client.prompt},
                       {"rpm", fetch_client.config.requests_per_minute},
                       {"max_retries", fetch_client.config.max_retries},
                       {"offline", fetch_client.config.offline}};
      write_manifest(fs::path(fetch_out.string() + ".manifest.json"), "fetch", config_json,
                     {fetch_words});
      std::cout << "fetched " << fetched << " definitions (" << client.network_hits()
                << " network requests) into " << fetch_out.string() << "\n";
    } else if (embed->parsed()) {
      defalign::SourceId id;
      id.name = embed_source;
      id.kind = defalign::SourceKind::GeneratedModel;
      id.prompt_type = prompt_from_name(embed_source);
      const defalign::DefinitionSet defs = defalign::load_definitions(embed_defs, id);
      if (defs.size() == 0) {
        throw defalign::InsufficientDataError(embed_defs.string() + ": no definitions to embed");
      }

      defalign::NetClient client(embed_client.config);
      defalign::EmbedRequest req;
      req.space_name = embed_source;
      for (const auto& rec : defs.records()) req.texts.push_back(rec.text);
      const auto vectors = client.embed_texts(req);

      defalign::EmbeddingTable table(embed_source,
                                     static_cast<Eigen::Index>(vectors.front().size()));
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        table.insert(defs.records()[i].word, vectors[i]);
      }
      if (embed_out.has_parent_path()) ensure_out_dir(embed_out.parent_path());
      defalign::save_vectors(table, embed_out, defalign::VectorFileFormat::HeaderedText);

      json config_json{{"model", embed_client.config.model_name},
                       {"source", embed_source},
                       {"max_batch", embed_client.config.max_batch},
                       {"offline", embed_client.config.offline}};
      write_manifest(fs::path(embed_out.string() + ".manifest.json"), "embed", config_json,
                     {embed_defs});
      std::cout << "embedded " << table.size() << " definitions (" << client.network_hits()
                << " network requests) into " << embed_out.string() << "\n";
    } else if (analyze->parsed()) {
      run_analyze(aa);
    } else if (report->parsed()) {
      run_report(report_bundle, report_out);
    } else if (synth->parsed()) {
      if (synth_lexicon_only > 0) {
        if (synth_out.has_parent_path()) ensure_out_dir(synth_out.parent_path());
        defalign::write_synth_lexicon(synth_out, synth_lexicon_only, synth_spec.seed);
        std::cout << "wrote " << synth_lexicon_only << "-word lexicon to "
                  << synth_out.string() << "\n";
      } else {
        defalign::write_synth_corpus(synth_out, synth_spec);
        json config_json{{"seed", synth_spec.seed},
                         {"words", synth_spec.word_count},
                         {"word_dim", synth_spec.word_dim},
                         {"def_dim", synth_spec.def_dim}};
        write_manifest(synth_out / "manifest.json", "synth", config_json, {},
                       synth_spec.seed);
        std::cout << "wrote synthetic corpus to " << synth_out.string() << "\n";
      }
    }
  } catch (const defalign::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
