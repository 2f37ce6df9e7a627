#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace defalign {

// Deterministic synthetic corpus for tests and demos. Uses splitmix64 under
// the hood, so output is identical across platforms and standard libraries.
struct SynthSpec {
  std::uint64_t seed = 7;
  int word_count = 60;
  int word_dim = 10;
  int def_dim = 8;
};

// Writes into out_dir:
//   lexicon.txt                frequency list, word + count per line
//   pos.tsv                    part-of-speech tags for roughly half the words
//   defs_dicta.jsonl           dictionary-style definitions (full coverage)
//   defs_dictb.jsonl           second dictionary (coverage gaps, multi-sense)
//   defs_genx-1.jsonl          generated definitions, prompt type 1
//   defs_genx-2.jsonl          generated definitions, prompt type 2 (gaps,
//                              a few empty texts, some spans borrowed from
//                              dicta so surface matches are nontrivial)
//   wvec_alpha.vec             word vectors, plain text, word_dim dims
//   wvec_beta.vec              word vectors, headered text, word_dim dims
//   defvec_<source>.vec        one definition-vector file per source above,
//                              headered text, def_dim dims
void write_synth_corpus(const std::filesystem::path& out_dir, const SynthSpec& spec);

// Frequency list alone (word<TAB>count, counts strictly decreasing), for
// sampling tests at realistic scale. Supports up to 64,000 distinct words.
void write_synth_lexicon(const std::filesystem::path& path, std::size_t word_count,
                         std::uint64_t seed);

}  // namespace defalign

namespace defalign::detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0, n) without modulo bias for the n we use (n << 2^64).
inline std::uint64_t bounded(std::uint64_t& state, std::uint64_t n) {
  return splitmix64(state) % n;
}

// Uniform double in [lo, hi).
inline double uniform(std::uint64_t& state, double lo, double hi) {
  const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

}  // namespace defalign::detail
