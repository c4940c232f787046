#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "strew/confluence.hpp"
#include "strew/errors.hpp"
#include "strew/group_analysis.hpp"
#include "strew/normalization.hpp"
#include "strew/system.hpp"

namespace strew {

struct SamplerConfig {
  std::size_t alphabet_size = 2;
  std::size_t max_rules = 3;
  std::size_t max_lhs_len = 3;
  bool allow_special_only = false;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic in the seed. The output is monadic and length-reducing by
/// construction (lhs length >= 2, rhs a letter or empty) and no two rules
/// share a left-hand side.
inline RewritingSystem sample_system(const SamplerConfig& cfg) {
  if (cfg.alphabet_size < 1 || cfg.alphabet_size > 26 || cfg.max_rules < 1 ||
      cfg.max_lhs_len < 1)
    throw Error("sampler config out of range");
  std::mt19937_64 rng(cfg.seed);

  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < cfg.alphabet_size; ++i)
    symbols.push_back(std::string(1, static_cast<char>('a' + i)));
  Alphabet alphabet(symbols);

  std::uniform_int_distribution<std::size_t> rule_count(1, cfg.max_rules);
  std::size_t want = rule_count(rng);
  std::size_t lhs_max = std::max<std::size_t>(2, cfg.max_lhs_len);
  std::uniform_int_distribution<std::size_t> lhs_len(2, lhs_max);
  std::uniform_int_distribution<std::size_t> pick_letter(
      0, cfg.alphabet_size - 1);
  // rhs: empty or one letter.
  std::uniform_int_distribution<std::size_t> pick_rhs(0, cfg.alphabet_size);

  std::vector<Rule> rules;
  std::set<Word> used_lhs;
  for (std::size_t attempt = 0;
       attempt < 100 * cfg.max_rules && rules.size() < want; ++attempt) {
    std::vector<Letter> lhs;
    std::size_t len = lhs_len(rng);
    for (std::size_t i = 0; i < len; ++i)
      lhs.push_back(alphabet.letter(pick_letter(rng)));
    Word lhs_word(std::move(lhs));
    Word rhs_word;
    if (!cfg.allow_special_only) {
      std::size_t r = pick_rhs(rng);
      if (r > 0) rhs_word = Word::single(alphabet.letter(r - 1));
    }
    if (!used_lhs.insert(lhs_word).second) continue;
    rules.push_back({std::move(lhs_word), std::move(rhs_word)});
  }
  return RewritingSystem(std::move(alphabet), std::move(rules));
}

struct SampleStats {
  std::size_t attempts = 0;
  std::size_t found = 0;
};

/// Rejection-sample systems that are confluent and present a group
/// (verified on the normalized form). Returns up to `want` systems; fewer
/// if `budget` attempts run out. Deterministic in cfg.seed.
inline std::pair<std::vector<RewritingSystem>, SampleStats>
sample_group_systems(const SamplerConfig& cfg, std::size_t want,
                     std::size_t budget, std::size_t inverse_bound = 6) {
  std::vector<RewritingSystem> out;
  SampleStats stats;
  for (std::uint64_t i = 0; i < budget && out.size() < want; ++i) {
    ++stats.attempts;
    SamplerConfig attempt = cfg;
    attempt.seed = detail::splitmix64(cfg.seed ^ i);
    RewritingSystem sys = sample_system(attempt);
    if (!strew::detail::group_possible(sys)) continue;
    if (!is_confluent(sys).confluent) continue;
    try {
      NormalizationResult norm = normalize(sys);
      if (!strew::detail::group_possible(norm.system)) continue;
      if (!strew::detail::find_letter_inverses(norm.system, inverse_bound,
                                               2'000))
        continue;
    } catch (const NormalizationFailedError&) {
      continue;
    }
    out.push_back(std::move(sys));
    ++stats.found;
  }
  return {std::move(out), stats};
}

}  // namespace strew
