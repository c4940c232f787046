#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "strew/errors.hpp"
#include "strew/system.hpp"
#include "strew/word.hpp"

namespace strew {

enum class StrategyKind { kLeftmost, kRightmost, kRandom };

/// Redex selection order. Confluent systems produce the same normal form
/// under every strategy; exposing several lets tests check that instead of
/// assuming it.
struct Strategy {
  StrategyKind kind = StrategyKind::kLeftmost;
  std::uint64_t seed = 0;

  static Strategy leftmost() { return {StrategyKind::kLeftmost, 0}; }
  static Strategy rightmost() { return {StrategyKind::kRightmost, 0}; }
  static Strategy random(std::uint64_t seed) {
    return {StrategyKind::kRandom, seed};
  }
};

struct ReductionStep {
  std::size_t position = 0;
  std::size_t rule_index = 0;
  Word before;
  Word after;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  Word result;
};

/// Leftmost, lowest-rule-index redex, if any.
inline std::optional<PatternAutomaton::Redex> find_redex(
    const RewritingSystem& sys, const Word& w) {
  return sys.automaton().leftmost(w);
}

inline bool is_reducible(const RewritingSystem& sys, const Word& w) {
  return find_redex(sys, w).has_value();
}

/// Replace the lhs occurrence of `rule` at `pos` with its rhs.
inline Word apply_rule_at(const RewritingSystem& sys, const Word& w,
                          std::size_t pos, std::size_t rule) {
  const Rule& r = sys.rules()[rule];
  std::vector<Letter> out;
  out.reserve(w.size() - r.lhs.size() + r.rhs.size());
  out.insert(out.end(), w.begin(), w.begin() + pos);
  out.insert(out.end(), r.rhs.begin(), r.rhs.end());
  out.insert(out.end(), w.begin() + pos + r.lhs.size(), w.end());
  return Word(std::move(out));
}

namespace detail {

inline void check_termination_or_budget(const RewritingSystem& sys,
                                        const std::optional<std::size_t>& b) {
  if (!sys.flags().length_reducing && !b) throw NonTerminatingRiskError();
}

}  // namespace detail

/// Normal form under the leftmost strategy, without trace bookkeeping.
/// This is the hot path for the ball/oracle modules. After a replacement
/// at position p, no new redex can start before p - max_lhs + 1, so the
/// scan resumes there instead of at 0.
inline Word normal_form(const RewritingSystem& sys, const Word& w,
                        std::optional<std::size_t> step_budget = {}) {
  detail::check_termination_or_budget(sys, step_budget);
  Word cur = w;
  std::size_t scan_from = 0;
  std::size_t steps = 0;
  const std::size_t max_lhs = sys.max_lhs_length();
  for (;;) {
    auto redex = sys.automaton().leftmost(cur, scan_from);
    if (!redex) return cur;
    if (step_budget && steps >= *step_budget)
      throw BudgetExceededError("reduction step budget exhausted");
    cur = apply_rule_at(sys, cur, redex->pos, redex->rule);
    ++steps;
    scan_from = redex->pos + 1 >= max_lhs ? redex->pos + 1 - max_lhs : 0;
  }
}

/// Full reduction with a per-step trace. For non-length-reducing systems an
/// explicit step budget is required.
inline ReductionTrace reduce(const RewritingSystem& sys, const Word& w,
                             Strategy strategy = Strategy::leftmost(),
                             std::optional<std::size_t> step_budget = {}) {
  detail::check_termination_or_budget(sys, step_budget);
  ReductionTrace trace;
  Word cur = w;
  std::mt19937_64 rng(strategy.seed);
  std::size_t steps = 0;
  for (;;) {
    std::optional<PatternAutomaton::Redex> redex;
    switch (strategy.kind) {
      case StrategyKind::kLeftmost:
        redex = sys.automaton().leftmost(cur);
        break;
      case StrategyKind::kRightmost:
        redex = sys.automaton().rightmost(cur);
        break;
      case StrategyKind::kRandom: {
        auto all = sys.automaton().collect(cur);
        if (!all.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
          redex = all[pick(rng)];
        }
        break;
      }
    }
    if (!redex) break;
    if (step_budget && steps >= *step_budget)
      throw BudgetExceededError("reduction step budget exhausted");
    Word next = apply_rule_at(sys, cur, redex->pos, redex->rule);
    trace.steps.push_back({redex->pos, redex->rule, cur, next});
    cur = std::move(next);
    ++steps;
  }
  trace.result = cur;
  return trace;
}

/// All irreducible words of length <= max_len, in shortlex order. A word
/// extension w+x is irreducible iff w is and no lhs is a suffix of w+x.
inline std::vector<Word> irreducible_words(const RewritingSystem& sys,
                                           std::size_t max_len) {
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  if (is_reducible(sys, Word{})) return out;  // cannot happen: lhs nonempty
  out.push_back(Word{});
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next_layer;
    for (const Word& w : layer) {
      for (std::size_t i = 0; i < sys.alphabet().size(); ++i) {
        Word ext = w + sys.alphabet().letter(i);
        bool reducible = false;
        for (const Rule& r : sys.rules()) {
          if (r.lhs.size() <= ext.size() &&
              ext.contains_at(r.lhs, ext.size() - r.lhs.size())) {
            reducible = true;
            break;
          }
        }
        if (!reducible) next_layer.push_back(std::move(ext));
      }
    }
    out.insert(out.end(), next_layer.begin(), next_layer.end());
    layer = std::move(next_layer);
    if (layer.empty()) break;
  }
  return out;
}

}  // namespace strew
