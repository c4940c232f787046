#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "strew/confluence.hpp"
#include "strew/errors.hpp"
#include "strew/io.hpp"
#include "strew/rewrite.hpp"
#include "strew/system.hpp"

namespace strew {

/// Result of rewriting a monadic convergent system into normalized form
/// (every lhs of length >= 2 with all proper subwords irreducible), plus
/// the generator relabeling that witnesses the monoid isomorphism.
struct NormalizationResult {
  RewritingSystem system;
  /// Image of each original letter, as a word over the result alphabet
  /// (length 0 or 1: eliminated letters map to their replacement).
  std::vector<Word> letter_map;
  std::vector<std::string> log;

  /// Translate a word over the original alphabet (no reduction applied).
  Word translate(const Word& w) const {
    Word out;
    for (Letter x : w) out.append(letter_map[x.id]);
    return out;
  }
};

namespace detail {

inline Word substitute(const Word& w, Letter x, const Word& repl) {
  Word out;
  for (Letter y : w) {
    if (y == x)
      out.append(repl);
    else
      out.append(y);
  }
  return out;
}

// Generous step budget for systems whose only non-length-reducing rules are
// letter renames: each step either shortens the word or lowers a letter in
// the (acyclic) rename order.
inline std::size_t rename_safe_budget(const RewritingSystem& sys,
                                      std::size_t word_len) {
  return 64 + 4 * word_len * (sys.alphabet().size() + 2);
}

}  // namespace detail

/// Normalize a finite convergent monadic system. Accepted rules are
/// length-reducing ones plus single-letter renames (x -> y); the rename
/// relation must be acyclic, which makes the system terminating. The
/// procedure: (1) drop no-op rules, (2) repeatedly eliminate unit rules
/// (|lhs| = 1) by substituting the rhs everywhere and deleting the letter,
/// (3) rewrite any lhs with a reducible proper subword, iterating to a
/// fixpoint, then (4) re-check confluence of the result. Each step
/// preserves the presented monoid; a non-confluent fixpoint is surfaced as
/// NormalizationFailedError rather than repaired.
inline NormalizationResult normalize(const RewritingSystem& input) {
  if (!input.flags().monadic) throw PreconditionError("monadic");
  for (const Rule& r : input.rules()) {
    bool rename = r.lhs.size() == 1 && r.rhs.size() == 1;
    if (r.rhs.size() >= r.lhs.size() && !rename && !(r.lhs == r.rhs))
      throw PreconditionError(
          "terminating", "rule is neither length-reducing nor a letter rename");
  }

  std::vector<std::string> log;

  // Rename acyclicity = termination for monadic systems.
  {
    std::vector<std::vector<std::size_t>> succ(input.alphabet().size());
    for (const Rule& r : input.rules())
      if (r.lhs.size() == 1 && r.rhs.size() == 1 && !(r.lhs == r.rhs))
        succ[r.lhs[0].id].push_back(r.rhs[0].id);
    std::vector<int> state(input.alphabet().size(), 0);
    auto dfs = [&](auto&& self, std::size_t v) -> bool {
      state[v] = 1;
      for (std::size_t w : succ[v]) {
        if (state[w] == 1) return false;
        if (state[w] == 0 && !self(self, w)) return false;
      }
      state[v] = 2;
      return true;
    };
    for (std::size_t v = 0; v < succ.size(); ++v)
      if (state[v] == 0 && !dfs(dfs, v))
        throw PreconditionError("terminating", "letter renames form a cycle");
  }

  if (input.flags().length_reducing) {
    if (!is_confluent(input).confluent) throw PreconditionError("confluent");
  } else {
    log.push_back(
        "confluence precondition deferred: input has letter renames; "
        "re-checked after unit elimination");
  }

  const std::size_t n = input.alphabet().size();
  std::vector<Rule> rules;
  for (const Rule& r : input.rules()) {
    if (r.lhs == r.rhs) {
      log.push_back("dropped no-op rule");
      continue;
    }
    if (std::find(rules.begin(), rules.end(), r) == rules.end())
      rules.push_back(r);
  }
  std::vector<bool> alive(n, true);
  std::vector<Word> letter_map;
  for (std::size_t i = 0; i < n; ++i)
    letter_map.push_back(Word::single(input.alphabet().letter(i)));

  auto cleanup = [&]() {
    std::vector<Rule> next;
    for (Rule& r : rules) {
      if (r.lhs == r.rhs) continue;
      if (r.lhs.size() < r.rhs.size()) std::swap(r.lhs, r.rhs);
      if (r.lhs.empty()) continue;  // both sides empty
      if (std::find(next.begin(), next.end(), r) == next.end())
        next.push_back(std::move(r));
    }
    rules = std::move(next);
  };
  cleanup();

  auto eliminate_units = [&]() {
    for (;;) {
      auto it = std::find_if(rules.begin(), rules.end(), [](const Rule& r) {
        return r.lhs.size() == 1;
      });
      if (it == rules.end()) return;
      Letter x = it->lhs[0];
      Word repl = it->rhs;  // a letter or the empty word (monadic)
      log.push_back("eliminated unit rule: " + input.alphabet().display(x) +
                    " -> " +
                    (repl.empty() ? std::string("(empty)")
                                  : input.alphabet().display(repl[0])));
      rules.erase(it);
      for (Rule& r : rules) {
        r.lhs = detail::substitute(r.lhs, x, repl);
        r.rhs = detail::substitute(r.rhs, x, repl);
      }
      for (Word& m : letter_map) m = detail::substitute(m, x, repl);
      alive[x.id] = false;
      cleanup();
    }
  };

  eliminate_units();

  // Fixpoint: rewrite any lhs containing another lhs as a proper subword.
  // All rules are length-reducing here, so each rewrite strictly shortens
  // the lhs and the loop terminates.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < rules.size() && !changed; ++i) {
      const Word& L = rules[i].lhs;
      for (std::size_t pos = 0; pos < L.size() && !changed; ++pos) {
        for (std::size_t j = 0; j < rules.size() && !changed; ++j) {
          const Word& pat = rules[j].lhs;
          if (pos == 0 && pat.size() == L.size()) continue;  // not proper
          if (!L.contains_at(pat, pos)) continue;
          Word next = L.prefix(pos) + rules[j].rhs +
                      L.subword(pos + pat.size(), L.size() - pos - pat.size());
          log.push_back("rewrote reducible lhs subword (rule " +
                        std::to_string(i) + " via rule " + std::to_string(j) +
                        ")");
          rules[i].lhs = std::move(next);
          cleanup();
          eliminate_units();
          changed = true;
        }
      }
    }
  }

  // Compact the alphabet and reindex.
  std::vector<std::string> symbols;
  std::vector<std::uint8_t> old_to_new(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    old_to_new[i] = static_cast<std::uint8_t>(symbols.size());
    symbols.push_back(input.alphabet().symbols()[i]);
  }
  auto reindex = [&](const Word& w) {
    std::vector<Letter> out;
    out.reserve(w.size());
    for (Letter x : w) out.push_back(Letter{old_to_new[x.id]});
    return Word(std::move(out));
  };
  std::vector<Rule> new_rules;
  for (const Rule& r : rules)
    new_rules.push_back({reindex(r.lhs), reindex(r.rhs)});

  NormalizationResult result{
      RewritingSystem(Alphabet(std::move(symbols)), std::move(new_rules)),
      {},
      std::move(log)};
  for (const Word& m : letter_map) result.letter_map.push_back(reindex(m));

  const Classification& flags = result.system.flags();
  if (!flags.normalized || !flags.monadic ||
      (!result.system.rules().empty() && !flags.length_reducing))
    throw NormalizationFailedError(
        "normalization fixpoint is not a normalized monadic system");
  auto report = is_confluent(result.system);
  if (!report.confluent) {
    std::string detail = "normalization produced a non-confluent system";
    if (report.witness)
      detail += "; witness source: " +
                render_word(result.system.alphabet(), report.witness->pair.source);
    throw NormalizationFailedError(detail);
  }
  return result;
}

/// Desk-scale validation that `map` (letter of `a` -> word over `b`)
/// induces a label-respecting bijection between the radius-bounded
/// multiplication tables of the two systems: the irreducible words of
/// length <= radius correspond bijectively and products agree through the
/// map. Reduction is budgeted so convergent systems with letter renames
/// work as well as length-reducing ones.
inline bool check_isomorphic_balls(const RewritingSystem& a,
                                   const RewritingSystem& b,
                                   const std::vector<Word>& map,
                                   std::size_t radius) {
  auto nf_a = [&](const Word& w) {
    return normal_form(a, w, detail::rename_safe_budget(a, w.size()));
  };
  auto nf_b = [&](const Word& w) {
    return normal_form(b, w, detail::rename_safe_budget(b, w.size()));
  };
  auto phi = [&](const Word& w) {
    Word out;
    for (Letter x : w) out.append(map[x.id]);
    return nf_b(out);
  };

  std::vector<Word> va = irreducible_words(a, radius);
  std::vector<Word> vb = irreducible_words(b, radius);
  if (va.size() != vb.size()) return false;
  std::set<Word> vb_set(vb.begin(), vb.end());
  std::set<Word> image;
  std::vector<Word> phi_of(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    phi_of[i] = phi(va[i]);
    if (!vb_set.count(phi_of[i])) return false;
    if (!image.insert(phi_of[i]).second) return false;  // collision
  }
  for (std::size_t i = 0; i < va.size(); ++i)
    for (std::size_t j = 0; j < va.size(); ++j) {
      Word lhs = phi(nf_a(va[i] + va[j]));
      Word rhs = nf_b(phi_of[i] + phi_of[j]);
      if (!(lhs == rhs)) return false;
    }
  return true;
}

/// Emit the normalized system with the generator map as trailing comments.
inline std::string render_with_map(const NormalizationResult& nr,
                                   const Alphabet& original) {
  std::string out = render(nr.system);
  for (std::size_t i = 0; i < nr.letter_map.size(); ++i) {
    out += "# map: " + original.symbols()[i] + " -> ";
    std::string img = render_word(nr.system.alphabet(), nr.letter_map[i]);
    out += img.empty() ? "(empty)" : img;
    out += '\n';
  }
  return out;
}

}  // namespace strew
