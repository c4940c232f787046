#pragma once

// Shared helpers for the test suites: fixture loading, word construction,
// and the independent brute-force oracles the implementation is checked
// against. Everything here must stay independent of the code paths it
// validates: the oracles use only direct enumeration and single-rule
// splicing, never the pattern automaton or the critical-pair machinery.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "strew/strew.hpp"

#ifndef STREW_FIXTURE_DIR
#define STREW_FIXTURE_DIR "tests/fixtures"
#endif

namespace testsupport {

using namespace strew;

inline RewritingSystem fixture(const std::string& name) {
  return load_system(std::string(STREW_FIXTURE_DIR) + "/" + name);
}

inline Word w(const RewritingSystem& sys, const std::string& text) {
  return parse_word(sys.alphabet(), text);
}

inline std::string show(const RewritingSystem& sys, const Word& word) {
  return render_word(sys.alphabet(), word);
}

// ---- brute-force rewriting oracle (no automaton) ----

/// All one-step successors of `word`, by direct subword scan.
inline std::vector<Word> one_step_successors(const RewritingSystem& sys,
                                             const Word& word) {
  std::vector<Word> out;
  for (std::size_t r = 0; r < sys.rules().size(); ++r) {
    const Rule& rule = sys.rules()[r];
    for (std::size_t pos = 0; pos + rule.lhs.size() <= word.size(); ++pos) {
      if (!word.contains_at(rule.lhs, pos)) continue;
      Word next = word.prefix(pos) + rule.rhs +
                  word.subword(pos + rule.lhs.size(),
                               word.size() - pos - rule.lhs.size());
      out.push_back(std::move(next));
    }
  }
  return out;
}

/// Full descendant set by direct scanning (independent of
/// strew::descendants).
inline std::set<Word> descendants_oracle(const RewritingSystem& sys,
                                         const Word& word) {
  std::set<Word> seen{word};
  std::vector<Word> stack{word};
  while (!stack.empty()) {
    Word cur = std::move(stack.back());
    stack.pop_back();
    for (Word& next : one_step_successors(sys, cur))
      if (seen.insert(next).second) stack.push_back(std::move(next));
  }
  return seen;
}

inline bool joinable_by_oracle(const RewritingSystem& sys, const Word& u,
                               const Word& v,
                               std::map<Word, std::set<Word>>& memo) {
  auto get = [&](const Word& x) -> const std::set<Word>& {
    auto it = memo.find(x);
    if (it == memo.end()) it = memo.emplace(x, descendants_oracle(sys, x)).first;
    return it->second;
  };
  const auto& du = get(u);
  const auto& dv = get(v);
  const auto& small = du.size() <= dv.size() ? du : dv;
  const auto& large = du.size() <= dv.size() ? dv : du;
  for (const Word& x : small)
    if (large.count(x)) return true;
  return false;
}

/// Every word over the alphabet of length <= max_len, shortlex order.
inline std::vector<Word> all_words(const Alphabet& alphabet,
                                   std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t layer_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i)
      for (std::size_t c = 0; c < alphabet.size(); ++c)
        out.push_back(out[i] + alphabet.letter(c));
    layer_begin = layer_end;
  }
  return out;
}

/// Local-confluence brute force: for every word of length <= max_len, all
/// one-step successors are pairwise joinable. For systems whose longest
/// lhs is below max_len this decides confluence outright: every critical
/// source is covered and joinability of critical pairs is what the
/// critical-pair criterion tests.
inline bool locally_confluent_oracle(const RewritingSystem& sys,
                                     std::size_t max_len) {
  std::map<Word, std::set<Word>> memo;
  for (const Word& word : all_words(sys.alphabet(), max_len)) {
    auto succ = one_step_successors(sys, word);
    for (std::size_t i = 0; i < succ.size(); ++i)
      for (std::size_t j = i + 1; j < succ.size(); ++j)
        if (!joinable_by_oracle(sys, succ[i], succ[j], memo)) return false;
  }
  return true;
}

// ---- Smith normal form oracle: gcd of k x k minors ----

inline BigInt det(const IntegerMatrix& m, const std::vector<std::size_t>& rows,
                  const std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return m.at(rows[0], cols[0]);
  BigInt acc = 0;
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (j != i) sub_cols.push_back(cols[j]);
    BigInt term = m.at(rows[0], cols[i]) * det(m, sub_rows, sub_cols);
    acc += (i % 2 == 0) ? term : -term;
  }
  return acc;
}

inline void combinations(std::size_t n, std::size_t k,
                         std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

/// Invariant factors from determinantal divisors: d_k = gcd of all k x k
/// minors, f_k = d_k / d_(k-1) up to the rank.
inline std::vector<BigInt> invariant_factors_oracle(const IntegerMatrix& m) {
  std::vector<BigInt> divisors{1};  // d_0
  std::size_t kmax = std::min(m.rows, m.cols);
  for (std::size_t k = 1; k <= kmax; ++k) {
    std::vector<std::vector<std::size_t>> row_sets, col_sets;
    combinations(m.rows, k, row_sets);
    combinations(m.cols, k, col_sets);
    BigInt g = 0;
    for (const auto& rs : row_sets)
      for (const auto& cs : col_sets) {
        BigInt d = det(m, rs, cs);
        if (d < 0) d = -d;
        g = boost::multiprecision::gcd(g, d);
      }
    if (g == 0) break;  // rank reached
    divisors.push_back(g);
  }
  std::vector<BigInt> factors;
  for (std::size_t k = 1; k < divisors.size(); ++k)
    factors.push_back(divisors[k] / divisors[k - 1]);
  return factors;
}

}  // namespace testsupport
