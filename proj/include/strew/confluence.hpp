#pragma once

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "strew/errors.hpp"
#include "strew/rewrite.hpp"
#include "strew/system.hpp"

namespace strew {

enum class OverlapKind { kSuffixPrefix, kContainment };

/// Two one-step rewrites of one word arising from overlapping left-hand
/// sides. `source` rewrites to `left_result` with rule_a at offset_a and
/// to `right_result` with rule_b at offset_b.
struct CriticalPair {
  Word source;
  Word left_result;
  Word right_result;
  std::size_t rule_a = 0;
  std::size_t rule_b = 0;
  OverlapKind kind = OverlapKind::kSuffixPrefix;
  std::size_t offset_a = 0;
  std::size_t offset_b = 0;
  bool trivially_joinable = false;  // left_result == right_result
};

/// All overlaps between ordered rule pairs (a, b), a = b included:
/// (i) a proper suffix of lhs(a) equals a proper prefix of lhs(b), and
/// (ii) lhs(b) occurs inside lhs(a). Duplicate redex-position pairs are
/// dropped under an ordered normalization of the two redexes.
inline std::vector<CriticalPair> critical_pairs(const RewritingSystem& sys) {
  const auto& rules = sys.rules();
  std::vector<CriticalPair> out;
  // Dedup key: source plus the two (offset, rule) redexes in sorted order.
  using RedexKey = std::pair<std::size_t, std::size_t>;
  std::set<std::tuple<Word, RedexKey, RedexKey>> seen;

  auto emit = [&](Word source, std::size_t ra, std::size_t oa, std::size_t rb,
                  std::size_t ob, OverlapKind kind) {
    RedexKey ka{oa, ra}, kb{ob, rb};
    if (ka == kb) return;  // same redex twice is vacuous
    auto key = std::make_tuple(source, std::min(ka, kb), std::max(ka, kb));
    if (!seen.insert(key).second) return;
    CriticalPair cp;
    cp.source = std::move(source);
    cp.rule_a = ra;
    cp.rule_b = rb;
    cp.kind = kind;
    cp.offset_a = oa;
    cp.offset_b = ob;
    cp.left_result = apply_rule_at(sys, cp.source, oa, ra);
    cp.right_result = apply_rule_at(sys, cp.source, ob, rb);
    cp.trivially_joinable = cp.left_result == cp.right_result;
    out.push_back(std::move(cp));
  };

  for (std::size_t a = 0; a < rules.size(); ++a) {
    const Word& la = rules[a].lhs;
    for (std::size_t b = 0; b < rules.size(); ++b) {
      const Word& lb = rules[b].lhs;
      // Suffix-prefix: last k letters of lhs(a) = first k letters of lhs(b).
      std::size_t kmax = std::min(la.size(), lb.size()) - 1;
      for (std::size_t k = 1; k <= kmax; ++k) {
        if (!(la.suffix(k) == lb.prefix(k))) continue;
        Word source = la + lb.subword(k, lb.size() - k);
        emit(std::move(source), a, 0, b, la.size() - k,
             OverlapKind::kSuffixPrefix);
      }
      // Containment: lhs(b) inside lhs(a).
      if (lb.size() <= la.size()) {
        for (std::size_t o = 0; o + lb.size() <= la.size(); ++o) {
          if (a == b && o == 0 && lb.size() == la.size()) continue;
          if (la.contains_at(lb, o))
            emit(la, a, 0, b, o, OverlapKind::kContainment);
        }
      }
    }
  }
  return out;
}

struct ConfluenceWitness {
  CriticalPair pair;
  Word left_nf;
  Word right_nf;
};

struct ConfluenceReport {
  bool confluent = false;
  std::size_t pairs_checked = 0;
  std::optional<ConfluenceWitness> witness;
};

/// Critical-pair confluence test for terminating systems: confluent iff
/// both results of every critical pair reduce to the same irreducible
/// word. Requires a length-reducing system; for anything else we refuse
/// rather than attempt a semi-decision.
inline ConfluenceReport is_confluent(const RewritingSystem& sys) {
  if (!sys.flags().length_reducing) throw NotTerminatingError();
  ConfluenceReport report;
  report.confluent = true;
  for (CriticalPair& cp : critical_pairs(sys)) {
    ++report.pairs_checked;
    if (cp.trivially_joinable) continue;
    Word l = normal_form(sys, cp.left_result);
    Word r = normal_form(sys, cp.right_result);
    if (!(l == r)) {
      report.confluent = false;
      report.witness = ConfluenceWitness{std::move(cp), std::move(l),
                                         std::move(r)};
      break;
    }
  }
  return report;
}

/// Every word reachable from `w` by any sequence of rewrites (including
/// `w` itself). Length-reducing systems keep this finite; the max_len
/// guard is retained for safety.
inline std::set<Word> descendants(const RewritingSystem& sys, const Word& w,
                                  std::size_t max_len) {
  if (w.size() > max_len)
    throw BudgetExceededError("descendant search exceeded max_len");
  std::set<Word> seen{w};
  std::vector<Word> stack{w};
  while (!stack.empty()) {
    Word cur = std::move(stack.back());
    stack.pop_back();
    for (const auto& redex : sys.automaton().collect(cur)) {
      Word next = apply_rule_at(sys, cur, redex.pos, redex.rule);
      if (next.size() > max_len)
        throw BudgetExceededError("descendant search exceeded max_len");
      if (seen.insert(next).second) stack.push_back(std::move(next));
    }
  }
  return seen;
}

/// Brute-force joinability: u and v have a common descendant under the full
/// rewrite-graph search. Test oracle for is_confluent on small systems.
inline bool joinable_oracle(const RewritingSystem& sys, const Word& u,
                            const Word& v, std::size_t max_len) {
  if (!sys.flags().length_reducing) throw NotTerminatingError();
  auto du = descendants(sys, u, max_len);
  auto dv = descendants(sys, v, max_len);
  for (const Word& w : du)
    if (dv.count(w)) return true;
  return false;
}

}  // namespace strew
