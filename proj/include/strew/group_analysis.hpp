#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "strew/cayley.hpp"
#include "strew/confluence.hpp"
#include "strew/errors.hpp"
#include "strew/rewrite.hpp"
#include "strew/system.hpp"

namespace strew {

enum class GroupAnswer { kYes, kNo, kUnknown };

/// Whether the presented monoid is a group. `yes` means every letter has a
/// verified two-sided inverse word of length <= search_bound. `no` is
/// certified: some letter has no inverse within the bound AND right
/// multiplication by some letter is non-injective on the radius-bound
/// ball, which cannot happen in a group. Anything else is `unknown`.
struct GroupStatus {
  GroupAnswer answer = GroupAnswer::kUnknown;
  std::vector<Word> inverses;  // indexed by letter id; valid when yes
  std::size_t search_bound = 0;
};

/// Heuristic default for the inverse search depth; recorded in the result
/// so callers can see what was actually tried.
inline std::size_t default_inverse_bound(const RewritingSystem& sys) {
  return 2 * std::max<std::size_t>(1, sys.max_lhs_length()) *
         std::max<std::size_t>(1, sys.alphabet().size());
}

namespace detail {

inline void require_group_analysis_input(const RewritingSystem& sys) {
  if (!sys.flags().monadic) throw PreconditionError("monadic");
  if (!sys.flags().normalized) throw PreconditionError("normalized");
  if (!is_confluent(sys).confluent) throw PreconditionError("confluent");
}

/// Two cheap necessary conditions for group-ness: reaching the empty word
/// needs a rule with empty rhs, and a letter can only cancel if some lhs
/// contains it. Never rejects a group system.
inline bool group_possible(const RewritingSystem& sys) {
  bool has_erasing_rule = false;
  for (const Rule& r : sys.rules())
    if (r.rhs.empty()) has_erasing_rule = true;
  if (!has_erasing_rule) return sys.rules().empty() && sys.alphabet().size() == 0;
  std::vector<bool> covered(sys.alphabet().size(), false);
  for (const Rule& r : sys.rules())
    for (Letter x : r.lhs) covered[x.id] = true;
  for (bool c : covered)
    if (!c) return false;
  return true;
}

/// Right-inverse words for every letter, found by breadth-first search
/// over reduced words V by length (nf(x V) = 1, |V| <= bound). Aborts on
/// the first letter that exhausts the bound or the state cap.
inline std::optional<std::vector<Word>> find_letter_inverses(
    const RewritingSystem& sys, std::size_t bound, std::size_t state_cap) {
  std::vector<Word> inverses(sys.alphabet().size());
  for (std::size_t c = 0; c < sys.alphabet().size(); ++c) {
    Letter x = sys.alphabet().letter(c);
    std::map<Word, Word> visited;  // state nf(x V) -> V
    Word start = Word::single(x);
    visited.emplace(start, Word{});
    std::vector<Word> frontier{start};
    bool found = false;
    for (std::size_t depth = 1; depth <= bound && !found; ++depth) {
      std::vector<Word> next;
      for (const Word& state : frontier) {
        const Word& v = visited.at(state);
        for (std::size_t yc = 0; yc < sys.alphabet().size(); ++yc) {
          Letter y = sys.alphabet().letter(yc);
          Word ns = normal_form(sys, state + y);
          Word nv = v + y;
          if (ns.empty()) {
            inverses[c] = nv;
            found = true;
            break;
          }
          if (visited.size() >= state_cap) break;
          if (visited.emplace(ns, nv).second) next.push_back(std::move(ns));
        }
        if (found || visited.size() >= state_cap) break;
      }
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
    if (!found) return std::nullopt;
  }
  return inverses;
}

}  // namespace detail

inline GroupStatus group_status(const RewritingSystem& sys,
                                std::size_t bound = 0,
                                std::size_t state_cap = 50'000) {
  detail::require_group_analysis_input(sys);
  GroupStatus st;
  st.search_bound = bound ? bound : default_inverse_bound(sys);
  st.inverses.assign(sys.alphabet().size(), Word{});

  bool all_found = false;
  if (detail::group_possible(sys)) {
    auto inverses =
        detail::find_letter_inverses(sys, st.search_bound, state_cap);
    if (inverses) {
      st.inverses = std::move(*inverses);
      all_found = true;
    }
  }

  if (all_found) {
    for (std::size_t c = 0; c < sys.alphabet().size(); ++c) {
      Word left = normal_form(sys, st.inverses[c] + sys.alphabet().letter(c));
      if (!left.empty()) {  // one-sided only; do not over-claim
        st.answer = GroupAnswer::kUnknown;
        return st;
      }
    }
    st.answer = GroupAnswer::kYes;
    return st;
  }

  // Certificate search: a collision nf(g y) = nf(g' y) between distinct
  // ball vertices refutes group-ness outright.
  for (std::size_t radius = std::min<std::size_t>(st.search_bound, 6);
       radius >= 2; --radius) {
    CayleyBall ball;
    try {
      ball = build_ball(sys, radius, 20'000);
    } catch (const SizeBudgetError&) {
      continue;  // shrink until it fits
    }
    for (std::size_t yc = 0; yc < sys.alphabet().size(); ++yc) {
      Letter y = sys.alphabet().letter(yc);
      std::map<Word, std::uint32_t> image;
      for (std::uint32_t v = 0; v < ball.vertices.size(); ++v) {
        Word im = normal_form(sys, ball.vertices[v] + y);
        auto [it, fresh] = image.emplace(std::move(im), v);
        if (!fresh) {
          st.answer = GroupAnswer::kNo;
          return st;
        }
      }
    }
    break;
  }
  st.answer = GroupAnswer::kUnknown;
  return st;
}

/// Inverse of an arbitrary word: reversed concatenation of the letter
/// inverses, reduced. Valid only when status.answer == yes.
inline Word inverse_word(const RewritingSystem& sys, const GroupStatus& status,
                         const Word& w) {
  Word out;
  for (std::size_t i = w.size(); i-- > 0;)
    out.append(status.inverses[w[i].id]);
  return normal_form(sys, out);
}

/// Least n >= 1 with nf(word^n) = 1, computed by iterated reduced
/// multiplication; absent if no such n <= max_order.
inline std::optional<std::size_t> order_of(const RewritingSystem& sys,
                                           const Word& w,
                                           std::size_t max_order) {
  Word cur = normal_form(sys, w);
  for (std::size_t n = 1; n <= max_order; ++n) {
    if (cur.empty()) return n;
    cur = normal_form(sys, cur + w);
  }
  return std::nullopt;
}

/// Shortest conjugate found by the cycle-and-reduce procedure, together
/// with the conjugating word (the accumulated rotated first letters).
struct MinimalConjugate {
  Word input;
  Word minimal;
  Word conjugator;
  std::size_t ell = 0;
};

/// Repeatedly move the first letter to the end and reduce, recording the
/// shortest word seen. Stops when a previously seen word recurs (rotation
/// states of a fixed-length word are finite) or when the empty word is
/// reached. max_iter defaults to 4 * |word| * |alphabet| as a hard cap.
inline MinimalConjugate cycle_and_reduce(const RewritingSystem& sys,
                                         const Word& w,
                                         std::size_t max_iter = 0) {
  if (w.empty() || is_reducible(sys, w))
    throw PreconditionError("irreducible nonempty word");
  if (max_iter == 0)
    max_iter = 4 * w.size() * std::max<std::size_t>(1, sys.alphabet().size());

  Word cur = w;
  Word conj;
  MinimalConjugate best{w, w, Word{}, w.size()};
  std::set<Word> seen{w};
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    if (cur.empty()) return best;  // global minimum, nothing left to rotate
    Letter x = cur.front();
    cur = normal_form(sys, cur.subword(1, cur.size() - 1) + x);
    conj.append(x);
    if (cur.size() < best.minimal.size()) {
      best.minimal = cur;
      best.conjugator = conj;
      best.ell = cur.size();
    }
    if (!seen.insert(cur).second) return best;  // cycle detected
  }
  throw IterationBudgetError(max_iter);
}

/// xW is appended-first-letter (AFL) reducible if xWx admits a rewrite.
struct AflProfile {
  Word word;
  bool reducible = false;
};

inline AflProfile afl_profile(const RewritingSystem& sys, const Word& w) {
  if (w.empty() || is_reducible(sys, w))
    throw PreconditionError("irreducible nonempty word");
  return {w, is_reducible(sys, w + w.front())};
}

/// A finite subgroup in distinct-first-letter form: the reduced
/// representatives of the nontrivial elements are x_i W for one shared
/// tail word W and pairwise distinct first letters x_i.
struct DflSubgroup {
  Word tail;
  std::vector<Letter> first_letters;     // sorted by id, size >= 2
  std::optional<Letter> inverse_letter;  // nf(tail + V) = 1; absent iff tail empty
  /// (n+1) x (n+1) group table over {1} u first_letters; index 0 is the
  /// identity, index i >= 1 is first_letters[i-1].
  std::vector<std::vector<std::size_t>> table;
  /// Letters x_j for which every product against the subgroup is witnessed
  /// by a literal rule (x_i tail x_j -> rhs) and tail x_j tail is
  /// irreducible (the minimal-conjugate signature).
  std::vector<Letter> witnesses;
  std::size_t order = 0;

  Word representative(std::size_t i) const {
    return Word::single(first_letters[i]) + tail;
  }
  std::set<Word> elements() const {
    std::set<Word> out{Word{}};
    for (std::size_t i = 0; i < first_letters.size(); ++i)
      out.insert(representative(i));
    return out;
  }
};

namespace detail {

// Product of two candidate elements x tail and y tail, classified as
// identity (-1), another first letter (its id), or neither (-2).
struct DflProducts {
  static constexpr int kIdentity = -1;
  static constexpr int kOutside = -2;
  std::map<std::pair<std::uint8_t, std::uint8_t>, int> value;
};

inline int dfl_product(const RewritingSystem& sys, const Word& tail, Letter x,
                       Letter y) {
  Word p = normal_form(sys, Word::single(x) + tail + Word::single(y) + tail);
  if (p.empty()) return DflProducts::kIdentity;
  if (p.size() == tail.size() + 1 && p.contains_at(tail, 1)) return p[0].id;
  return DflProducts::kOutside;
}

// All maximal cliques of the symmetric compatibility graph, via
// Bron-Kerbosch over <= 16 candidates. Nodes incompatible with themselves
// cannot belong to any valid set and are left out entirely.
inline void maximal_cliques(const std::vector<std::uint8_t>& nodes,
                            const std::vector<std::vector<bool>>& compat,
                            std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> r, p, x;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (compat[i][i]) p.push_back(i);
  auto bk = [&](auto&& self, std::vector<std::size_t> rr,
                std::vector<std::size_t> pp,
                std::vector<std::size_t> xx) -> void {
    if (pp.empty() && xx.empty()) {
      out.push_back(rr);
      return;
    }
    std::vector<std::size_t> pcopy = pp;
    for (std::size_t v : pcopy) {
      std::vector<std::size_t> r2 = rr;
      r2.push_back(v);
      std::vector<std::size_t> p2, x2;
      for (std::size_t u : pp)
        if (u != v && compat[v][u]) p2.push_back(u);
      for (std::size_t u : xx)
        if (u != v && compat[v][u]) x2.push_back(u);
      self(self, std::move(r2), std::move(p2), std::move(x2));
      pp.erase(std::find(pp.begin(), pp.end(), v));
      xx.push_back(v);
    }
  };
  bk(bk, r, p, x);
}

}  // namespace detail

/// Rule-driven detection of finite subgroups in distinct-first-letter
/// form. Candidate tails are the rule lhs interiors (plus the empty word);
/// candidate first letters come from rules shaped x tail y -> z or -> 1,
/// are closed under verified reduced products, and every maximal closed
/// subset of size >= 2 whose induced table is a group is emitted. Emitted
/// subgroups additionally carry a verified single inverse letter for a
/// nonempty tail and at least one witness letter whose products are all
/// literal rules of the system.
inline std::vector<DflSubgroup> detect_dfl_subgroups(
    const RewritingSystem& sys, const GroupStatus& status) {
  if (status.answer != GroupAnswer::kYes) throw PreconditionError("group");
  constexpr std::size_t kMaxCandidates = 16;

  std::set<Word> tails{Word{}};
  for (const Rule& r : sys.rules())
    if (r.lhs.size() >= 2)
      tails.insert(r.lhs.subword(1, r.lhs.size() - 2));

  std::vector<DflSubgroup> out;
  for (const Word& tail : tails) {
    // Seed candidates from rules of shape (x tail y, z) or (x tail y, 1).
    std::set<std::uint8_t> seed;
    for (const Rule& r : sys.rules()) {
      if (r.lhs.size() != tail.size() + 2) continue;
      if (!r.lhs.contains_at(tail, 1)) continue;
      seed.insert(r.lhs.front().id);
      seed.insert(r.lhs.back().id);
      if (r.rhs.size() == 1) seed.insert(r.rhs[0].id);
    }
    std::vector<std::uint8_t> cand;
    for (std::uint8_t id : seed)
      if (!is_reducible(sys, Word::single(Letter{id}) + tail))
        cand.push_back(id);
    if (cand.size() < 2) continue;

    // Close under verified products; grow while products land on fresh
    // letters whose representative is irreducible (it is a normal form).
    detail::DflProducts products;
    bool grew = true;
    while (grew && cand.size() <= kMaxCandidates) {
      grew = false;
      for (std::size_t i = 0; i < cand.size() && !grew; ++i)
        for (std::size_t j = 0; j < cand.size() && !grew; ++j) {
          auto key = std::make_pair(cand[i], cand[j]);
          if (products.value.count(key)) continue;
          int v = detail::dfl_product(sys, tail, Letter{cand[i]},
                                      Letter{cand[j]});
          products.value[key] = v;
          if (v >= 0 &&
              std::find(cand.begin(), cand.end(),
                        static_cast<std::uint8_t>(v)) == cand.end()) {
            cand.push_back(static_cast<std::uint8_t>(v));
            grew = true;
          }
        }
    }
    if (cand.size() > kMaxCandidates) continue;  // desk-scale guard
    std::sort(cand.begin(), cand.end());
    auto product = [&](std::uint8_t a, std::uint8_t b) {
      auto key = std::make_pair(a, b);
      auto it = products.value.find(key);
      if (it != products.value.end()) return it->second;
      int v = detail::dfl_product(sys, tail, Letter{a}, Letter{b});
      products.value[key] = v;
      return v;
    };

    // Compatibility graph; a valid letter set is a clique in it.
    std::vector<std::vector<bool>> compat(cand.size(),
                                          std::vector<bool>(cand.size()));
    for (std::size_t i = 0; i < cand.size(); ++i)
      compat[i][i] = product(cand[i], cand[i]) != detail::DflProducts::kOutside;
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (std::size_t j = i + 1; j < cand.size(); ++j) {
        bool ok = compat[i][i] && compat[j][j] &&
                  product(cand[i], cand[j]) != detail::DflProducts::kOutside &&
                  product(cand[j], cand[i]) != detail::DflProducts::kOutside;
        compat[i][j] = compat[j][i] = ok;
      }

    std::vector<std::vector<std::size_t>> cliques;
    detail::maximal_cliques(cand, compat, cliques);

    // Within each clique, collect closed subsets forming a group table.
    std::vector<std::vector<std::uint8_t>> valid_sets;
    for (const auto& clique : cliques) {
      if (clique.size() < 2 || clique.size() > 12) continue;
      std::vector<std::size_t> q(clique.begin(), clique.end());
      std::sort(q.begin(), q.end());
      for (std::size_t mask = 1; mask < (1u << q.size()); ++mask) {
        std::vector<std::uint8_t> s;
        for (std::size_t b = 0; b < q.size(); ++b)
          if (mask & (1u << b)) s.push_back(cand[q[b]]);
        if (s.size() < 2) continue;
        // Closure + inverses.
        bool ok = true;
        for (std::uint8_t a : s)
          for (std::uint8_t b : s) {
            int v = product(a, b);
            if (v == detail::DflProducts::kOutside ||
                (v >= 0 && std::find(s.begin(), s.end(),
                                     static_cast<std::uint8_t>(v)) == s.end()))
              ok = false;
          }
        if (!ok) continue;
        for (std::uint8_t a : s) {
          bool has_inverse = false;
          for (std::uint8_t b : s)
            if (product(a, b) == detail::DflProducts::kIdentity &&
                product(b, a) == detail::DflProducts::kIdentity)
              has_inverse = true;
          if (!has_inverse) ok = false;
        }
        if (!ok) continue;
        // Associativity over {1} u s, exhaustively.
        auto mul = [&](int a, int b) -> int {
          if (a == detail::DflProducts::kIdentity) return b;
          if (b == detail::DflProducts::kIdentity) return a;
          return product(static_cast<std::uint8_t>(a),
                         static_cast<std::uint8_t>(b));
        };
        std::vector<int> elems{detail::DflProducts::kIdentity};
        for (std::uint8_t a : s) elems.push_back(a);
        for (int a : elems)
          for (int b : elems)
            for (int c : elems)
              if (mul(mul(a, b), c) != mul(a, mul(b, c))) ok = false;
        if (ok) valid_sets.push_back(std::move(s));
      }
    }

    // Keep maximal sets only, dedupe.
    std::sort(valid_sets.begin(), valid_sets.end());
    valid_sets.erase(std::unique(valid_sets.begin(), valid_sets.end()),
                     valid_sets.end());
    std::vector<std::vector<std::uint8_t>> maximal;
    for (const auto& s : valid_sets) {
      bool contained = false;
      for (const auto& t : valid_sets)
        if (s != t && std::includes(t.begin(), t.end(), s.begin(), s.end()))
          contained = true;
      if (!contained) maximal.push_back(s);
    }

    for (const auto& s : maximal) {
      DflSubgroup dfl;
      dfl.tail = tail;
      for (std::uint8_t id : s) dfl.first_letters.push_back(Letter{id});
      dfl.order = s.size() + 1;

      if (!tail.empty()) {
        std::optional<Letter> v;
        for (std::size_t c = 0; c < sys.alphabet().size(); ++c) {
          Letter cl = sys.alphabet().letter(c);
          if (normal_form(sys, tail + cl).empty()) {
            v = cl;
            break;
          }
        }
        if (!v) continue;  // cannot satisfy the single-inverse-letter form
        dfl.inverse_letter = v;
      }

      // Table over {1} u letters.
      const std::size_t m = s.size();
      dfl.table.assign(m + 1, std::vector<std::size_t>(m + 1, 0));
      for (std::size_t i = 0; i <= m; ++i) {
        dfl.table[0][i] = i;
        dfl.table[i][0] = i;
      }
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          int v = product(s[i], s[j]);
          dfl.table[i + 1][j + 1] =
              v == detail::DflProducts::kIdentity
                  ? 0
                  : 1 + (std::find(s.begin(), s.end(),
                                   static_cast<std::uint8_t>(v)) -
                         s.begin());
        }

      // Witness letters: all products against x_j are literal rules and
      // tail x_j tail is irreducible.
      Word v_word;
      if (dfl.inverse_letter) v_word = Word::single(*dfl.inverse_letter);
      for (std::uint8_t j : s) {
        bool witness = true;
        for (std::uint8_t i : s) {
          int v = product(i, j);
          Word lhs = Word::single(Letter{i}) + tail + Word::single(Letter{j});
          Word rhs = v == detail::DflProducts::kIdentity
                         ? v_word
                         : Word::single(Letter{static_cast<std::uint8_t>(v)});
          Rule want{lhs, rhs};
          if (std::find(sys.rules().begin(), sys.rules().end(), want) ==
              sys.rules().end())
            witness = false;
        }
        if (witness &&
            is_reducible(sys, tail + Word::single(Letter{j}) + tail))
          witness = false;
        if (witness) dfl.witnesses.push_back(Letter{j});
      }
      if (dfl.witnesses.empty()) continue;
      out.push_back(std::move(dfl));
    }
  }
  return out;
}

/// A finite cyclic subgroup in reduced-cyclic form: the reduced
/// representatives of the nontrivial elements are the literal powers
/// U, U^2, ..., U^(order-1).
struct RcSubgroup {
  Word generator;
  std::size_t order = 0;

  std::set<Word> elements() const {
    std::set<Word> out{Word{}};
    for (std::size_t i = 1; i < order; ++i) out.insert(generator.repeated(i));
    return out;
  }
};

inline std::vector<RcSubgroup> detect_rc_subgroups(const RewritingSystem& sys,
                                                   const GroupStatus& status,
                                                   std::size_t max_gen_len,
                                                   std::size_t max_order) {
  if (status.answer != GroupAnswer::kYes) throw PreconditionError("group");
  std::vector<RcSubgroup> out;
  std::set<std::set<Word>> seen;
  for (const Word& u : irreducible_words(sys, max_gen_len)) {
    if (u.empty()) continue;
    auto n = order_of(sys, u, max_order);
    if (!n || *n < 2) continue;
    bool literal = true;
    for (std::size_t i = 2; i < *n && literal; ++i)
      if (is_reducible(sys, u.repeated(i))) literal = false;
    if (!literal) continue;
    RcSubgroup rc{u, *n};
    if (seen.insert(rc.elements()).second) out.push_back(std::move(rc));
  }
  return out;
}

/// Consistency test hook: a finite cyclic subgroup of order >= 3 with an
/// order-2 element c = z tail whose word z tail z is reducible cannot have
/// reduced-cyclic form. Returns true after verifying no detected RC
/// presentation of the given element set exists.
inline bool check_not_rc(const RewritingSystem& sys, const GroupStatus& status,
                         const std::set<Word>& subgroup_elements, Letter z,
                         const Word& tail, std::size_t max_gen_len,
                         std::size_t max_order) {
  Word c = Word::single(z) + tail;
  if (subgroup_elements.size() < 3)
    throw PreconditionError("subgroup order at least 3");
  if (!subgroup_elements.count(c))
    throw PreconditionError("element of subgroup");
  if (is_reducible(sys, c) || !normal_form(sys, c + c).empty() || c.empty())
    throw PreconditionError("order-2 element");
  if (!is_reducible(sys, c + Word::single(z)))
    throw PreconditionError("appended-first-letter reducible");
  for (const RcSubgroup& rc :
       detect_rc_subgroups(sys, status, max_gen_len, max_order)) {
    auto es = rc.elements();
    if (es.count(c) && es == subgroup_elements) return false;
  }
  return true;
}

/// For a detected-subgroup representative of minimal length in its
/// conjugacy class, exactly one cyclic rotation is appended-first-letter
/// reducible; return its index and assert the rest are not. More or fewer
/// than one reducible rotation raises LemmaViolationError.
inline std::size_t unique_afl_rotation(const RewritingSystem& sys,
                                       const std::vector<DflSubgroup>& dfls,
                                       const Word& w) {
  if (w.empty() || is_reducible(sys, w))
    throw PreconditionError("irreducible nonempty word");
  bool member = false;
  for (const DflSubgroup& d : dfls)
    for (std::size_t i = 0; i < d.first_letters.size(); ++i)
      if (d.representative(i) == w) member = true;
  if (!member)
    throw PreconditionError("detected subgroup member",
                            "word is not a representative of any detected "
                            "distinct-first-letter subgroup");
  if (cycle_and_reduce(sys, w).ell != w.size())
    throw PreconditionError("minimal length in conjugacy class");
  std::vector<std::size_t> hits;
  for (std::size_t r = 0; r < w.size(); ++r) {
    Word rot = w.rotated(r);
    if (is_reducible(sys, rot + rot.front())) hits.push_back(r);
  }
  if (hits.size() != 1)
    throw LemmaViolationError(
        "expected exactly one appended-first-letter-reducible rotation, "
        "found " +
        std::to_string(hits.size()));
  return hits[0];
}

}  // namespace strew
