#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "strew/confluence.hpp"
#include "strew/group_analysis.hpp"
#include "strew/io.hpp"
#include "strew/normalization.hpp"
#include "strew/rewrite.hpp"
#include "strew/system.hpp"

namespace strew {

using BigInt = boost::multiprecision::cpp_int;

struct IntegerMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<BigInt> entries;  // row-major

  IntegerMatrix() = default;
  IntegerMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), entries(r * c) {}

  BigInt& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const {
    return entries[r * cols + c];
  }
};

/// Abelianized relation matrix: one row per rule, one column per letter,
/// entry = occurrences in lhs minus occurrences in rhs.
inline IntegerMatrix abelianized_matrix(const RewritingSystem& sys) {
  IntegerMatrix m(sys.rules().size(), sys.alphabet().size());
  for (std::size_t r = 0; r < sys.rules().size(); ++r) {
    for (Letter x : sys.rules()[r].lhs) m.at(r, x.id) += 1;
    for (Letter x : sys.rules()[r].rhs) m.at(r, x.id) -= 1;
  }
  return m;
}

struct SmithForm {
  std::vector<BigInt> invariant_factors;  // d_1 | d_2 | ... | d_k, positive
  std::size_t free_rank_defect = 0;       // cols - k
};

/// Smith normal form by exact integer row/column reduction.
inline SmithForm smith_normal_form(IntegerMatrix m) {
  const std::size_t R = m.rows, C = m.cols;
  auto row_swap = [&](std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < C; ++c) std::swap(m.at(a, c), m.at(b, c));
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < R; ++r) std::swap(m.at(r, a), m.at(r, b));
  };
  auto row_sub = [&](std::size_t a, std::size_t b, const BigInt& q) {
    for (std::size_t c = 0; c < C; ++c) m.at(a, c) -= q * m.at(b, c);
  };
  auto col_sub = [&](std::size_t a, std::size_t b, const BigInt& q) {
    for (std::size_t r = 0; r < R; ++r) m.at(r, a) -= q * m.at(r, b);
  };
  auto row_add = [&](std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < C; ++c) m.at(a, c) += m.at(b, c);
  };

  std::size_t t = 0;
  while (t < R && t < C) {
    for (;;) {
      // Move a minimal-magnitude nonzero entry of the submatrix to (t, t).
      std::size_t pi = R, pj = C;
      for (std::size_t r = t; r < R; ++r)
        for (std::size_t c = t; c < C; ++c) {
          if (m.at(r, c) == 0) continue;
          if (pi == R || abs(m.at(r, c)) < abs(m.at(pi, pj))) {
            pi = r;
            pj = c;
          }
        }
      if (pi == R) goto done;  // submatrix is zero
      if (pi != t) row_swap(pi, t);
      if (pj != t) col_swap(pj, t);

      bool clean = true;
      for (std::size_t r = t + 1; r < R; ++r) {
        if (m.at(r, t) == 0) continue;
        BigInt q = m.at(r, t) / m.at(t, t);
        row_sub(r, t, q);
        if (m.at(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < C; ++c) {
        if (m.at(t, c) == 0) continue;
        BigInt q = m.at(t, c) / m.at(t, t);
        col_sub(c, t, q);
        if (m.at(t, c) != 0) clean = false;
      }
      if (!clean) continue;  // smaller remainders exist; re-pivot

      // Divisibility: the pivot must divide every remaining entry.
      bool redo = false;
      for (std::size_t r = t + 1; r < R && !redo; ++r)
        for (std::size_t c = t + 1; c < C && !redo; ++c)
          if (m.at(r, c) % m.at(t, t) != 0) {
            row_add(t, r);
            redo = true;
          }
      if (!redo) break;
    }
    if (m.at(t, t) < 0)
      for (std::size_t c = 0; c < C; ++c) m.at(t, c) = -m.at(t, c);
    ++t;
  }
done:
  SmithForm sf;
  for (std::size_t i = 0; i < t; ++i)
    if (m.at(i, i) != 0) sf.invariant_factors.push_back(m.at(i, i));
  sf.free_rank_defect = C - sf.invariant_factors.size();
  return sf;
}

/// Prime-power components of a list of invariant factors: the canonical
/// form under which two finite abelian groups are compared. (Invariant
/// factors themselves depend on the grouping: [6] and [2, 3] present the
/// same group.)
inline std::vector<BigInt> primary_components(
    const std::vector<BigInt>& factors) {
  std::vector<BigInt> out;
  for (BigInt f : factors) {
    if (f <= 1) continue;
    for (BigInt p = 2; p * p <= f; ++p) {
      if (f % p != 0) continue;
      BigInt power = 1;
      while (f % p == 0) {
        power *= p;
        f /= p;
      }
      out.push_back(power);
    }
    if (f > 1) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// One finite free factor of the decomposition, as an explicit group table
/// over normal-form element words. elements[0] is the identity (the empty
/// word).
struct FiniteFactor {
  std::vector<Word> elements;
  std::vector<std::vector<std::size_t>> table;
  std::string origin;  // "dfl" or "rc"
  Word generator;      // rc generator; empty for dfl factors

  std::size_t order() const { return elements.size(); }
  std::set<Word> element_set() const {
    return std::set<Word>(elements.begin(), elements.end());
  }
};

namespace detail {

inline std::optional<FiniteFactor> factor_from_elements(
    const RewritingSystem& sys, std::set<Word> elems, std::string origin,
    Word generator) {
  FiniteFactor f;
  f.origin = std::move(origin);
  f.generator = std::move(generator);
  f.elements.assign(elems.begin(), elems.end());  // shortlex; identity first
  f.table.assign(f.elements.size(),
                 std::vector<std::size_t>(f.elements.size(), 0));
  for (std::size_t i = 0; i < f.elements.size(); ++i)
    for (std::size_t j = 0; j < f.elements.size(); ++j) {
      Word p = normal_form(sys, f.elements[i] + f.elements[j]);
      auto it = std::find(f.elements.begin(), f.elements.end(), p);
      if (it == f.elements.end()) return std::nullopt;  // not closed
      f.table[i][j] = static_cast<std::size_t>(it - f.elements.begin());
    }
  return f;
}

/// Invariant factors of the factor's abelianization, from the table
/// presentation (one generator per nontrivial element, one relation per
/// table entry).
inline std::vector<BigInt> table_abelianization(const FiniteFactor& f) {
  const std::size_t n = f.order() - 1;
  IntegerMatrix m(n * n, n);
  std::size_t row = 0;
  for (std::size_t i = 1; i < f.order(); ++i)
    for (std::size_t j = 1; j < f.order(); ++j) {
      m.at(row, i - 1) += 1;
      m.at(row, j - 1) += 1;
      std::size_t k = f.table[i][j];
      if (k != 0) m.at(row, k - 1) -= 1;
      ++row;
    }
  return smith_normal_form(m).invariant_factors;
}

/// Element order within a finite group table.
inline std::size_t table_element_order(const FiniteFactor& f, std::size_t i) {
  std::size_t cur = i, n = 1;
  while (cur != 0) {
    cur = f.table[cur][i];
    ++n;
  }
  return n;
}

}  // namespace detail

struct DecomposeOptions {
  std::size_t max_gen_len = 0;     // 0: max lhs length - 1, at least 1
  std::size_t max_order = 64;
  std::size_t conjugacy_bound = 0;  // 0: 2 * max representative length
};

struct PlainDecomposition {
  std::vector<FiniteFactor> finite_factors;
  std::size_t free_rank = 0;
  bool consistency_ok = false;
  std::string consistency_detail;
  std::string confidence;  // "exact" when consistency holds, else "partial"
  std::size_t conjugacy_bound = 0;
  bool merged_conjugates = false;
};

/// Decomposition of the presented plain group: finite free factors from
/// the subgroup detectors (maximal ones, conjugates merged best-effort
/// within a bounded conjugator search) and the free rank read off the
/// Smith form of the abelianized relation matrix. The torsion of the
/// abelianization is cross-checked against the factors' abelianizations;
/// a mismatch downgrades confidence to "partial" (an undetected factor is
/// diagnostic information, not an error).
inline PlainDecomposition decompose(const RewritingSystem& sys,
                                    const GroupStatus& status,
                                    DecomposeOptions opts = {}) {
  if (!sys.flags().monadic) throw PreconditionError("monadic");
  if (!sys.flags().normalized) throw PreconditionError("normalized");
  if (!is_confluent(sys).confluent) throw PreconditionError("confluent");
  if (status.answer != GroupAnswer::kYes) throw PreconditionError("group");

  if (opts.max_gen_len == 0)
    opts.max_gen_len = std::max<std::size_t>(1, sys.max_lhs_length() - 1);

  PlainDecomposition d;

  std::vector<FiniteFactor> factors;
  for (const DflSubgroup& dfl : detect_dfl_subgroups(sys, status)) {
    auto f = detail::factor_from_elements(sys, dfl.elements(), "dfl", Word{});
    if (f) factors.push_back(std::move(*f));
  }
  for (const RcSubgroup& rc :
       detect_rc_subgroups(sys, status, opts.max_gen_len, opts.max_order)) {
    auto f =
        detail::factor_from_elements(sys, rc.elements(), "rc", rc.generator);
    if (f) factors.push_back(std::move(*f));
  }

  // Keep only maximal factors, up to bounded conjugation: a detected
  // subgroup whose conjugate (conjugator length <= D, identity included)
  // lands inside an already-kept factor duplicates structure that factor
  // carries. The empty conjugator covers literal containment and exact
  // duplicates; the detectors do find conjugates of subgroups of maximal
  // factors (reduced-cyclic forms of conjugated involutions, for one).
  std::sort(factors.begin(), factors.end(),
            [](const FiniteFactor& a, const FiniteFactor& b) {
              if (a.order() != b.order()) return a.order() > b.order();
              return a.elements < b.elements;
            });
  std::size_t max_rep = 1;
  for (const auto& f : factors)
    for (const auto& e : f.elements) max_rep = std::max(max_rep, e.size());
  d.conjugacy_bound =
      opts.conjugacy_bound ? opts.conjugacy_bound : 2 * max_rep;
  {
    std::vector<Word> conjugators = irreducible_words(sys, d.conjugacy_bound);
    std::vector<FiniteFactor> kept;
    for (auto& f : factors) {
      bool drop = false;
      for (const FiniteFactor& k : kept) {
        if (k.order() < f.order()) continue;
        auto target = k.element_set();
        for (const Word& g : conjugators) {
          Word gi = inverse_word(sys, status, g);
          std::set<Word> image;
          for (const Word& e : f.elements)
            image.insert(normal_form(sys, gi + e + g));
          if (std::includes(target.begin(), target.end(), image.begin(),
                            image.end())) {
            drop = true;
            if (!g.empty()) d.merged_conjugates = true;
            break;
          }
        }
        if (drop) break;
      }
      if (!drop) kept.push_back(std::move(f));
    }
    factors = std::move(kept);
  }
  std::sort(factors.begin(), factors.end(),
            [](const FiniteFactor& a, const FiniteFactor& b) {
              if (a.order() != b.order()) return a.order() < b.order();
              return a.elements < b.elements;
            });
  d.finite_factors = std::move(factors);

  SmithForm sf = smith_normal_form(abelianized_matrix(sys));
  d.free_rank = sf.free_rank_defect;

  // Torsion cross-check, compared as multisets of prime-power components.
  std::vector<BigInt> system_torsion = primary_components(sf.invariant_factors);
  std::vector<BigInt> factor_torsion;
  for (const auto& f : d.finite_factors) {
    auto part = primary_components(detail::table_abelianization(f));
    factor_torsion.insert(factor_torsion.end(), part.begin(), part.end());
  }
  std::sort(factor_torsion.begin(), factor_torsion.end());
  d.consistency_ok = system_torsion == factor_torsion;
  if (!d.consistency_ok) {
    auto join = [](const std::vector<BigInt>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : ",") + x.str();
      return s.empty() ? std::string("-") : s;
    };
    d.consistency_detail = "abelianization torsion {" + join(system_torsion) +
                           "} vs factors {" + join(factor_torsion) + "}";
  }
  d.confidence = d.consistency_ok ? "exact" : "partial";
  return d;
}

struct CochetFactor {
  std::size_t order = 0;
  Word generator;
};

struct CochetReport {
  std::vector<CochetFactor> factors;
  std::size_t free_rank = 0;
  bool input_was_normalized = true;
};

/// For a special confluent group system, every finite factor of the
/// decomposition must be cyclic; each is reported with a certified
/// generator. A non-cyclic factor raises TheoremViolationError (a test
/// hook that must never fire on valid input).
inline CochetReport check_cochet(const RewritingSystem& sys) {
  if (!sys.flags().special) throw PreconditionError("special");
  if (!is_confluent(sys).confluent) throw PreconditionError("confluent");

  CochetReport report;
  const RewritingSystem* target = &sys;
  std::optional<NormalizationResult> norm;
  if (!sys.flags().normalized) {
    norm = normalize(sys);
    if (!norm->system.flags().special)
      throw TheoremViolationError(
          "normalization did not preserve the special property");
    target = &norm->system;
    report.input_was_normalized = false;
  }

  GroupStatus status = group_status(*target);
  if (status.answer != GroupAnswer::kYes) throw PreconditionError("group");
  PlainDecomposition d = decompose(*target, status);
  report.free_rank = d.free_rank;
  for (const FiniteFactor& f : d.finite_factors) {
    std::optional<std::size_t> gen;
    for (std::size_t i = 1; i < f.order(); ++i)
      if (detail::table_element_order(f, i) == f.order()) {
        gen = i;
        break;
      }
    if (!gen)
      throw TheoremViolationError(
          "special confluent system produced a non-cyclic finite factor of "
          "order " +
          std::to_string(f.order()));
    report.factors.push_back({f.order(), f.elements[*gen]});
  }
  return report;
}

}  // namespace strew
