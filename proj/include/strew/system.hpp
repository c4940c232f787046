#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strew/errors.hpp"
#include "strew/word.hpp"

namespace strew {

/// Ordered list of display symbols. Symbols are whitespace-free printable
/// tokens, pairwise distinct, and neither "#" nor "->".
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) {
    if (symbols.size() > 255)
      throw SyntaxError("alphabet too large (max 255 letters)", 0);
    for (auto& s : symbols) add(std::move(s));
  }

  static bool valid_symbol(std::string_view s) {
    if (s.empty() || s == "#" || s == "->") return false;
    for (char c : s)
      if (static_cast<unsigned char>(c) <= ' ' || c == 0x7f) return false;
    return true;
  }

  void add(std::string symbol, std::size_t line = 0) {
    if (!valid_symbol(symbol))
      throw SyntaxError("invalid symbol \"" + symbol + "\"", line);
    if (index_.count(symbol)) throw DuplicateLetterError(symbol, line);
    if (symbols_.size() >= 255)
      throw SyntaxError("alphabet too large (max 255 letters)", line);
    index_.emplace(symbol, Letter{static_cast<std::uint8_t>(symbols_.size())});
    symbols_.push_back(std::move(symbol));
  }

  std::size_t size() const { return symbols_.size(); }
  const std::string& display(Letter x) const { return symbols_[x.id]; }
  Letter letter(std::size_t i) const {
    return Letter{static_cast<std::uint8_t>(i)};
  }

  std::optional<Letter> find(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::string>& symbols() const { return symbols_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, Letter, std::less<>> index_;
};

struct Rule {
  Word lhs;
  Word rhs;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Property flags computed literally from the rule set. `terminating` is
/// true exactly when `length_reducing` holds; otherwise termination is
/// unknown and reported false.
struct Classification {
  bool finite = true;
  bool length_reducing = false;
  bool special = false;
  bool monadic = false;
  bool two_monadic = false;
  bool normalized = false;
  bool terminating = false;
  friend bool operator==(const Classification&, const Classification&) =
      default;
};

/// Aho-Corasick matcher over all rule left-hand sides, built once per
/// system. Reduction repeatedly scans words, so matching is the hot path.
class PatternAutomaton {
 public:
  struct Redex {
    std::size_t pos = 0;   // start position of the lhs occurrence
    std::size_t rule = 0;  // rule index
    friend bool operator==(const Redex&, const Redex&) = default;
  };

  PatternAutomaton() = default;

  PatternAutomaton(std::size_t alphabet_size, const std::vector<Rule>& rules)
      : sigma_(alphabet_size) {
    nodes_.push_back(Node(sigma_));
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const Word& pat = rules[r].lhs;
      max_pattern_ = std::max(max_pattern_, pat.size());
      std::size_t s = 0;
      for (Letter x : pat) {
        int32_t& nxt = nodes_[s].next[x.id];
        if (nxt < 0) {
          nxt = static_cast<int32_t>(nodes_.size());
          nodes_.push_back(Node(sigma_));
          nodes_.back().depth = nodes_[s].depth + 1;
        }
        s = static_cast<std::size_t>(nxt);
      }
      nodes_[s].rules.push_back(r);
    }
    for (auto& n : nodes_) std::sort(n.rules.begin(), n.rules.end());
    // Failure links + dense goto via BFS.
    std::vector<std::size_t> queue;
    for (std::size_t c = 0; c < sigma_; ++c) {
      int32_t& nxt = nodes_[0].next[c];
      if (nxt < 0) {
        nxt = 0;
      } else {
        nodes_[nxt].fail = 0;
        queue.push_back(static_cast<std::size_t>(nxt));
      }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t s = queue[qi];
      std::size_t f = static_cast<std::size_t>(nodes_[s].fail);
      nodes_[s].out_link =
          nodes_[f].rules.empty() ? nodes_[f].out_link : static_cast<int32_t>(f);
      for (std::size_t c = 0; c < sigma_; ++c) {
        int32_t& nxt = nodes_[s].next[c];
        if (nxt < 0) {
          nxt = nodes_[f].next[c];
        } else {
          nodes_[nxt].fail = nodes_[f].next[c];
          queue.push_back(static_cast<std::size_t>(nxt));
        }
      }
    }
  }

  std::size_t max_pattern() const { return max_pattern_; }

  /// Leftmost occurrence with start >= from; ties at the same start go to
  /// the lowest rule index.
  std::optional<Redex> leftmost(const Word& w, std::size_t from = 0) const {
    if (max_pattern_ == 0) return std::nullopt;
    std::optional<Redex> best;
    std::size_t s = 0;
    for (std::size_t i = from; i < w.size(); ++i) {
      s = static_cast<std::size_t>(nodes_[s].next[w[i].id]);
      visit_matches(s, i, [&](std::size_t start, std::size_t rule) {
        if (!best || start < best->pos ||
            (start == best->pos && rule < best->rule))
          best = Redex{start, rule};
      });
      // Every pattern starting at best->pos ends by best->pos+max-1; nothing
      // later can start earlier.
      if (best && i + 1 >= best->pos + max_pattern_) break;
    }
    return best;
  }

  /// Rightmost start; ties to the lowest rule index.
  std::optional<Redex> rightmost(const Word& w) const {
    std::optional<Redex> best;
    std::size_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      s = static_cast<std::size_t>(nodes_[s].next[w[i].id]);
      visit_matches(s, i, [&](std::size_t start, std::size_t rule) {
        if (!best || start > best->pos ||
            (start == best->pos && rule < best->rule))
          best = Redex{start, rule};
      });
    }
    return best;
  }

  /// All occurrences, sorted by (start, rule).
  std::vector<Redex> collect(const Word& w) const {
    std::vector<Redex> out;
    std::size_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      s = static_cast<std::size_t>(nodes_[s].next[w[i].id]);
      visit_matches(s, i, [&](std::size_t start, std::size_t rule) {
        out.push_back(Redex{start, rule});
      });
    }
    std::sort(out.begin(), out.end(), [](const Redex& a, const Redex& b) {
      return a.pos != b.pos ? a.pos < b.pos : a.rule < b.rule;
    });
    return out;
  }

 private:
  struct Node {
    explicit Node(std::size_t sigma) : next(sigma, -1) {}
    std::vector<int32_t> next;
    int32_t fail = 0;
    int32_t out_link = -1;
    std::uint32_t depth = 0;
    std::vector<std::size_t> rules;
  };

  template <typename F>
  void visit_matches(std::size_t s, std::size_t end, F&& f) const {
    for (int32_t t = static_cast<int32_t>(s); t >= 0;
         t = nodes_[t].out_link) {
      const Node& n = nodes_[static_cast<std::size_t>(t)];
      for (std::size_t r : n.rules) f(end + 1 - n.depth, r);
      if (t == 0) break;
    }
  }

  std::size_t sigma_ = 0;
  std::size_t max_pattern_ = 0;
  std::vector<Node> nodes_;
};

/// A finite string-rewriting system (alphabet, rules) with cached
/// classification flags and a prebuilt pattern automaton. Immutable after
/// construction; safe to share across threads.
class RewritingSystem {
 public:
  RewritingSystem(Alphabet alphabet, std::vector<Rule> rules)
      : alphabet_(std::move(alphabet)) {
    for (const Rule& r : rules) {
      if (r.lhs.empty()) throw EmptyLhsError();
      for (Letter x : r.lhs) check_letter(x);
      for (Letter x : r.rhs) check_letter(x);
      if (std::find(rules_.begin(), rules_.end(), r) == rules_.end())
        rules_.push_back(r);
    }
    automaton_ = PatternAutomaton(alphabet_.size(), rules_);
    flags_ = compute_flags();
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Classification& flags() const { return flags_; }
  const PatternAutomaton& automaton() const { return automaton_; }

  std::size_t max_lhs_length() const { return automaton_.max_pattern(); }

  friend bool operator==(const RewritingSystem& a, const RewritingSystem& b) {
    return a.alphabet_ == b.alphabet_ && a.rules_ == b.rules_;
  }

 private:
  void check_letter(Letter x) const {
    if (x.id >= alphabet_.size())
      throw UnknownLetterError("#" + std::to_string(int(x.id)));
  }

  Classification compute_flags() const {
    Classification c;
    c.finite = true;
    c.length_reducing = true;
    c.special = true;
    c.monadic = true;
    bool lhs_at_most_2 = true;
    for (const Rule& r : rules_) {
      if (r.rhs.size() >= r.lhs.size()) c.length_reducing = false;
      if (!r.rhs.empty()) c.special = false;
      if (r.rhs.size() > 1) c.monadic = false;
      if (r.lhs.size() > 2) lhs_at_most_2 = false;
    }
    c.two_monadic = lhs_at_most_2 && c.length_reducing;
    c.terminating = c.length_reducing;
    c.normalized = compute_normalized();
    return c;
  }

  // Normalized: every lhs has length >= 2 and no lhs occurs as a proper
  // subword of any lhs.
  bool compute_normalized() const {
    for (const Rule& r : rules_)
      if (r.lhs.size() < 2) return false;
    for (const Rule& r : rules_) {
      for (const Rule& s : rules_) {
        if (s.lhs.size() > r.lhs.size()) continue;
        for (std::size_t pos = 0; pos + s.lhs.size() <= r.lhs.size(); ++pos) {
          if (pos == 0 && s.lhs.size() == r.lhs.size()) continue;
          if (r.lhs.contains_at(s.lhs, pos)) return false;
        }
      }
    }
    return true;
  }

  Alphabet alphabet_;
  std::vector<Rule> rules_;
  Classification flags_;
  PatternAutomaton automaton_;
};

inline Classification classify(const RewritingSystem& sys) {
  return sys.flags();
}

}  // namespace strew
