#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "strew/errors.hpp"
#include "strew/system.hpp"

namespace strew {

// The `.mrs` text format, line-oriented UTF-8:
//   # comment
//   alphabet: a b B          (exactly one, before any rule)
//   rule: b B ->             (empty right-hand side)
//   rule: b b -> B
// Symbols are whitespace-delimited tokens.

namespace detail {

struct Token {
  std::string text;
  std::size_t col;  // 1-based column of first character
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

}  // namespace detail

inline RewritingSystem parse_system(std::string_view text) {
  std::vector<std::string> symbols;
  bool have_alphabet = false;
  std::vector<Rule> rules;
  Alphabet alphabet;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = eol == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0].text[0] == '#') continue;

    if (tokens[0].text == "alphabet:") {
      if (have_alphabet)
        throw SyntaxError("duplicate alphabet line", line_no, tokens[0].col);
      if (!rules.empty())
        throw SyntaxError("alphabet must precede rules", line_no);
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (!Alphabet::valid_symbol(tokens[i].text))
          throw SyntaxError("invalid symbol \"" + tokens[i].text + "\"",
                            line_no, tokens[i].col);
        alphabet.add(tokens[i].text, line_no);
      }
      have_alphabet = true;
    } else if (tokens[0].text == "rule:") {
      if (!have_alphabet)
        throw SyntaxError("rule before alphabet line", line_no, tokens[0].col);
      std::vector<Letter> lhs, rhs;
      bool seen_arrow = false;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (tokens[i].text == "->") {
          if (seen_arrow)
            throw SyntaxError("multiple \"->\" in rule", line_no,
                              tokens[i].col);
          seen_arrow = true;
          continue;
        }
        auto x = alphabet.find(tokens[i].text);
        if (!x)
          throw UnknownLetterError(tokens[i].text, line_no, tokens[i].col);
        (seen_arrow ? rhs : lhs).push_back(*x);
      }
      if (!seen_arrow)
        throw SyntaxError("rule missing \"->\"", line_no, tokens[0].col);
      if (lhs.empty()) throw EmptyLhsError(line_no);
      rules.push_back({Word(std::move(lhs)), Word(std::move(rhs))});
    } else {
      throw SyntaxError("expected \"alphabet:\", \"rule:\", or comment",
                        line_no, tokens[0].col);
    }
  }
  if (!have_alphabet) throw SyntaxError("missing alphabet line", line_no);
  return RewritingSystem(std::move(alphabet), std::move(rules));
}

/// Deterministic emitter: alphabet order preserved, rules in list order.
/// parse_system(render(sys)) reproduces an identical system.
inline std::string render(const RewritingSystem& sys) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& s : sys.alphabet().symbols()) out << ' ' << s;
  out << '\n';
  for (const Rule& r : sys.rules()) {
    out << "rule:";
    for (Letter x : r.lhs) out << ' ' << sys.alphabet().display(x);
    out << " ->";
    for (Letter x : r.rhs) out << ' ' << sys.alphabet().display(x);
    out << '\n';
  }
  return out.str();
}

/// Word syntax: whitespace-separated symbols, or (when no whitespace is
/// present) a string of single-character symbols. A bare string that is
/// itself one alphabet symbol is accepted either way.
inline Word parse_word(const Alphabet& alphabet, std::string_view text) {
  std::vector<Letter> letters;
  bool has_space = false;
  for (char c : text)
    if (std::isspace(static_cast<unsigned char>(c))) has_space = true;
  if (has_space) {
    for (const auto& tok : detail::tokenize(text)) {
      auto x = alphabet.find(tok.text);
      if (!x) throw UnknownLetterError(tok.text);
      letters.push_back(*x);
    }
    return Word(std::move(letters));
  }
  if (text.empty()) return Word{};
  if (auto whole = alphabet.find(text)) return Word::single(*whole);
  for (char c : text) {
    auto x = alphabet.find(std::string_view(&c, 1));
    if (!x) throw UnknownLetterError(std::string(1, c));
    letters.push_back(*x);
  }
  return Word(std::move(letters));
}

/// Symbols joined by spaces when any symbol is multi-character, otherwise
/// concatenated. Empty word renders as the empty string.
inline std::string render_word(const Alphabet& alphabet, const Word& w) {
  bool multi = false;
  for (const auto& s : alphabet.symbols())
    if (s.size() > 1) multi = true;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (multi && i) out += ' ';
    out += alphabet.display(w[i]);
  }
  return out;
}

inline RewritingSystem load_system(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

}  // namespace strew
