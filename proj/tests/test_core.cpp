#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hpp"

using namespace strew;
using testsupport::fixture;
using testsupport::show;
using testsupport::w;

TEST_CASE("parse minimal system") {
  auto sys = parse_system("alphabet: a\nrule: a a ->\n");
  REQUIRE(sys.alphabet().size() == 1);
  REQUIRE(sys.rules().size() == 1);
  CHECK(sys.rules()[0].lhs == w(sys, "aa"));
  CHECK(sys.rules()[0].rhs.empty());
  CHECK(sys.flags().length_reducing);
  CHECK(sys.flags().special);
  CHECK(sys.flags().monadic);
  CHECK(sys.flags().two_monadic);
  CHECK(sys.flags().normalized);
  CHECK(sys.flags().terminating);
}

TEST_CASE("parse rejects undeclared symbols") {
  REQUIRE_THROWS_AS(parse_system("alphabet: a b\nrule: a b -> c\n"),
                    UnknownLetterError);
  try {
    parse_system("alphabet: a b\nrule: a b -> c\n");
  } catch (const UnknownLetterError& e) {
    CHECK(e.symbol == "c");
    CHECK(e.line == 2);
  }
}

TEST_CASE("parse four-rule monadic system") {
  auto sys = parse_system(
      "alphabet: b B\nrule: b B ->\nrule: B b ->\nrule: b b -> B\n"
      "rule: B B -> b\n");
  REQUIRE(sys.rules().size() == 4);
  CHECK_FALSE(sys.flags().special);
  CHECK(sys.flags().monadic);
  CHECK(sys.flags().two_monadic);
  CHECK(sys.flags().normalized);
}

TEST_CASE("parse diagnostics") {
  SECTION("empty lhs") {
    REQUIRE_THROWS_AS(parse_system("alphabet: a\nrule: -> a\n"),
                      EmptyLhsError);
  }
  SECTION("duplicate letter") {
    REQUIRE_THROWS_AS(parse_system("alphabet: a a\n"), DuplicateLetterError);
  }
  SECTION("missing arrow") {
    REQUIRE_THROWS_AS(parse_system("alphabet: a\nrule: a a\n"), SyntaxError);
  }
  SECTION("rule before alphabet") {
    REQUIRE_THROWS_AS(parse_system("rule: a ->\nalphabet: a\n"), SyntaxError);
  }
  SECTION("duplicate alphabet line") {
    REQUIRE_THROWS_AS(parse_system("alphabet: a\nalphabet: b\n"), SyntaxError);
  }
  SECTION("garbage line with position") {
    try {
      parse_system("alphabet: a\nnot-a-line\n");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.line == 2);
      CHECK(e.col == 1);
    }
  }
  SECTION("comments and blank lines are skipped") {
    auto sys = parse_system("# header\n\nalphabet: a\n  # indented comment\n"
                            "rule: a a ->\n");
    CHECK(sys.rules().size() == 1);
  }
}

TEST_CASE("exact duplicate rules are dropped") {
  auto sys = parse_system("alphabet: a\nrule: a a ->\nrule: a a ->\n");
  CHECK(sys.rules().size() == 1);
}

TEST_CASE("classification follows the definitions") {
  SECTION("not length-reducing") {
    auto sys = fixture("nonlr.mrs");
    CHECK_FALSE(sys.flags().length_reducing);
    CHECK_FALSE(sys.flags().terminating);
    CHECK_FALSE(sys.flags().two_monadic);
  }
  SECTION("normalized by direct subword scan") {
    auto sys = fixture("z2z3.mrs");
    // Oracle: every proper subword of every lhs matches no lhs.
    bool all_irreducible = true;
    for (const Rule& r : sys.rules())
      for (std::size_t pos = 0; pos < r.lhs.size(); ++pos)
        for (std::size_t len = 1; pos + len <= r.lhs.size(); ++len) {
          if (len == r.lhs.size()) continue;
          Word sub = r.lhs.subword(pos, len);
          for (const Rule& s : sys.rules())
            for (std::size_t o = 0; o + s.lhs.size() <= sub.size(); ++o)
              if (sub.contains_at(s.lhs, o)) all_irreducible = false;
        }
    CHECK(all_irreducible);
    CHECK(sys.flags().normalized);
  }
  SECTION("lhs containing another lhs is not normalized") {
    auto sys = parse_system("alphabet: a b\nrule: a a ->\nrule: b a a -> b\n");
    CHECK_FALSE(sys.flags().normalized);
  }
  SECTION("unit rule breaks normalized") {
    CHECK_FALSE(fixture("unit.mrs").flags().normalized);
  }
}

TEST_CASE("reduce examples") {
  auto z2 = fixture("z2.mrs");
  SECTION("aaa reduces to a in one step") {
    auto trace = reduce(z2, w(z2, "aaa"));
    CHECK(trace.result == w(z2, "a"));
    CHECK(trace.steps.size() == 1);
  }
  SECTION("bbb reduces to the empty word") {
    auto z2z3 = fixture("z2z3.mrs");
    auto trace = reduce(z2z3, w(z2z3, "bbb"));
    CHECK(trace.result.empty());
  }
  SECTION("empty word is already reduced") {
    auto trace = reduce(z2, Word{});
    CHECK(trace.result.empty());
    CHECK(trace.steps.empty());
  }
  SECTION("non-length-reducing without budget is refused") {
    auto nonlr = fixture("nonlr.mrs");
    REQUIRE_THROWS_AS(reduce(nonlr, w(nonlr, "ab")), NonTerminatingRiskError);
    auto trace = reduce(nonlr, w(nonlr, "ab"), Strategy::leftmost(), 10);
    CHECK(trace.result == w(nonlr, "ba"));
  }
}

TEST_CASE("is_reducible examples") {
  auto sys = parse_system("alphabet: a b\nrule: a a ->\n");
  CHECK_FALSE(find_redex(sys, w(sys, "aba")).has_value());
  auto redex = find_redex(sys, w(sys, "baab"));
  REQUIRE(redex);
  CHECK(redex->pos == 1);
  CHECK(redex->rule == 0);

  SECTION("leftmost start wins over later rule matches") {
    auto sys = parse_system("alphabet: b B\nrule: b b -> B\nrule: b B ->\n");
    auto r = find_redex(sys, w(sys, "bbB"));
    REQUIRE(r);
    CHECK(r->pos == 0);
    CHECK(r->rule == 0);
  }
  SECTION("same position ties break to lowest rule index") {
    auto sys = fixture("conflicting.mrs");
    auto r = find_redex(sys, w(sys, "aaa"));
    REQUIRE(r);
    CHECK(r->pos == 0);
    CHECK(r->rule == 0);
  }
}

TEST_CASE("pattern automaton agrees with naive scanning") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    SamplerConfig cfg;
    cfg.alphabet_size = 1 + trial % 3;
    cfg.max_rules = 4;
    cfg.max_lhs_len = 3;
    cfg.seed = rng();
    auto sys = sample_system(cfg);
    std::uniform_int_distribution<std::size_t> len_dist(0, 9);
    std::uniform_int_distribution<std::size_t> letter_dist(
        0, sys.alphabet().size() - 1);
    for (int i = 0; i < 20; ++i) {
      std::vector<Letter> letters;
      std::size_t len = len_dist(rng);
      for (std::size_t j = 0; j < len; ++j)
        letters.push_back(sys.alphabet().letter(letter_dist(rng)));
      Word word(std::move(letters));

      // Naive all-occurrence scan.
      std::vector<PatternAutomaton::Redex> naive;
      for (std::size_t pos = 0; pos < word.size(); ++pos)
        for (std::size_t r = 0; r < sys.rules().size(); ++r)
          if (word.contains_at(sys.rules()[r].lhs, pos))
            naive.push_back({pos, r});

      auto got = sys.automaton().collect(word);
      REQUIRE(got == naive);
      auto lm = sys.automaton().leftmost(word);
      auto rm = sys.automaton().rightmost(word);
      if (naive.empty()) {
        CHECK_FALSE(lm.has_value());
        CHECK_FALSE(rm.has_value());
      } else {
        REQUIRE(lm.has_value());
        CHECK(*lm == naive.front());
        REQUIRE(rm.has_value());
        // Rightmost start, lowest rule index at that start.
        PatternAutomaton::Redex want = naive.back();
        for (const auto& cand : naive)
          if (cand.pos == want.pos && cand.rule < want.rule) want = cand;
        CHECK(rm->pos == want.pos);
        CHECK(rm->rule == want.rule);
      }
    }
  }
}

TEST_CASE("render round-trips") {
  for (const char* name :
       {"z2.mrs", "z3.mrs", "z2z3.mrs", "dinf.mrs", "free1.mrs", "free2.mrs",
        "free3.mrs", "klein4.mrs", "s3.mrs", "z4table.mrs", "conflicting.mrs",
        "bicyclic.mrs", "nonlr.mrs", "unit.mrs"}) {
    auto sys = fixture(name);
    auto reparsed = parse_system(render(sys));
    CHECK(reparsed == sys);
    CHECK(render(reparsed) == render(sys));
  }
}

TEST_CASE("trace replays to the result") {
  auto z2z3 = fixture("z2z3.mrs");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> letter_dist(
      0, z2z3.alphabet().size() - 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<Letter> letters;
    for (int j = 0; j < 10; ++j)
      letters.push_back(z2z3.alphabet().letter(letter_dist(rng)));
    Word word(std::move(letters));
    auto trace = reduce(z2z3, word, Strategy::random(i));
    Word replay = word;
    for (const auto& step : trace.steps) {
      REQUIRE(step.before == replay);
      REQUIRE(replay.contains_at(z2z3.rules()[step.rule_index].lhs,
                                 step.position));
      replay = apply_rule_at(z2z3, replay, step.position, step.rule_index);
      REQUIRE(step.after == replay);
    }
    CHECK(replay == trace.result);
    CHECK_FALSE(is_reducible(z2z3, trace.result));
    CHECK(trace.steps.size() <= word.size());  // each step shortens
  }
}

TEST_CASE("strategies agree on confluent systems") {
  SECTION("exhaustive short words") {
    for (const char* name : {"z2.mrs", "z2z3.mrs", "dinf.mrs", "klein4.mrs"}) {
      auto sys = fixture(name);
      for (const Word& word : testsupport::all_words(sys.alphabet(), 6)) {
        Word l = reduce(sys, word, Strategy::leftmost()).result;
        Word r = reduce(sys, word, Strategy::rightmost()).result;
        Word s = reduce(sys, word, Strategy::random(42)).result;
        REQUIRE(l == r);
        REQUIRE(l == s);
      }
    }
  }
  SECTION("random longer words") {
    auto sys = fixture("z2z3.mrs");
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> letter_dist(
        0, sys.alphabet().size() - 1);
    std::uniform_int_distribution<std::size_t> len_dist(9, 20);
    for (int i = 0; i < 10000; ++i) {
      std::vector<Letter> letters;
      std::size_t len = len_dist(rng);
      for (std::size_t j = 0; j < len; ++j)
        letters.push_back(sys.alphabet().letter(letter_dist(rng)));
      Word word(std::move(letters));
      Word l = reduce(sys, word, Strategy::leftmost()).result;
      Word r = reduce(sys, word, Strategy::rightmost()).result;
      Word s = reduce(sys, word, Strategy::random(i)).result;
      REQUIRE(l == r);
      REQUIRE(l == s);
    }
  }
}

TEST_CASE("normal_form matches reduce") {
  auto sys = fixture("z2z3.mrs");
  for (const Word& word : testsupport::all_words(sys.alphabet(), 7))
    REQUIRE(normal_form(sys, word) == reduce(sys, word).result);
}

TEST_CASE("word parsing modes") {
  auto sys = fixture("z2z3.mrs");
  CHECK(w(sys, "a b B") == w(sys, "abB"));
  CHECK(w(sys, "").empty());
  CHECK_THROWS_AS(w(sys, "ax"), UnknownLetterError);

  auto multi = parse_system("alphabet: g1 g2\nrule: g1 g2 ->\n");
  Word word = parse_word(multi.alphabet(), "g1 g2 g1");
  CHECK(word.size() == 3);
  CHECK(render_word(multi.alphabet(), word) == "g1 g2 g1");
  // A bare multi-character token that is a single symbol.
  CHECK(parse_word(multi.alphabet(), "g1").size() == 1);
}
