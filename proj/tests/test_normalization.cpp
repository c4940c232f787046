#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace strew;
using testsupport::fixture;
using testsupport::w;

namespace {

// Direct statement of the normalized property, independent of the cached
// flag: every lhs has length >= 2 and no proper subword of any lhs
// matches any lhs.
bool normalized_by_scan(const RewritingSystem& sys) {
  for (const Rule& r : sys.rules()) {
    if (r.lhs.size() < 2) return false;
    for (std::size_t pos = 0; pos < r.lhs.size(); ++pos)
      for (std::size_t len = 1; pos + len <= r.lhs.size(); ++len) {
        if (pos == 0 && len == r.lhs.size()) continue;  // not proper
        Word sub = r.lhs.subword(pos, len);
        for (const Rule& s : sys.rules())
          for (std::size_t o = 0; o + s.lhs.size() <= sub.size(); ++o)
            if (sub.contains_at(s.lhs, o)) return false;
      }
  }
  return true;
}

}  // namespace

TEST_CASE("already-normalized system is unchanged") {
  auto z2 = fixture("z2.mrs");
  auto nr = normalize(z2);
  CHECK(nr.system == z2);
  REQUIRE(nr.letter_map.size() == 1);
  CHECK(nr.letter_map[0] == w(z2, "a"));
}

TEST_CASE("unit rule elimination substitutes and deletes the letter") {
  auto sys = fixture("unit.mrs");  // b -> a, aa -> 1
  auto nr = normalize(sys);
  CHECK(nr.system.alphabet().size() == 1);
  CHECK(nr.system.alphabet().symbols()[0] == "a");
  REQUIRE(nr.system.rules().size() == 1);
  CHECK(nr.system.rules()[0].lhs == w(nr.system, "aa"));
  CHECK(nr.system.rules()[0].rhs.empty());
  // letter_map: a -> a, b -> a.
  CHECK(nr.letter_map[0] == w(nr.system, "a"));
  CHECK(nr.letter_map[1] == w(nr.system, "a"));
  CHECK(check_isomorphic_balls(sys, nr.system, nr.letter_map, 4));
}

TEST_CASE("lhs with reducible proper subword is rewritten away") {
  auto sys = parse_system("alphabet: a\nrule: a a ->\nrule: a a a -> a\n");
  auto nr = normalize(sys);
  REQUIRE(nr.system.rules().size() == 1);
  CHECK(nr.system.rules()[0].lhs == w(nr.system, "aa"));
  CHECK(nr.system.rules()[0].rhs.empty());
  CHECK(check_isomorphic_balls(sys, nr.system, nr.letter_map, 4));
}

TEST_CASE("normalize is idempotent") {
  for (const char* name : {"z2.mrs", "z2z3.mrs", "dinf.mrs", "klein4.mrs",
                           "s3.mrs", "kleintail.mrs", "unit.mrs"}) {
    INFO(name);
    auto nr = normalize(fixture(name));
    auto again = normalize(nr.system);
    CHECK(again.system == nr.system);
    for (std::size_t i = 0; i < again.letter_map.size(); ++i)
      CHECK(again.letter_map[i] ==
            Word::single(again.system.alphabet().letter(i)));
  }
}

TEST_CASE("normalized output satisfies the definition and stays convergent") {
  for (const char* name :
       {"z2.mrs", "z2z3.mrs", "klein4.mrs", "unit.mrs", "kleintail.mrs"}) {
    INFO(name);
    auto nr = normalize(fixture(name));
    CHECK(nr.system.flags().normalized);
    CHECK(nr.system.flags().monadic);
    CHECK(normalized_by_scan(nr.system));
    CHECK(is_confluent(nr.system).confluent);
  }
}

TEST_CASE("normalize preconditions") {
  SECTION("not monadic") {
    auto sys = parse_system("alphabet: a b\nrule: a a a -> b b\n");
    REQUIRE_THROWS_AS(normalize(sys), PreconditionError);
  }
  SECTION("rename cycle is not terminating") {
    auto sys = parse_system("alphabet: a b\nrule: a -> b\nrule: b -> a\n");
    try {
      normalize(sys);
      FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
      CHECK(e.flag == "terminating");
    }
  }
  SECTION("non-confluent length-reducing input is rejected") {
    try {
      normalize(fixture("conflicting.mrs"));
      FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
      CHECK(e.flag == "confluent");
    }
  }
  SECTION("no-op rules are dropped rather than looping") {
    auto sys = parse_system("alphabet: a\nrule: a -> a\nrule: a a ->\n");
    auto nr = normalize(sys);
    CHECK(nr.system.rules().size() == 1);
  }
}

TEST_CASE("ball isomorphism check") {
  auto z2 = fixture("z2.mrs");
  SECTION("identity map on identical systems") {
    std::vector<Word> id{w(z2, "a")};
    CHECK(check_isomorphic_balls(z2, z2, id, 3));
  }
  SECTION("vertex count mismatch fails") {
    auto padded = parse_system("alphabet: a c\nrule: a a ->\n");
    std::vector<Word> map{w(padded, "a"), w(padded, "a")};
    // z2 has fewer radius-3 vertices than z2-with-free-letter.
    CHECK_FALSE(check_isomorphic_balls(z2, padded, map, 3));
  }
  SECTION("wrong map fails even with matching counts") {
    auto d = fixture("dinf.mrs");
    std::vector<Word> swap_map{w(d, "b"), w(d, "a")};
    // Swapping a and b IS an automorphism of this system; the check passes.
    CHECK(check_isomorphic_balls(d, d, swap_map, 3));
    std::vector<Word> collapse{w(d, "a"), w(d, "a")};
    CHECK_FALSE(check_isomorphic_balls(d, d, collapse, 3));
  }
}

TEST_CASE("post-normalization letters are nontrivial and distinct") {
  for (const char* name : {"z2z3.mrs", "klein4.mrs", "kleintail.mrs"}) {
    INFO(name);
    auto nr = normalize(fixture(name));
    const auto& sys = nr.system;
    for (std::size_t i = 0; i < sys.alphabet().size(); ++i) {
      Word xi = Word::single(sys.alphabet().letter(i));
      CHECK_FALSE(normal_form(sys, xi).empty());
      for (std::size_t j = i + 1; j < sys.alphabet().size(); ++j) {
        Word xj = Word::single(sys.alphabet().letter(j));
        // Distinct letters are distinguished by some probe of length <= 2.
        bool distinguished = false;
        for (const Word& p : testsupport::all_words(sys.alphabet(), 2))
          if (normal_form(sys, xi + p) != normal_form(sys, xj + p))
            distinguished = true;
        CHECK(distinguished);
      }
    }
  }
}

TEST_CASE("render_with_map emits the normalized system plus comments") {
  auto sys = fixture("unit.mrs");
  auto nr = normalize(sys);
  std::string text = render_with_map(nr, sys.alphabet());
  CHECK(text.find("# map: b -> a") != std::string::npos);
  // Comment lines must not break reparsing.
  auto reparsed = parse_system(text);
  CHECK(reparsed == nr.system);
}

TEST_CASE("translate maps words over the original alphabet") {
  auto sys = fixture("unit.mrs");
  auto nr = normalize(sys);
  Word original = w(sys, "ab");  // over {a, b}
  Word image = nr.translate(original);
  CHECK(image == w(nr.system, "aa"));
  CHECK(normal_form(nr.system, image).empty());
}

TEST_CASE("normalization on sampled confluent systems") {
  std::size_t tested = 0;
  for (int i = 0; i < 150; ++i) {
    SamplerConfig cfg;
    cfg.alphabet_size = 1 + i % 3;
    cfg.max_rules = 4;
    cfg.max_lhs_len = 3;
    cfg.seed = 8000 + i;
    auto sys = sample_system(cfg);
    if (!is_confluent(sys).confluent) continue;
    NormalizationResult nr = normalize(sys);
    INFO("seed " << cfg.seed);
    REQUIRE(nr.system.flags().normalized);
    REQUIRE(normalized_by_scan(nr.system));
    REQUIRE(is_confluent(nr.system).confluent);
    REQUIRE(check_isomorphic_balls(sys, nr.system, nr.letter_map, 3));
    auto again = normalize(nr.system);
    REQUIRE(again.system == nr.system);
    ++tested;
  }
  CHECK(tested > 20);
}
