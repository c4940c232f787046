#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support.hpp"

using namespace strew;

TEST_CASE("sampling is deterministic in the seed") {
  SamplerConfig cfg;
  cfg.alphabet_size = 3;
  cfg.max_rules = 4;
  cfg.max_lhs_len = 3;
  cfg.seed = 12345;
  auto a = sample_system(cfg);
  auto b = sample_system(cfg);
  CHECK(a == b);
  CHECK(render(a) == render(b));

  cfg.seed = 54321;
  auto c = sample_system(cfg);
  CHECK(render(a) != render(c));
}

TEST_CASE("sampled systems are monadic and length-reducing by construction") {
  for (int i = 0; i < 200; ++i) {
    SamplerConfig cfg;
    cfg.alphabet_size = 1 + i % 3;
    cfg.max_rules = 4;
    cfg.max_lhs_len = 3;
    cfg.seed = 100 + i;
    auto sys = sample_system(cfg);
    INFO("seed " << cfg.seed);
    REQUIRE(sys.flags().monadic);
    REQUIRE(sys.flags().length_reducing);
    REQUIRE(!sys.rules().empty());
    std::set<Word> lhs;
    for (const Rule& r : sys.rules()) {
      REQUIRE(r.lhs.size() >= 2);
      REQUIRE(r.lhs.size() <= 3);
      REQUIRE(lhs.insert(r.lhs).second);  // no duplicate left-hand sides
    }
  }
}

TEST_CASE("one-letter alphabet with short rules has a tiny rule space") {
  for (int i = 0; i < 50; ++i) {
    SamplerConfig cfg;
    cfg.alphabet_size = 1;
    cfg.max_rules = 1;
    cfg.max_lhs_len = 2;
    cfg.seed = 900 + i;
    auto sys = sample_system(cfg);
    REQUIRE(sys.rules().size() == 1);
    const Rule& r = sys.rules()[0];
    CHECK(r.lhs.size() == 2);   // the only legal lhs is aa
    CHECK(r.rhs.size() <= 1);   // rhs is empty or a
  }
}

TEST_CASE("special-only configuration forces empty right-hand sides") {
  for (int i = 0; i < 50; ++i) {
    SamplerConfig cfg;
    cfg.alphabet_size = 2;
    cfg.max_rules = 3;
    cfg.max_lhs_len = 3;
    cfg.allow_special_only = true;
    cfg.seed = 200 + i;
    auto sys = sample_system(cfg);
    REQUIRE(sys.flags().special);
  }
}

TEST_CASE("group rejection sampling") {
  SECTION("want zero returns nothing") {
    SamplerConfig cfg;
    cfg.seed = 7;
    auto [systems, stats] = sample_group_systems(cfg, 0, 1000);
    CHECK(systems.empty());
    CHECK(stats.found == 0);
  }
  SECTION("small alphabets yield group systems within budget") {
    SamplerConfig cfg;
    cfg.alphabet_size = 2;
    cfg.max_rules = 4;
    cfg.max_lhs_len = 3;
    cfg.seed = 31337;
    auto [systems, stats] = sample_group_systems(cfg, 25, 100000);
    REQUIRE(stats.found >= 1);
    CHECK(systems.size() == stats.found);
    for (const auto& sys : systems) {
      REQUIRE(sys.flags().monadic);
      REQUIRE(is_confluent(sys).confluent);
      auto norm = normalize(sys);
      REQUIRE(group_status(norm.system).answer == GroupAnswer::kYes);
    }
  }
  SECTION("deterministic batches") {
    SamplerConfig cfg;
    cfg.alphabet_size = 2;
    cfg.seed = 5150;
    auto [a, sa] = sample_group_systems(cfg, 5, 20000);
    auto [b, sb] = sample_group_systems(cfg, 5, 20000);
    REQUIRE(a.size() == b.size());
    CHECK(sa.attempts == sb.attempts);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(render(a[i]) == render(b[i]));
  }
  SECTION("special-only group batch passes the cyclic-factors check") {
    SamplerConfig cfg;
    cfg.alphabet_size = 2;
    cfg.max_rules = 3;
    cfg.max_lhs_len = 3;
    cfg.allow_special_only = true;
    cfg.seed = 777;
    auto [systems, stats] = sample_group_systems(cfg, 10, 50000);
    REQUIRE(stats.found >= 1);
    for (const auto& sys : systems) {
      auto report = check_cochet(sys);  // must not raise TheoremViolation
      for (const auto& f : report.factors) CHECK(f.order >= 2);
    }
  }
}

TEST_CASE("sampler config validation") {
  SamplerConfig cfg;
  cfg.alphabet_size = 0;
  REQUIRE_THROWS_AS(sample_system(cfg), Error);
  cfg.alphabet_size = 27;
  REQUIRE_THROWS_AS(sample_system(cfg), Error);
}
