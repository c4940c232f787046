#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hpp"

using namespace strew;
using testsupport::fixture;
using testsupport::w;

namespace {

IntegerMatrix make(std::size_t r, std::size_t c,
                   std::initializer_list<long long> vals) {
  IntegerMatrix m(r, c);
  std::size_t i = 0;
  for (long long v : vals) m.entries[i++] = v;
  return m;
}

std::vector<BigInt> factors_of(const SmithForm& sf) {
  return sf.invariant_factors;
}

const FiniteFactor* factor_of_order(const PlainDecomposition& d,
                                    std::size_t order) {
  for (const auto& f : d.finite_factors)
    if (f.order() == order) return &f;
  return nullptr;
}

std::multiset<std::size_t> element_orders(const FiniteFactor& f) {
  std::multiset<std::size_t> out;
  for (std::size_t i = 0; i < f.order(); ++i) {
    std::size_t cur = i, n = 1;
    while (cur != 0) {
      cur = f.table[cur][i];
      ++n;
    }
    out.insert(n);
  }
  return out;
}

}  // namespace

TEST_CASE("abelianized matrix examples") {
  SECTION("single involution") {
    auto m = abelianized_matrix(fixture("z2.mrs"));
    REQUIRE(m.rows == 1);
    REQUIRE(m.cols == 1);
    CHECK(m.at(0, 0) == 2);
  }
  SECTION("rows count letter occurrences") {
    auto m = abelianized_matrix(fixture("z2z3.mrs"));
    REQUIRE(m.rows == 5);
    REQUIRE(m.cols == 3);
    long long expect[5][3] = {
        {2, 0, 0}, {0, 1, 1}, {0, 1, 1}, {0, 2, -1}, {0, -1, 2}};
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(m.at(r, c) == expect[r][c]);
  }
  SECTION("free group pairs") {
    auto m = abelianized_matrix(fixture("free1.mrs"));
    REQUIRE(m.rows == 2);
    REQUIRE(m.cols == 2);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) CHECK(m.at(r, c) == 1);
  }
}

TEST_CASE("smith normal form examples") {
  SECTION("1x1") {
    auto sf = smith_normal_form(make(1, 1, {2}));
    CHECK(factors_of(sf) == std::vector<BigInt>{2});
    CHECK(sf.free_rank_defect == 0);
  }
  SECTION("diagonal 2,3 has invariant factors 1,6") {
    auto m = make(2, 2, {2, 0, 0, 3});
    // Oracle first: gcd of entries is 1, the only 2x2 minor is 6.
    CHECK(testsupport::invariant_factors_oracle(m) ==
          std::vector<BigInt>{1, 6});
    auto sf = smith_normal_form(m);
    CHECK(factors_of(sf) == std::vector<BigInt>{1, 6});
    CHECK(sf.free_rank_defect == 0);
  }
  SECTION("rank-deficient all-ones") {
    auto m = make(2, 2, {1, 1, 1, 1});
    CHECK(testsupport::invariant_factors_oracle(m) == std::vector<BigInt>{1});
    auto sf = smith_normal_form(m);
    CHECK(factors_of(sf) == std::vector<BigInt>{1});
    CHECK(sf.free_rank_defect == 1);
  }
  SECTION("zero and empty matrices") {
    auto sf0 = smith_normal_form(IntegerMatrix(0, 2));
    CHECK(sf0.invariant_factors.empty());
    CHECK(sf0.free_rank_defect == 2);
    auto sfz = smith_normal_form(make(2, 2, {0, 0, 0, 0}));
    CHECK(sfz.invariant_factors.empty());
    CHECK(sfz.free_rank_defect == 2);
  }
  SECTION("divisibility chain holds") {
    auto sf = smith_normal_form(make(3, 3, {2, 4, 4, -6, 6, 12, 10, 4, 16}));
    for (std::size_t i = 1; i < sf.invariant_factors.size(); ++i)
      CHECK(sf.invariant_factors[i] % sf.invariant_factors[i - 1] == 0);
  }
}

TEST_CASE("smith normal form agrees with the minors oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 4), entry(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    IntegerMatrix m(dim(rng), dim(rng));
    for (auto& e : m.entries) e = entry(rng);
    auto oracle = testsupport::invariant_factors_oracle(m);
    auto sf = smith_normal_form(m);
    INFO("trial " << trial);
    REQUIRE(sf.invariant_factors == oracle);
    REQUIRE(sf.free_rank_defect == m.cols - oracle.size());
  }
}

TEST_CASE("primary components") {
  CHECK(primary_components({BigInt(6)}) ==
        std::vector<BigInt>{2, 3});
  CHECK(primary_components({BigInt(1), BigInt(2), BigInt(2)}) ==
        std::vector<BigInt>{2, 2});
  CHECK(primary_components({BigInt(12)}) == std::vector<BigInt>{3, 4});
  CHECK(primary_components({BigInt(2), BigInt(3)}) ==
        primary_components({BigInt(6)}));
  CHECK(primary_components({}).empty());
}

TEST_CASE("decomposition fixtures") {
  SECTION("single involution") {
    auto sys = fixture("z2.mrs");
    auto d = decompose(sys, group_status(sys));
    CHECK(d.free_rank == 0);
    REQUIRE(d.finite_factors.size() == 1);
    CHECK(d.finite_factors[0].order() == 2);
    CHECK(d.consistency_ok);
    CHECK(d.confidence == "exact");
  }
  SECTION("free product of orders 2 and 3") {
    auto sys = fixture("z2z3.mrs");
    auto d = decompose(sys, group_status(sys));
    CHECK(d.free_rank == 0);
    REQUIRE(d.finite_factors.size() == 2);
    CHECK(d.finite_factors[0].order() == 2);
    CHECK(d.finite_factors[1].order() == 3);
    CHECK(d.confidence == "exact");
  }
  SECTION("two involutions stay separate factors") {
    auto sys = fixture("dinf.mrs");
    auto d = decompose(sys, group_status(sys));
    CHECK(d.free_rank == 0);
    REQUIRE(d.finite_factors.size() == 2);
    CHECK(d.finite_factors[0].order() == 2);
    CHECK(d.finite_factors[1].order() == 2);
    CHECK(d.finite_factors[0].elements != d.finite_factors[1].elements);
    CHECK(d.confidence == "exact");
  }
  SECTION("free groups have pure rank") {
    std::size_t n = 1;
    for (const char* name : {"free1.mrs", "free2.mrs", "free3.mrs"}) {
      auto sys = fixture(name);
      auto d = decompose(sys, group_status(sys));
      CHECK(d.free_rank == n++);
      CHECK(d.finite_factors.empty());
      CHECK(d.confidence == "exact");
    }
  }
  SECTION("Klein table is one factor of order 4") {
    auto sys = fixture("klein4.mrs");
    auto d = decompose(sys, group_status(sys));
    CHECK(d.free_rank == 0);
    REQUIRE(d.finite_factors.size() == 1);
    CHECK(d.finite_factors[0].order() == 4);
    CHECK(element_orders(d.finite_factors[0]) ==
          std::multiset<std::size_t>{1, 2, 2, 2});
    CHECK(d.confidence == "exact");
  }
  SECTION("symmetric group table") {
    auto sys = fixture("s3.mrs");
    auto d = decompose(sys, group_status(sys));
    CHECK(d.free_rank == 0);
    REQUIRE(d.finite_factors.size() == 1);
    CHECK(d.finite_factors[0].order() == 6);
    CHECK(element_orders(d.finite_factors[0]) ==
          std::multiset<std::size_t>{1, 2, 2, 2, 3, 3});
    CHECK(d.confidence == "exact");
  }
  SECTION("free-by-finite mix with conjugate duplicates merged") {
    auto sys = fixture("kleintail.mrs");
    auto d = decompose(sys, group_status(sys));
    CHECK(d.free_rank == 1);
    REQUIRE(d.finite_factors.size() == 1);
    CHECK(d.finite_factors[0].order() == 4);
    CHECK(d.merged_conjugates);
    CHECK(d.confidence == "exact");
  }
  SECTION("preconditions") {
    auto st_bad = GroupStatus{};
    REQUIRE_THROWS_AS(decompose(fixture("z2.mrs"), st_bad),
                      PreconditionError);
    auto unit = fixture("unit.mrs");
    REQUIRE_THROWS_AS(decompose(unit, GroupStatus{}), PreconditionError);
  }
}

TEST_CASE("cochet check") {
  SECTION("single involution") {
    auto r = check_cochet(fixture("z2.mrs"));
    REQUIRE(r.factors.size() == 1);
    CHECK(r.factors[0].order == 2);
    CHECK(r.free_rank == 0);
  }
  SECTION("two involutions") {
    auto r = check_cochet(fixture("dinf.mrs"));
    REQUIRE(r.factors.size() == 2);
    CHECK(r.factors[0].order == 2);
    CHECK(r.factors[1].order == 2);
    CHECK(r.free_rank == 0);
  }
  SECTION("inverse pair presents the integers") {
    auto r = check_cochet(fixture("free1.mrs"));
    CHECK(r.factors.empty());
    CHECK(r.free_rank == 1);
  }
  SECTION("non-special input is refused") {
    try {
      check_cochet(fixture("klein4.mrs"));
      FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
      CHECK(e.flag == "special");
    }
  }
  SECTION("generators certify the cyclic structure") {
    auto sys = fixture("z3.mrs");
    auto r = check_cochet(sys);
    REQUIRE(r.factors.size() == 1);
    CHECK(r.factors[0].order == 3);
    CHECK(order_of(sys, r.factors[0].generator, 10) == 3);
  }
}

TEST_CASE("decomposition is stable under alphabet relabeling") {
  auto sys = fixture("z2z3.mrs");
  auto d = decompose(sys, group_status(sys));
  // Same rules spelled over a permuted alphabet declaration.
  auto permuted = parse_system(
      "alphabet: B b a\nrule: a a ->\nrule: b B ->\nrule: B b ->\n"
      "rule: b b -> B\nrule: B B -> b\n");
  auto dp = decompose(permuted, group_status(permuted));
  CHECK(dp.free_rank == d.free_rank);
  REQUIRE(dp.finite_factors.size() == d.finite_factors.size());
  for (std::size_t i = 0; i < d.finite_factors.size(); ++i) {
    CHECK(dp.finite_factors[i].order() == d.finite_factors[i].order());
    CHECK(element_orders(dp.finite_factors[i]) ==
          element_orders(d.finite_factors[i]));
  }
  CHECK(dp.confidence == d.confidence);
}

TEST_CASE("factor tables replay through reduction") {
  for (const char* name :
       {"z2z3.mrs", "klein4.mrs", "s3.mrs", "kleintail.mrs"}) {
    INFO(name);
    auto sys = fixture(name);
    auto d = decompose(sys, group_status(sys));
    for (const auto& f : d.finite_factors) {
      REQUIRE(f.elements[0].empty());
      for (std::size_t i = 0; i < f.order(); ++i)
        for (std::size_t j = 0; j < f.order(); ++j)
          REQUIRE(normal_form(sys, f.elements[i] + f.elements[j]) ==
                  f.elements[f.table[i][j]]);
    }
  }
}
