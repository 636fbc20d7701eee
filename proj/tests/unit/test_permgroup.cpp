#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "luks/permgroup.hpp"
#include "luks/permutation.hpp"
#include "luks/random.hpp"
#include "support.hpp"

using namespace luks;
using luks::testing::WreathAmbient;

namespace {

Permutation cyc(std::size_t m, std::initializer_list<std::initializer_list<Point>> cycles) {
  return Permutation::from_cycles(m, cycles);
}

std::vector<Permutation> sorted_group(const std::vector<Permutation>& gens, std::size_t m) {
  return enumerate_group(gens, m).value();
}

}  // namespace

TEST_CASE("compose evaluates p after q") {
  const auto id = Permutation::identity(3);
  const auto p = cyc(3, {{0, 1}});
  const auto q = cyc(3, {{1, 2}});
  CHECK(compose(id, p) == p);
  CHECK(compose(p, p).is_identity());
  // x = 0: q 0 -> 0, p 0 -> 1; x = 1: 1 -> 2 -> 2; x = 2: 2 -> 1 -> 0.
  CHECK(compose(p, q) == Permutation(std::vector<Point>{1, 2, 0}));
  CHECK_THROWS_AS(compose(p, Permutation::identity(4)), std::invalid_argument);
}

TEST_CASE("permutation basics") {
  CHECK_THROWS_AS(Permutation(std::vector<Point>{0, 0}), std::invalid_argument);
  const auto p = cyc(5, {{0, 3, 1}});
  CHECK(compose(p, p.inverse()).is_identity());
  CHECK(p.to_cycle_string() == "(0 3 1)");
  CHECK(Permutation::identity(3).to_cycle_string() == "()");
  CHECK(p.extended(7).degree() == 7);
  CHECK(p.extended(7)(6) == 6);
  CHECK(cyc(4, {{0, 1}}).restricted(2) == cyc(2, {{0, 1}}));
}

TEST_CASE("orbit") {
  CHECK(orbit(std::vector<Permutation>{Permutation::identity(5)}, 3) == std::vector<Point>{3});
  CHECK(orbit(std::vector<Permutation>{cyc(4, {{0, 1}})}, 0) == std::vector<Point>{0, 1});
  CHECK(orbit(std::vector<Permutation>{cyc(4, {{0, 1}}), cyc(4, {{1, 2}})}, 0) == std::vector<Point>{0, 1, 2});
}

TEST_CASE("is_transitive") {
  const std::vector<Point> one{2};
  CHECK(is_transitive(Sgs(3), one));
  const std::vector<Point> four{0, 1, 2, 3};
  CHECK_FALSE(is_transitive(Sgs(4, {cyc(4, {{0, 1}})}), four));
  CHECK(is_transitive(Sgs(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})}), four));
  CHECK_THROWS_AS(is_transitive(Sgs(4, {cyc(4, {{0, 3}})}), std::vector<Point>{0, 1}), std::invalid_argument);
}

TEST_CASE("two_block_system") {
  SUBCASE("degree two") {
    const auto b = two_block_system(Sgs(2, {cyc(2, {{0, 1}})}), std::vector<Point>{0, 1});
    CHECK(b.first == std::vector<Point>{0});
    CHECK(b.second == std::vector<Point>{1});
  }
  SUBCASE("Klein four group: some invariant split") {
    const Sgs g(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})});
    const auto b = two_block_system(g, std::vector<Point>{0, 1, 2, 3});
    REQUIRE(b.first.size() == 2);
    const auto all = enumerate_group(g.gens, 4).value();
    for (const auto& p : all) {
      std::set<Point> image;
      for (Point x : b.first) image.insert(p(x));
      const std::set<Point> first(b.first.begin(), b.first.end());
      const std::set<Point> second(b.second.begin(), b.second.end());
      CHECK((image == first || image == second));
    }
  }
  SUBCASE("four-cycle has the unique split {0,2} {1,3}") {
    const auto b = two_block_system(Sgs(4, {cyc(4, {{0, 1, 2, 3}})}), std::vector<Point>{0, 1, 2, 3});
    CHECK(b.first == std::vector<Point>{0, 2});
    CHECK(b.second == std::vector<Point>{1, 3});
  }
  SUBCASE("rejects bad inputs") {
    CHECK_THROWS_AS(two_block_system(Sgs(4, {cyc(4, {{0, 1}})}), std::vector<Point>{0, 1, 2, 3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(two_block_system(Sgs(1), std::vector<Point>{0}), std::invalid_argument);
  }
}

TEST_CASE("index2_sgs") {
  SUBCASE("everything is a member") {
    const Sgs g(4, {cyc(4, {{0, 1}}), cyc(4, {{2, 3}})});
    const auto h = index2_sgs(g, [](const Permutation&) { return true; });
    CHECK(h.gens == g.gens);
  }
  SUBCASE("<(0 1)> fixing 0 is trivial") {
    const auto h = index2_sgs(Sgs(2, {cyc(2, {{0, 1}})}), [](const Permutation& p) { return p(0) == 0; });
    CHECK(group_order(h) == 1);
  }
  SUBCASE("<(0 1), (2 3)> fixing 0 is <(2 3)>") {
    const Sgs g(4, {cyc(4, {{0, 1}}), cyc(4, {{2, 3}})});
    const auto h = index2_sgs(g, [](const Permutation& p) { return p(0) == 0; });
    CHECK(sorted_group(h.gens, 4) == sorted_group({cyc(4, {{2, 3}})}, 4));
  }
}

TEST_CASE("coset_union") {
  const auto a = Coset(cyc(4, {{0, 1}}), Sgs(4));
  const auto b = Coset(cyc(4, {{2, 3}}), Sgs(4));
  CHECK(coset_union(Coset::empty_set(), Coset::empty_set()).empty());
  CHECK(luks::testing::elements(coset_union(a, Coset::empty_set())) == luks::testing::elements(a));
  CHECK(luks::testing::elements(coset_union(Coset::empty_set(), a)) == luks::testing::elements(a));
  const auto u = coset_union(a, b);
  const std::vector<Permutation> expected{cyc(4, {{2, 3}}), cyc(4, {{0, 1}})};
  auto got = luks::testing::elements(u);
  auto want = expected;
  std::sort(want.begin(), want.end());
  CHECK(got == want);
  CHECK(is_smooth(u.sub()));
}

TEST_CASE("group_order") {
  CHECK(group_order(std::vector<Permutation>{Permutation::identity(3)}, 3) == 1);
  CHECK(group_order(std::vector<Permutation>{cyc(3, {{0, 1}})}, 3) == 2);
  CHECK(group_order(std::vector<Permutation>{cyc(4, {{0, 1}}), cyc(4, {{2, 3}})}, 4) == 4);
  // Sym(5) has 120 elements; cap below that overflows.
  CHECK_FALSE(group_order(std::vector<Permutation>{cyc(5, {{0, 1}}), cyc(5, {{0, 1, 2, 3, 4}})}, 5, 100));
}

TEST_CASE("is_smooth") {
  CHECK(is_smooth(Sgs(4, {cyc(4, {{0, 1}}), cyc(4, {{2, 3}})})));
  CHECK_FALSE(is_smooth(Sgs(4, {cyc(4, {{0, 1, 2, 3}})})));
  CHECK(is_smooth(Sgs(4, {cyc(4, {{0, 2}, {1, 3}}), cyc(4, {{0, 1, 2, 3}})})));
}

TEST_CASE("random 2-groups: index2 subgroups and block systems by enumeration") {
  Rng rng(20261015);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 2 + rng.below(11);
    WreathAmbient ambient(m, rng);
    const Sgs g = luks::testing::random_two_group(ambient, rng, 256);
    REQUIRE(is_smooth(g));
    const auto all = enumerate_group(g.gens, m).value();

    std::vector<Point> points(m);
    for (Point i = 0; i < m; ++i) points[i] = i;
    for (const auto& orb : orbits_on(g, points)) {
      if (orb.size() < 2) continue;
      const auto blocks = two_block_system(g, orb);
      CHECK(blocks.first.size() == blocks.second.size());
      const std::set<Point> first(blocks.first.begin(), blocks.first.end());
      auto keeps = [&](const Permutation& p) { return first.count(p(blocks.first.front())) > 0; };
      for (const auto& p : all) {
        std::set<Point> image;
        for (Point x : blocks.first) image.insert(p(x));
        CHECK((image == first || image == std::set<Point>(blocks.second.begin(), blocks.second.end())));
      }
      const Sgs h = index2_sgs(g, keeps);
      CHECK(is_smooth(h));
      std::vector<Permutation> expected;
      std::copy_if(all.begin(), all.end(), std::back_inserter(expected), keeps);
      CHECK(enumerate_group(h.gens, m).value() == expected);
      CHECK(expected.size() * 2 == all.size());
    }
  }
}
