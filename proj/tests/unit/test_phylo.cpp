#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "luks/harness.hpp"
#include "luks/phylo.hpp"
#include "luks/random.hpp"

using namespace luks;

namespace {

PhyloNetwork cherry(const std::string& x, const std::string& y) {
  PhyloNetwork n;
  const auto r = n.add_node();
  const auto a = n.add_node(x);
  const auto b = n.add_node(y);
  n.add_arc(r, a);
  n.add_arc(r, b);
  return n;
}

std::size_t count_kind(const PhyloNetwork& n, NodeKind kind) {
  std::size_t k = 0;
  for (NodeIndex v = 0; v < n.node_count(); ++v) k += n.kind(v) == kind;
  return k;
}

std::vector<NodeIndex> shuffled(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_permutation(n, rng);
}

}  // namespace

TEST_CASE("validate_network") {
  CHECK(validate_network(cherry("a", "b")).ok());

  PhyloNetwork bad;
  for (int i = 0; i < 6; ++i) bad.add_node(i >= 3 ? std::optional<std::string>("t" + std::to_string(i)) : std::nullopt);
  // 0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3 ... node 3 then has in 2, out 2.
  bad.add_arc(0, 1);
  bad.add_arc(0, 2);
  bad.add_arc(1, 3);
  bad.add_arc(2, 3);
  bad.add_arc(3, 4);
  bad.add_arc(3, 5);
  CHECK_FALSE(validate_network(bad).ok());

  PhyloNetwork unlabeled;
  unlabeled.add_node();
  unlabeled.add_node("a");
  unlabeled.add_node();
  unlabeled.add_arc(0, 1);
  unlabeled.add_arc(0, 2);
  CHECK_FALSE(validate_network(unlabeled).ok());

  PhyloNetwork two_roots = cherry("a", "b");
  two_roots.add_node("c");
  CHECK_FALSE(validate_network(two_roots).ok());
  CHECK_THROWS_AS(two_roots.root(), InputError);

  CHECK(validate_network(random_network(50, 0.5, 1)).ok());
  CHECK_THROWS_AS(cherry("a", "b").add_arc(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(cherry("a", "b").add_arc(0, 1), std::invalid_argument);
}

TEST_CASE("reduction to a colored graph") {
  const auto net = cherry("a", "b");
  TaxonTable taxa;
  const auto red = reduce_to_colored(net, taxa);
  CHECK(red.graph.node_count() == net.node_count() + net.arc_count());
  CHECK(red.graph.node_count() == 5);
  CHECK(red.graph.edge_count() == 4);
  for (NodeIndex v = 0; v < red.graph.node_count(); ++v) CHECK(red.graph.degree(v) <= 2);
  CHECK(red.graph.color(3) == reserved::kMidpointColor);
  CHECK(red.graph.color(1) != red.graph.color(2));
  CHECK(red.graph.edge_label(0, 3) == reserved::kArcOutLabel);
  CHECK(red.graph.edge_label(3, 1) == reserved::kArcInLabel);

  TaxonTable shared;
  const auto one = reduce_to_colored(cherry("x", "y"), shared);
  const auto two = reduce_to_colored(cherry("y", "x"), shared);
  CHECK(one.graph.color(1) == two.graph.color(2));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    TaxonTable t;
    CHECK(validate(reduce_to_colored(random_network(41, 0.5, seed), t).graph).ok());
  }
}

TEST_CASE("phylo_isomorphic basics") {
  const auto a = cherry("a", "b");
  CHECK(phylo_isomorphic(a, cherry("b", "a")).isomorphic);
  const auto r = phylo_isomorphic(a, cherry("a", "c"));
  CHECK_FALSE(r.isomorphic);
  CHECK(r.decided_by == "pretest:label-multiset");

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto net = random_network(9 + seed % 30, 0.5, seed);
    const auto perm = shuffled(net.node_count(), seed);
    const auto copy = relabel_network(net, perm);
    const auto res = phylo_isomorphic(net, copy, true);
    CHECK(res.isomorphic);
    REQUIRE(res.mapping);
    CHECK(is_network_isomorphism(net, copy, *res.mapping));
    CHECK(phylo_isomorphic(copy, net).isomorphic);
  }
}

TEST_CASE("arc reversal and label swap mutants agree with the oracle") {
  std::size_t negatives = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto net = random_network(5 + seed % 8, 0.5, seed);
    Rng rng(seed ^ 0xabcdef);
    PhyloNetwork other = net;
    if (seed % 2 == 0) {
      for (int tries = 0; tries < 20; ++tries) {
        if (auto rev = reverse_arc(net, rng.below(net.arc_count()))) {
          other = *rev;
          break;
        }
      }
    } else {
      std::vector<NodeIndex> leaves;
      for (NodeIndex v = 0; v < net.node_count(); ++v)
        if (net.kind(v) == NodeKind::leaf) leaves.push_back(v);
      other = swap_labels(net, leaves[0], leaves[1 + rng.below(leaves.size() - 1)]);
    }
    other = relabel_network(other, shuffled(other.node_count(), seed + 3));
    const bool expected = oracle_network_isomorphic(net, other);
    negatives += !expected;
    CHECK(phylo_isomorphic(net, other).isomorphic == expected);
    CHECK(phylo_isomorphic(net, other, false, {}, false).isomorphic == expected);
  }
  CHECK(negatives > 10);
}

TEST_CASE("pretest: reversing an arc into a different kind multiset is never isomorphic") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto net = random_network(11, 0.6, seed);
    for (std::size_t k = 0; k < net.arc_count(); ++k) {
      const auto rev = reverse_arc(net, k);
      if (!rev) continue;
      if (network_pretest_mismatch(net, *rev) == std::optional<std::string>("node-kinds"))
        CHECK_FALSE(phylo_isomorphic(net, *rev).isomorphic);
    }
  }
}

TEST_CASE("eNewick parsing") {
  SUBCASE("cherry with a named root") {
    const auto n = parse_enewick("(a,b)r;");
    CHECK(n.node_count() == 3);
    CHECK(n.label(n.root()) == std::optional<std::string>("r"));
    CHECK(count_kind(n, NodeKind::leaf) == 2);
  }
  SUBCASE("one hybrid above b") {
    const auto n = parse_enewick("((a,(b)#H1),(#H1,c));");
    CHECK(n.node_count() == 7);
    CHECK(count_kind(n, NodeKind::reticulate) == 1);
    for (NodeIndex v = 0; v < n.node_count(); ++v) {
      if (n.kind(v) != NodeKind::reticulate) continue;
      REQUIRE(n.children(v).size() == 1);
      CHECK(n.label(n.children(v)[0]) == std::optional<std::string>("b"));
    }
  }
  SUBCASE("lengths, quotes and comments") {
    const auto n = parse_enewick("[comment]( 'taxon one':0.5 , b:1e-3 [x] ) : 2 ;\n");
    CHECK(n.node_count() == 3);
    std::vector<std::string> labels;
    for (NodeIndex v = 0; v < n.node_count(); ++v)
      if (n.label(v)) labels.push_back(*n.label(v));
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<std::string>{"b", "taxon one"});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_enewick("(a,b)"), ParseError);
    CHECK_THROWS_AS(parse_enewick("(a,b;"), ParseError);
    CHECK_THROWS_AS(parse_enewick("((a,b)#H1,c);"), ParseError);
    CHECK_THROWS_AS(parse_enewick("((a)#H1,(#H1,b),#H1);"), ParseError);
    CHECK_THROWS_AS(parse_enewick("(a,b,c);"), InputError);
    try {
      parse_enewick("(a,\n b));");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("eNewick round trip") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto net = random_network(5 + seed * 5, 0.5, seed);
    const auto text = write_enewick(net);
    const auto back = parse_enewick(text);
    CHECK(back.node_count() == net.node_count());
    CHECK(phylo_isomorphic(net, back).isomorphic);
    CHECK(write_enewick(back) == text);
  }
  PhyloNetwork odd = cherry("it's", "a b");
  CHECK(phylo_isomorphic(odd, parse_enewick(write_enewick(odd))).isomorphic);
}

TEST_CASE("random_network") {
  const auto tree = random_network(31, 0.0, 5);
  CHECK(count_kind(tree, NodeKind::reticulate) == 0);
  CHECK(tree.node_count() == 31);
  CHECK(random_network(30, 0.5, 5).node_count() == 29);
  CHECK(write_enewick(random_network(40, 0.5, 9)) == write_enewick(random_network(40, 0.5, 9)));
  CHECK_THROWS_AS(random_network(2, 0.5, 1), InputError);
  CHECK_THROWS_AS(random_network(9, 1.5, 1), InputError);

  std::size_t reticulations = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto n = random_network(3 + seed % 60, 0.5, seed);
    CHECK(validate_network(n).ok());
    reticulations += count_kind(n, NodeKind::reticulate);
  }
  CHECK(reticulations > 0);
}
