// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../unit/support.hpp"
#include "luks/color_automorphism.hpp"
#include "luks/harness.hpp"
#include "luks/isomorphism.hpp"
#include "luks/permgroup.hpp"
#include "luks/phylo.hpp"

using namespace luks;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr double kExampleSeconds = 1.0;
constexpr std::size_t kVerdictPairs = 500;
constexpr std::size_t kGroupGraphs = 100;
constexpr std::size_t kTwoGroupGraphs = 100;
constexpr std::uint64_t kOrderCap = std::uint64_t{1} << 16;
constexpr std::size_t kFilterInstances = 200;
constexpr std::size_t kIndex2Instances = 200;
constexpr std::size_t kNetworkPairs = 300;
constexpr std::size_t kRoundTrips = 100;
constexpr double kTernarySlope = 4.5;
constexpr double kPhyloSlope = 3.5;
constexpr double kBenchBudgetSeconds = 600.0;
constexpr std::size_t kScalingTrials = 5;
constexpr std::size_t kRelabelTrials = 100;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const LabeledGraph x3 = LabeledGraph::from_edges(
    {{1, 7}, {1, 10}, {2, 3}, {2, 4}, {3, 4}, {4, 9}, {5, 6}, {6, 8}, {7, 8}, {7, 9}, {8, 9}});
const LabeledGraph x4 = LabeledGraph::from_edges(
    {{2, 3}, {2, 10}, {1, 7}, {1, 4}, {7, 4}, {4, 9}, {5, 6}, {6, 8}, {3, 8}, {3, 9}, {8, 9}});
const LabeledGraph x1 = LabeledGraph::from_edges(
    {{1, 7}, {1, 8}, {1, 10}, {2, 3}, {3, 6}, {4, 5}, {5, 6}, {6, 10}, {7, 9}, {7, 10}, {8, 9}});
const LabeledGraph x2 = LabeledGraph::from_edges(
    {{1, 7}, {1, 9}, {2, 3}, {2, 5}, {2, 10}, {4, 5}, {4, 6}, {4, 10}, {6, 8}, {7, 8}, {7, 10}});

Outcome example1() {
  IsoOptions options;
  options.want_mapping = true;
  const auto start = Clock::now();
  const auto r = is_isomorphic(x3, x4, options);
  const double t = seconds_since(start);
  const bool mapping_ok = r.mapping && is_isomorphism(x3, x4, *r.mapping);

  // 1->2, 2->1, 3->7, the rest fixed, on ids 1..10 (index = id - 1). The
  // listing omits 7, which must go to 3 for a bijection.
  std::vector<NodeIndex> listed(10);
  for (NodeIndex v = 0; v < 10; ++v) listed[v] = v;
  listed[0] = 1;
  listed[1] = 0;
  listed[2] = 6;
  listed[6] = 2;
  const bool listed_ok = is_isomorphism(x3, x4, listed);

  const auto swap = is_isomorphic_swap(x3, x4, options);
  const bool swap_ok = swap.isomorphic && swap.mapping && is_isomorphism(x3, x4, *swap.mapping);

  char buf[160];
  std::snprintf(buf, sizeof buf, "verdict=%s mapping_verified=%d listed_witness=%d swap_mode=%d time=%.4fs",
                r.isomorphic ? "true" : "false", mapping_ok, listed_ok, swap_ok, t);
  return {r.isomorphic && mapping_ok && listed_ok && swap_ok && t < kExampleSeconds, buf};
}

Outcome example2() {
  const bool pretest_silent = !pretest_mismatch(x1, x2).has_value();
  const auto start = Clock::now();
  const auto r = is_isomorphic(x1, x2);
  const double t = seconds_since(start);
  const auto swap = is_isomorphic_swap(x1, x2);
  char buf[160];
  std::snprintf(buf, sizeof buf, "verdict=%s decided_by=%s pretests_silent=%d swap_mode=%s time=%.4fs",
                r.isomorphic ? "true" : "false", r.decided_by.c_str(), pretest_silent,
                swap.isomorphic ? "true" : "false", t);
  return {!r.isomorphic && !swap.isomorphic && pretest_silent && r.decided_by == "search" && t < kExampleSeconds,
          buf};
}

Outcome verdict_oracle() {
  std::size_t disagreements = 0, positives = 0, negatives = 0, same_degrees = 0;
  for (std::size_t i = 0; i < kVerdictPairs; ++i) {
    const std::uint64_t seed = derive_seed(3, i);
    const std::size_t n = 2 + i % 11;
    const auto g = random_ternary_graph(n, seed, (i % 4) / 3.0);
    LabeledGraph h;
    if (i % 2 == 0) {
      h = relabel_graph(g, seed + 1);
    } else if (i % 4 == 1) {
      h = random_ternary_graph(n, seed + 2, (i % 8) / 7.0);
    } else {
      // Same degree sequence, independent realization.
      std::vector<int> d(n);
      for (NodeIndex v = 0; v < n; ++v) d[v] = static_cast<int>(g.degree(v));
      auto other = degree_sequence_graph(d, seed + 3);
      h = other ? *other : random_ternary_graph(n, seed + 4);
      same_degrees += other.has_value();
    }
    const bool expected = oracle_isomorphic(g, h);
    const bool got = is_isomorphic(g, h).isomorphic;
    disagreements += expected != got;
    (expected ? positives : negatives) += 1;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "pairs=%zu oracle_true=%zu oracle_false=%zu same_degree_pairs=%zu disagreements=%zu",
                kVerdictPairs, positives, negatives, same_degrees, disagreements);
  return {disagreements == 0, buf};
}

Outcome group_oracle() {
  std::size_t mismatches = 0, nontrivial = 0;
  for (std::size_t i = 0; i < kGroupGraphs; ++i) {
    const std::uint64_t seed = derive_seed(4, i);
    const std::size_t n = 2 + i % 9;
    const auto g = random_ternary_graph(n, seed, (i % 3) / 2.0);
    const auto edges = g.sorted_edges();
    const Edge e = edges[i % edges.size()];
    const auto r = aut_e_generators(g, e);
    const auto group = enumerate_group(r.generators.gens, n, kOrderCap);
    const auto expected = oracle_aut_e(g, e);
    if (!group || *group != expected) ++mismatches;
    nontrivial += expected.size() > 1;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "graphs=%zu nontrivial_groups=%zu mismatches=%zu", kGroupGraphs, nontrivial,
                mismatches);
  return {mismatches == 0, buf};
}

Outcome two_group() {
  std::size_t failures = 0;
  std::uint64_t largest = 1;
  for (std::size_t i = 0; i < kTwoGroupGraphs; ++i) {
    const std::uint64_t seed = derive_seed(5, i);
    const std::size_t n = 2 + i % 13;
    const auto g = random_ternary_graph(n, seed, (i % 5) / 4.0);
    const auto edges = g.sorted_edges();
    const auto r = aut_e_generators(g, edges[i % edges.size()]);
    const auto order = group_order(r.generators, kOrderCap);
    if (!order || (*order & (*order - 1)) != 0) {
      ++failures;
      continue;
    }
    largest = std::max(largest, *order);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "graphs=%zu non_power_of_two_or_overflow=%zu largest_order=%llu", kTwoGroupGraphs,
                failures, static_cast<unsigned long long>(largest));
  return {failures == 0, buf};
}

Outcome filter_correctness() {
  Rng rng(6);
  std::size_t naive_bad = 0, tree_bad = 0, nonempty = 0;
  for (std::size_t i = 0; i < kFilterInstances; ++i) {
    const std::size_t m = 1 + rng.below(16);
    testing::WreathAmbient ambient(m, rng);
    const Sgs g = testing::random_two_group(ambient, rng, 256);
    const Permutation sigma = ambient.random_element(rng);

    auto gens = g.gens;
    gens.push_back(sigma);
    std::vector<Point> b;
    std::vector<bool> seen(m, false);
    for (Point p = 0; p < m; ++p) {
      if (seen[p]) continue;
      const auto orb = orbit(gens, p);
      for (Point x : orb) seen[x] = true;
      if (rng.bernoulli(0.75)) b.insert(b.end(), orb.begin(), orb.end());
    }
    if (b.empty()) b = orbit(gens, 0);
    std::sort(b.begin(), b.end());
    std::vector<int> colors(m);
    const auto palette = 1 + rng.below(3);
    for (auto& c : colors) c = static_cast<int>(rng.below(palette));

    const Coset coset(sigma, g);
    const auto expected = testing::exhaustive_filter(coset, b, colors);
    const auto naive = testing::elements(color_filter(coset, b, colors));
    auto tree = StructureTree::build(b, g);
    tree.annotate(colors);
    const auto guided = testing::elements(color_filter_tree(coset, tree, colors));
    naive_bad += naive != expected;
    tree_bad += guided != naive;
    nonempty += !expected.empty();
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "instances=%zu nonempty=%zu naive_vs_exhaustive=%zu tree_vs_naive=%zu",
                kFilterInstances, nonempty, naive_bad, tree_bad);
  return {naive_bad == 0 && tree_bad == 0, buf};
}

Outcome index2_blocks() {
  Rng rng(7);
  std::size_t instances = 0, bad_subgroup = 0, bad_blocks = 0, rough = 0, sequences = 0;
  while (instances < kIndex2Instances) {
    const std::size_t m = 2 + rng.below(15);
    testing::WreathAmbient ambient(m, rng);
    const Sgs g = testing::random_two_group(ambient, rng, 256);
    ++sequences;
    rough += !is_smooth(g);
    const auto all = enumerate_group(g.gens, m).value();
    std::vector<Point> points(m);
    for (Point p = 0; p < m; ++p) points[p] = p;
    for (const auto& orb : orbits_on(g, points)) {
      if (orb.size() < 2) continue;
      ++instances;
      const auto blocks = two_block_system(g, orb);
      const std::vector<Point>& b1 = blocks.first;
      const std::vector<Point>& b2 = blocks.second;
      bool invariant = b1.size() == b2.size() && b1.size() * 2 == orb.size();
      for (const auto& p : all) {
        std::vector<Point> image;
        for (Point x : b1) image.push_back(p(x));
        std::sort(image.begin(), image.end());
        invariant = invariant && (image == b1 || image == b2);
      }
      bad_blocks += !invariant;

      auto keeps = [&](const Permutation& p) { return std::binary_search(b1.begin(), b1.end(), p(b1.front())); };
      const Sgs h = index2_sgs(g, keeps);
      ++sequences;
      rough += !is_smooth(h);
      std::vector<Permutation> expected;
      std::copy_if(all.begin(), all.end(), std::back_inserter(expected), keeps);
      bad_subgroup += enumerate_group(h.gens, m).value() != expected;
    }
  }
  // Sequences produced by the layer tower.
  for (std::size_t i = 0; i < 50; ++i) {
    const auto g = random_ternary_graph(4 + i % 11, derive_seed(77, i));
    const auto r = aut_e_generators(g, g.sorted_edges().front());
    ++sequences;
    rough += !is_smooth(r.generators);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "instances=%zu subgroup_mismatches=%zu non_invariant_blocks=%zu sequences=%zu non_smooth=%zu",
                instances, bad_subgroup, bad_blocks, sequences, rough);
  return {bad_subgroup == 0 && bad_blocks == 0 && rough == 0, buf};
}

Outcome phylo_correctness() {
  std::size_t disagreements = 0, positives = 0, negatives = 0;
  for (std::size_t i = 0; i < kNetworkPairs; ++i) {
    const std::uint64_t seed = derive_seed(8, i);
    const auto net = random_network(5 + i % 8, 0.5, seed);
    Rng rng(seed);
    PhyloNetwork other = net;
    switch (i % 3) {
      case 0:
        break;
      case 1: {
        for (int tries = 0; tries < 32; ++tries) {
          if (auto rev = reverse_arc(net, rng.below(net.arc_count()))) {
            other = *rev;
            break;
          }
        }
        break;
      }
      default: {
        std::vector<NodeIndex> leaves;
        for (NodeIndex v = 0; v < net.node_count(); ++v)
          if (net.kind(v) == NodeKind::leaf) leaves.push_back(v);
        const auto a = leaves[rng.below(leaves.size())];
        auto b = leaves[rng.below(leaves.size())];
        if (a == b) b = leaves[(std::find(leaves.begin(), leaves.end(), a) - leaves.begin() + 1) % leaves.size()];
        other = swap_labels(net, a, b);
      }
    }
    other = relabel_network(other, random_permutation(other.node_count(), rng));
    const bool expected = oracle_network_isomorphic(net, other);
    disagreements += phylo_isomorphic(net, other).isomorphic != expected;
    (expected ? positives : negatives) += 1;
  }

  std::size_t round_trip_failures = 0, largest = 0;
  for (std::size_t i = 0; i < kRoundTrips; ++i) {
    const auto net = random_network(3 + (i * 197) / (kRoundTrips - 1), 0.5, derive_seed(88, i));
    largest = std::max(largest, net.node_count());
    const auto back = parse_enewick(write_enewick(net));
    round_trip_failures += !phylo_isomorphic(net, back).isomorphic;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "pairs=%zu oracle_true=%zu oracle_false=%zu disagreements=%zu round_trips=%zu max_nodes=%zu "
                "round_trip_failures=%zu",
                kNetworkPairs, positives, negatives, disagreements, kRoundTrips, largest, round_trip_failures);
  return {disagreements == 0 && round_trip_failures == 0 && largest >= 199, buf};
}

std::string slopes_text(const std::vector<SizeSummary>& s, double& worst, bool& all_true) {
  std::string out;
  worst = 0.0;
  all_true = true;
  for (const auto& row : s) {
    all_true = all_true && row.positives == row.trials;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%zu:%.4fs", out.empty() ? "" : " ", row.n, row.median);
    out += buf;
    if (row.slope) {
      worst = std::max(worst, *row.slope);
      std::snprintf(buf, sizeof buf, "(%.2f)", *row.slope);
      out += buf;
    }
  }
  return out;
}

Outcome scaling() {
  const auto start = Clock::now();
  BenchConfig ternary;
  ternary.mode = BenchMode::isomorphic;
  ternary.sizes = {64, 128, 256, 512};
  ternary.trials = kScalingTrials;
  ternary.seed = 9;
  BenchConfig phylo = ternary;
  phylo.mode = BenchMode::phylo;

  double worst_t = 0.0, worst_p = 0.0;
  bool true_t = false, true_p = false;
  const auto text_t = slopes_text(bench_summary(bench_run(ternary)), worst_t, true_t);
  const auto text_p = slopes_text(bench_summary(bench_run(phylo)), worst_p, true_p);
  const double total = seconds_since(start);
  char buf[400];
  std::snprintf(buf, sizeof buf, "ternary[%s] max_slope=%.2f; phylo[%s] max_slope=%.2f; wall=%.1fs",
                text_t.c_str(), worst_t, text_p.c_str(), worst_p, total);
  return {worst_t <= kTernarySlope && worst_p <= kPhyloSlope && true_t && true_p && total <= kBenchBudgetSeconds,
          buf};
}

Outcome determinism() {
  std::size_t csv_mismatch = 0;
  for (auto mode : {BenchMode::random, BenchMode::semirandom, BenchMode::isomorphic, BenchMode::phylo,
                    BenchMode::phylo_undirected_iso}) {
    BenchConfig c;
    c.mode = mode;
    c.sizes = {16, 32, 48};
    c.trials = 4;
    c.seed = 10;
    c.threads = 1;
    c.timing = false;
    csv_mismatch += bench_csv(bench_run(c)) != bench_csv(bench_run(c));
  }

  std::size_t flips = 0, positives = 0;
  for (std::size_t i = 0; i < kRelabelTrials; ++i) {
    const std::uint64_t seed = derive_seed(10, i);
    const std::size_t n = 6 + i % 40;
    const auto g = random_ternary_graph(n, seed);
    const auto h = i % 2 ? relabel_graph(g, seed + 1) : random_ternary_graph(n, seed + 2);
    const bool base = is_isomorphic(g, h).isomorphic;
    positives += base;
    for (std::uint64_t k = 0; k < 3; ++k) {
      const auto g2 = relabel_graph(g, seed + 10 + k);
      const auto h2 = relabel_graph(h, seed + 20 + k);
      flips += is_isomorphic(g2, h2).isomorphic != base;
      flips += is_isomorphic_swap(g2, h2).isomorphic != base;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "csv_modes=5 csv_mismatches=%zu relabel_trials=%zu positives=%zu verdict_flips=%zu",
                csv_mismatch, kRelabelTrials, positives, flips);
  return {csv_mismatch == 0 && flips == 0, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Example 1 isomorphic with verified mapping", example1},
      {"Example 2 not isomorphic, no pretest decides", example2},
      {"verdicts agree with the brute-force oracle", verdict_oracle},
      {"Aut_e groups equal the brute-force enumeration", group_oracle},
      {"Aut_e is a 2-group", two_group},
      {"coset color filtering: naive = exhaustive, tree = naive", filter_correctness},
      {"index-2 subgroups, two-block systems, smoothness", index2_blocks},
      {"phylo verdicts agree with the oracle; eNewick round trip", phylo_correctness},
      {"runtime scaling slopes", scaling},
      {"determinism and relabeling invariance", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
