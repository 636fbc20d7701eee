#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "luks/graph.hpp"
#include "luks/isomorphism.hpp"
#include "luks/permutation.hpp"
#include "luks/phylo.hpp"
#include "luks/random.hpp"

namespace luks {

// Brute-force oracles. Backtracking over degree- and color-compatible
// assignments in BFS order; refuse inputs above the node cap.

inline constexpr std::size_t kOracleNodeCap = 12;

/// Throws std::invalid_argument above kOracleNodeCap nodes.
bool oracle_isomorphic(const LabeledGraph& g1, const LabeledGraph& g2);
/// Every automorphism of g mapping {e.u, e.v} to itself, sorted.
std::vector<Permutation> oracle_aut_e(const LabeledGraph& g, Edge e);
/// Label- and arc-preserving bijection search on networks.
bool oracle_network_isomorphic(const PhyloNetwork& a, const PhyloNetwork& b);

// Generators. All deterministic under their seed.

/// Connected graph with max degree 3: random spanning tree of degree <= 3,
/// then random extra edges between unsaturated nodes, `fill` being the
/// fraction of the remaining degree budget to use (1 = as cubic as possible).
LabeledGraph random_ternary_graph(std::size_t n, std::uint64_t seed, double fill = 1.0);

/// Connected simple graph with the given degrees (each 1..3, or a single 0
/// for n = 1), randomized by degree-preserving swaps; nullopt if none exists.
std::optional<LabeledGraph> degree_sequence_graph(const std::vector<int>& degrees, std::uint64_t seed);

std::vector<NodeIndex> random_permutation(std::size_t n, Rng& rng);
/// Copy of g with node ids shuffled.
LabeledGraph relabel_graph(const LabeledGraph& g, std::uint64_t seed);

// Benchmarks.

enum class BenchMode { random, semirandom, isomorphic, phylo, phylo_undirected_iso };

std::string_view to_string(BenchMode mode);
std::optional<BenchMode> parse_bench_mode(std::string_view text);

struct BenchRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  bool verdict = false;
  double elapsed = 0.0;  // seconds, steady clock, the isomorphism call only
  BenchMode mode = BenchMode::random;
};

struct BenchConfig {
  BenchMode mode = BenchMode::isomorphic;
  std::vector<std::size_t> sizes;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool timing = true;  // false: elapsed is recorded as 0
  AutOptions aut;
};

/// Runs every (size, trial) pair; records sorted by (mode, n, trial).
std::vector<BenchRecord> bench_run(const BenchConfig& config);

/// Header "n,trial,verdict,elapsed,mode", one row per record.
std::string bench_csv(const std::vector<BenchRecord>& records);

struct SizeSummary {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t positives = 0;
  double median = 0.0;
  /// log2(median / previous median) / log2(n / previous n).
  std::optional<double> slope;
};

std::vector<SizeSummary> bench_summary(const std::vector<BenchRecord>& records);
std::string format_summary(const std::vector<SizeSummary>& summary);

}  // namespace luks
