#pragma once

#include <optional>
#include <string>
#include <vector>

#include "luks/color_automorphism.hpp"
#include "luks/graph.hpp"
#include "luks/layers.hpp"
#include "luks/permgroup.hpp"

namespace luks {

enum class Solver { naive, tree };

struct AutOptions {
  Solver solver = Solver::tree;
  bool triangle_gadget = true;
};

struct AutStats {
  std::size_t levels = 0;
  std::size_t max_level_points = 0;  // largest |B_r|
  SolveStats solve;
};

struct AutResult {
  /// Generators of Aut_e(g), acting on the nodes of g (identities dropped).
  Sgs generators;
  Edge base{};
  /// Some generator exchanging the endpoints of the base edge, if any.
  std::optional<Permutation> swap_witness;
  AutStats stats;
};

/// Generators of the automorphisms of g (colors and labels preserved) that
/// map e = {a, b} to itself, grown level by level over the layer tower.
/// Throws InputError if g is not a connected ternary graph or e is absent.
AutResult aut_e_generators(const LabeledGraph& g, Edge e, const AutOptions& options = {});

/// Outcome of running the tower on a decomposition whose base edge is the
/// splice edge: either the generators of the part-preserving subgroup plus
/// one part-swapping element, or a proof that none swaps.
struct SwapSearch {
  std::optional<Permutation> swap;  // on working nodes
  Sgs preserving;                   // on working nodes
  AutStats stats;
};

/// Full Aut_e tower on a prepared decomposition, acting on working nodes.
/// With `stop_without_swap`, returns early (possibly with a partial group)
/// as soon as no element of some layer's group exchanges the base nodes.
Sgs aut_e_tower(const LayerDecomposition& dec, const AutOptions& options, AutStats* stats = nullptr,
                bool stop_without_swap = false);

/// Swap-restricted tower: tracks the coset of base-swapping elements only.
SwapSearch swap_tower(const LayerDecomposition& dec, const AutOptions& options);

struct IsoOptions {
  AutOptions aut;
  bool want_mapping = false;
  bool pretests = true;
};

struct IsoResult {
  bool isomorphic = false;
  /// Node index of g1 -> node index of g2; verified before being returned.
  std::optional<std::vector<NodeIndex>> mapping;
  /// "pretest:<name>", "single-node", or "search".
  std::string decided_by;
  std::size_t candidates_tried = 0;
};

/// Cheap necessary conditions: node and edge counts, degree sequence, color
/// and label multisets. Returns the name of the first failing test.
std::optional<std::string> pretest_mismatch(const LabeledGraph& g1, const LabeledGraph& g2);

/// Isomorphism of connected ternary graphs with non-negative colors and
/// labels. Splices g1 and g2 along a fixed edge e1 of g1 and each candidate
/// e2 of g2, and looks for an Aut_e element exchanging the two parts.
IsoResult is_isomorphic(const LabeledGraph& g1, const LabeledGraph& g2, const IsoOptions& options = {});

/// Same verdict, computing only the part-swapping coset at every level.
IsoResult is_isomorphic_swap(const LabeledGraph& g1, const LabeledGraph& g2,
                             const IsoOptions& options = {});

}  // namespace luks
