#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "luks/graph.hpp"
#include "luks/permutation.hpp"

namespace luks {

/// Result of splicing two graphs: e1 = {a, b} of g1 becomes a - v1 - b,
/// e2 likewise with v2, and the new edge e = {v1, v2} joins the parts.
///
/// Layout of the combined graph: g1's nodes keep indices [0, n1), then
/// v1 = n1, v2 = n1 + 1, and g2's node i becomes n1 + 2 + i.
struct SpliceResult {
  LabeledGraph graph;
  NodeIndex v1 = 0;
  NodeIndex v2 = 0;
  NodeIndex offset2 = 0;
};

SpliceResult build_x(const LabeledGraph& g1, const LabeledGraph& g2, Edge e1, Edge e2);

/// Graph with every three-parent node replaced by a labeled triangle,
/// plus the node of the input graph each output node comes from.
struct GadgetResult {
  LabeledGraph graph;
  std::vector<NodeIndex> origin;
};

/// Replaces each node whose neighbors all lie one level closer to {a, b}
/// (three of them) by a triangle v1, v2, v3 joined with kGadgetLabel edges,
/// vi taking over the edge to the i-th neighbor. Nodes keep their color.
GadgetResult triangle_gadget(const LabeledGraph& g, NodeIndex a, NodeIndex b);

/// The layer tower X_1 within ... within X_N = X grown from a base edge.
///
/// Nodes of the working graph are renumbered by level, so V(X_r) is the
/// index prefix [0, prefix_size(r)) and the base edge is {0, 1}.
class LayerDecomposition {
 public:
  const LabeledGraph& graph() const noexcept { return graph_; }
  std::size_t depth() const noexcept { return depth_; }
  int level_of(NodeIndex v) const { return level_[v]; }
  /// |V(X_r)|; for r >= number of node levels this is the node count.
  std::size_t prefix_size(std::size_t r) const;
  /// V_r, the nodes entering at level r (r >= 1).
  std::vector<NodeIndex> new_nodes(std::size_t r) const;
  /// Level at which an edge of the working graph enters the tower.
  std::size_t edge_level(NodeIndex u, NodeIndex v) const;
  /// Edges of E(X_r) that are not in E(X_{r-1}).
  std::vector<Edge> edges_entering(std::size_t r) const;
  /// Node and edge sets of X_r, for inspection.
  std::vector<NodeIndex> layer_nodes(std::size_t r) const;
  std::vector<Edge> layer_edges(std::size_t r) const;

  /// f(v): neighbors of v one level down, sorted by node, with edge labels.
  const std::vector<Neighbor>& neighbor_set(NodeIndex v) const { return parents_[v]; }

  /// Node of the caller's graph that working node `v` stands for.
  NodeIndex origin(NodeIndex v) const { return origin_[v]; }
  /// Working node representing input node `u` (first triangle corner for
  /// gadget-replaced nodes).
  NodeIndex working_of(NodeIndex u) const { return working_of_[u]; }
  std::size_t input_node_count() const noexcept { return working_of_.size(); }
  bool gadget_applied() const noexcept { return gadget_applied_; }

  friend LayerDecomposition layer_sequence(const LabeledGraph& g, NodeIndex a, NodeIndex b,
                                           bool apply_gadget);

 private:
  LabeledGraph graph_;
  std::vector<int> level_;
  std::vector<std::size_t> level_start_;  // level_start_[r] = first index of level r
  std::size_t depth_ = 1;
  std::vector<std::vector<Neighbor>> parents_;
  std::vector<NodeIndex> origin_;
  std::vector<NodeIndex> working_of_;
  bool gadget_applied_ = false;
};

/// Builds the tower for base edge {a, b}. Throws InputError if `g` is not a
/// valid connected ternary graph or {a, b} is not an edge.
LayerDecomposition layer_sequence(const LabeledGraph& g, NodeIndex a, NodeIndex b,
                                  bool apply_gadget = true);

/// Up to three working-graph nodes. Unordered subsets are stored sorted.
struct NodeTuple {
  std::array<NodeIndex, 3> nodes{};
  std::uint8_t size = 0;

  std::span<const NodeIndex> view() const { return {nodes.data(), size}; }
  friend bool operator==(const NodeTuple&, const NodeTuple&) = default;
  friend auto operator<=>(const NodeTuple& a, const NodeTuple& b) {
    if (auto c = a.size <=> b.size; c != 0) return c;
    return a.nodes <=> b.nodes;
  }
};

enum class Multiplicity : std::uint8_t { none, unique, multiple };
enum class EdgeClass : std::uint8_t { none, unlabeled, labeled };

/// A child of a subset: its color and the labels of its edges to the
/// subset's nodes, listed in the subset's order.
struct FiberEntry {
  int color = 0;
  std::array<int, 3> labels{};
  friend auto operator<=>(const FiberEntry&, const FiberEntry&) = default;
};

/// Color of an element of B_r.
///
/// Nodes carry their node color. A subset is colored by the product of
/// (a) whether it is an edge entering X_{r+1} and with which label, and
/// (b) the sorted list of its children (nodes of V_{r+1} having it as
/// neighbor set), recording their colors and edge labels. On uncolored,
/// unlabeled graphs (b) reduces to the child count.
struct ElementColor {
  enum class Kind : std::uint8_t { node, subset };
  Kind kind = Kind::subset;
  int node_color = 0;
  std::optional<int> edge_label;
  std::vector<FiberEntry> fiber;

  static ElementColor neutral() { return {}; }
  bool is_neutral() const { return kind == Kind::subset && !edge_label && fiber.empty(); }
  EdgeClass edge_class() const;
  Multiplicity multiplicity() const;
  friend auto operator<=>(const ElementColor&, const ElementColor&) = default;
};

/// Color of node `v` (in V(X_{r-1})) at level r.
ElementColor color_of(const LayerDecomposition& dec, std::size_t r, NodeIndex v);
/// Color of a tuple of V_r nodes at level r; for oriented tuples the fiber
/// labels follow the tuple order.
ElementColor color_of(const LayerDecomposition& dec, std::size_t r, const NodeTuple& t);

/// The colored set B_r = V(X_{r-1}) plus the subsets of V_r that matter,
/// closed under a group acting on V(X_r), laid out as one ground set.
///
/// Points [0, node_points()) are the nodes of X_r; the remaining points are
/// subsets (ordered tuples when some child reaches its neighbor set through
/// differently labeled edges, sorted sets otherwise).
class LevelSpace {
 public:
  /// `gens` act on V(X_r) (degree prefix_size(r)).
  LevelSpace(const LayerDecomposition& dec, std::size_t r, std::span<const Permutation> gens);

  std::size_t level() const noexcept { return level_; }
  std::size_t node_points() const noexcept { return node_points_; }
  std::size_t size() const noexcept { return node_points_ + tuples_.size(); }
  bool oriented() const noexcept { return oriented_; }

  /// V(X_{r-1}) followed by all subset points.
  std::vector<Point> b_set() const;
  /// Just the subset points, the part handed to the color solver.
  std::vector<Point> subset_points() const;
  const NodeTuple& tuple(Point p) const { return tuples_[p - node_points_]; }
  std::optional<Point> point_of(const NodeTuple& t) const;

  ElementColor color(Point p) const;
  /// Interned color per point; 0 is the neutral color. Node points are 0.
  const std::vector<int>& color_ids() const noexcept { return color_id_; }

  /// Induced action on the whole ground set of a permutation of V(X_r).
  Permutation extend(const Permutation& on_nodes) const;

 private:
  NodeTuple image(const Permutation& on_nodes, const NodeTuple& t) const;

  std::size_t level_;
  std::size_t node_points_;
  std::size_t prior_points_;
  bool oriented_ = false;
  std::vector<NodeTuple> tuples_;
  std::unordered_map<std::uint64_t, Point> index_;
  std::vector<ElementColor> palette_;
  std::vector<int> color_id_;
  std::vector<int> node_color_id_;
};

/// Transpositions (u v) of V_{r+1} with equal neighbor sets (including edge
/// labels) and equal colors, as permutations of V(X_{r+1}).
std::vector<Permutation> kernel_generators(const LayerDecomposition& dec, std::size_t r);

/// Extends `sigma` on V(X_r) to V(X_{r+1}): each new node goes to a node
/// with the image neighbor set, same color and labels; equal candidates
/// are matched in index order. Throws std::logic_error if the fibers do
/// not match (sigma does not extend).
Permutation lift(const LayerDecomposition& dec, std::size_t r, const Permutation& sigma);

}  // namespace luks
