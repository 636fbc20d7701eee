#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace luks {

using NodeIndex = std::uint32_t;

/// Reserved colors and labels. User-supplied values must be non-negative.
namespace reserved {
inline constexpr int kSpliceColor = -1;    // the two splice nodes of build_x
inline constexpr int kMidpointColor = -2;  // arc midpoints of a reduced network
inline constexpr int kGadgetLabel = -1;    // triangle edges
inline constexpr int kArcInLabel = -2;     // midpoint -> head
inline constexpr int kArcOutLabel = -3;    // tail -> midpoint
inline constexpr int kRootJoinLabel = -4;  // edge joining two network roots
}  // namespace reserved

/// Malformed or unusable input (bad file, invalid graph for an operation).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure with a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  /// The message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

struct Edge {
  NodeIndex u;
  NodeIndex v;
  int label = 0;
};

struct Neighbor {
  NodeIndex node;
  int label;
};

/// Undirected node-colored, edge-labeled graph on dense indices 0..n-1.
///
/// Every node also carries an external id (from files or the caller), used
/// only for I/O and mappings. Loops and parallel edges are rejected at
/// insertion; degree and connectivity are checked by `validate`.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  NodeIndex add_node(int color = 0);
  NodeIndex add_node(std::int64_t external_id, int color);
  void add_edge(NodeIndex u, NodeIndex v, int label = 0);

  /// Convenience builder: nodes are the distinct ids appearing in `edges`
  /// (plus `extra_nodes`), numbered in increasing id order.
  static LabeledGraph from_edges(const std::vector<std::pair<std::int64_t, std::int64_t>>& edges,
                                 const std::vector<std::int64_t>& extra_nodes = {});

  std::size_t node_count() const noexcept { return colors_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  int color(NodeIndex v) const { return colors_[v]; }
  void set_color(NodeIndex v, int c) { colors_[v] = c; }
  std::int64_t external_id(NodeIndex v) const { return ids_[v]; }
  /// Index of an external id, if present.
  std::optional<NodeIndex> index_of(std::int64_t external_id) const;

  std::size_t degree(NodeIndex v) const { return adjacency_[v].size(); }
  const std::vector<Neighbor>& neighbors(NodeIndex v) const { return adjacency_[v]; }
  std::optional<int> edge_label(NodeIndex u, NodeIndex v) const;
  bool has_edge(NodeIndex u, NodeIndex v) const { return edge_label(u, v).has_value(); }

  /// Edges with u < v, in insertion order.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Edges with u < v sorted lexicographically by (u, v).
  std::vector<Edge> sorted_edges() const;

  bool is_connected() const;

 private:
  std::vector<int> colors_;
  std::vector<std::int64_t> ids_;
  std::unordered_map<std::int64_t, NodeIndex> id_index_;
  std::int64_t next_id_ = 0;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<Edge> edges_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Ternary-graph checks: degree <= 3, connected, non-empty.
ValidationReport validate(const LabeledGraph& g);

/// Throws InputError carrying the first violation, if any.
void require_valid(const LabeledGraph& g, std::string_view what = "graph");

/// Renames node v of `g` to map[v] (index and external id both become
/// map[v]). Used to build relabeled copies.
LabeledGraph permute_nodes(const LabeledGraph& g, const std::vector<NodeIndex>& map);

/// True iff `map` (indices of g1 -> indices of g2) is a color- and
/// label-preserving isomorphism.
bool is_isomorphism(const LabeledGraph& g1, const LabeledGraph& g2,
                    const std::vector<NodeIndex>& map);

// Graph text format:
//   # comment
//   node <id> [<color>]
//   edge <id> <id> [<label>]
// Ids, colors and labels are non-negative decimal integers. Edges may
// introduce nodes implicitly (color 0). Nodes are indexed by increasing id.

LabeledGraph parse_graph(std::string_view text);
LabeledGraph read_graph_file(const std::string& path);
std::string format_graph(const LabeledGraph& g);

}  // namespace luks
