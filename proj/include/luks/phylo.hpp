#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "luks/graph.hpp"
#include "luks/isomorphism.hpp"

namespace luks {

enum class NodeKind : std::uint8_t { root, leaf, tree, reticulate, invalid };

/// Rooted directed acyclic graph on nodes 0..n-1 with optional taxon labels.
/// A fully resolved network has one root (in 0, out 2), leaves (1, 0), tree
/// nodes (1, 2) and reticulate nodes (2, 1); every leaf carries a label.
class PhyloNetwork {
 public:
  NodeIndex add_node(std::optional<std::string> label = std::nullopt);
  /// Throws std::invalid_argument on loops, repeated arcs or bad indices.
  void add_arc(NodeIndex tail, NodeIndex head);

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }
  const std::vector<std::pair<NodeIndex, NodeIndex>>& arcs() const noexcept { return arcs_; }
  const std::vector<NodeIndex>& children(NodeIndex v) const { return children_[v]; }
  const std::vector<NodeIndex>& parents(NodeIndex v) const { return parents_[v]; }
  std::size_t in_degree(NodeIndex v) const { return parents_[v].size(); }
  std::size_t out_degree(NodeIndex v) const { return children_[v].size(); }
  const std::optional<std::string>& label(NodeIndex v) const { return labels_[v]; }
  void set_label(NodeIndex v, std::optional<std::string> label) { labels_[v] = std::move(label); }
  bool has_arc(NodeIndex tail, NodeIndex head) const;

  NodeKind kind(NodeIndex v) const;
  /// The unique node without parents; throws InputError if there is not
  /// exactly one.
  NodeIndex root() const;

 private:
  std::vector<std::optional<std::string>> labels_;
  std::vector<std::pair<NodeIndex, NodeIndex>> arcs_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<std::vector<NodeIndex>> parents_;
};

ValidationReport validate_network(const PhyloNetwork& net);
void require_valid_network(const PhyloNetwork& net, std::string_view what = "network");

/// Taxon name -> node color, shared by the two sides of a comparison.
/// Unlabeled nodes have color 0; taxa get 1, 2, ... in first-seen order.
class TaxonTable {
 public:
  int color(const std::optional<std::string>& label);

 private:
  std::map<std::string, int> ids_;
};

/// Undirected encoding of a network: node i keeps index i, and arc k
/// (tail -> head) becomes tail -[kArcOutLabel]- m_k -[kArcInLabel]- head
/// with midpoint m_k = node_count + k colored kMidpointColor.
struct ReducedNetwork {
  LabeledGraph graph;
  NodeIndex root = 0;
};

ReducedNetwork reduce_to_colored(const PhyloNetwork& net, TaxonTable& taxa);

/// True iff `map` (node of a -> node of b) is a bijection preserving arcs
/// and labels.
bool is_network_isomorphism(const PhyloNetwork& a, const PhyloNetwork& b,
                            const std::vector<NodeIndex>& map);

struct PhyloIsoResult {
  bool isomorphic = false;
  std::optional<std::vector<NodeIndex>> mapping;
  std::string decided_by;  // "pretest:<name>" or "search"
};

/// Node/arc counts, label multiset, per-kind node counts.
std::optional<std::string> network_pretest_mismatch(const PhyloNetwork& a, const PhyloNetwork& b);

/// Joins the two reductions by an edge between the roots and computes
/// Aut_e of the result once; the networks are isomorphic iff some element
/// maps one root to the other.
PhyloIsoResult phylo_isomorphic(const PhyloNetwork& a, const PhyloNetwork& b, bool want_mapping = false,
                                const AutOptions& options = {}, bool pretests = true);

// eNewick: nested parenthesized subtrees, optional node names (plain or
// single-quoted), optional ":length" fields (discarded), hybrid occurrences
// tagged "#H<k>", bracket comments, terminated by ';'.

/// Throws ParseError for syntax errors and tag counts other than two,
/// InputError when the result is not a fully resolved network.
PhyloNetwork parse_enewick(std::string_view text);
PhyloNetwork read_enewick_file(const std::string& path);
std::string write_enewick(const PhyloNetwork& net);

/// Random fully resolved network with leaves labeled t1, t2, ... Node count
/// is n_target rounded down to odd. Reticulations are added by joining a new
/// node on one arc to a new reticulate node on another; their number is
/// Binomial((n_target - 3) / 2, hybrid_prob). Deterministic under `seed`.
PhyloNetwork random_network(std::size_t n_target, double hybrid_prob, std::uint64_t seed);

/// Copy with node i renamed to perm[i].
PhyloNetwork relabel_network(const PhyloNetwork& net, const std::vector<NodeIndex>& perm);
/// Copy with arc k reversed, if the result is still a valid network.
std::optional<PhyloNetwork> reverse_arc(const PhyloNetwork& net, std::size_t arc);
/// Copy with the labels of two nodes exchanged.
PhyloNetwork swap_labels(const PhyloNetwork& net, NodeIndex a, NodeIndex b);

}  // namespace luks
