#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "luks/permgroup.hpp"

namespace luks {

/// Counters filled in by the solvers, for tests and benchmarks.
struct SolveStats {
  std::size_t singleton_checks = 0;
  std::size_t transitive_splits = 0;
  std::size_t calls = 0;
};

/// Colors are small integers indexed by ground-set point; `kNeutralColor`
/// plays the role of the distinguished color Q.
inline constexpr int kNeutralColor = 0;

/// C_B(coset): the elements of rep * <sub> that preserve the color of every
/// point of B. `points` must be <sub>-stable and the coset's elements must
/// map it to itself; <sub> must be a 2-group. Plain divide-and-conquer over
/// orbits and two-block systems.
Coset color_filter(const Coset& coset, std::span<const Point> points, std::span<const int> colors,
                   SolveStats* stats = nullptr);

/// Binary tree whose leaves are B and on which every element of the group
/// acts by tree automorphisms. Each node's content is a contiguous range of
/// the leaf order.
class StructureTree {
 public:
  struct Node {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    int left = -1;
    int right = -1;
    int parent = -1;
    bool transitive = false;  // built from a two-block split
    bool active = false;
    bool facile = false;
    int delta = -1;
    std::optional<Permutation> tau;  // transitive nodes: maps left content onto right

    bool is_leaf() const noexcept { return left < 0; }
  };

  /// Builds T(B, G). `points` must be nonempty and <sgs>-stable.
  static StructureTree build(std::span<const Point> points, const Sgs& sgs);

  /// Sets active / facile / delta for a coloring.
  void annotate(std::span<const int> colors, int neutral = kNeutralColor);

  static constexpr int root() noexcept { return 0; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const Point> content(int i) const;
  bool contains(int i, Point p) const;
  std::span<const Point> leaves() const noexcept { return leaves_; }
  std::size_t degree() const noexcept { return position_.size(); }

 private:
  class Builder;

  std::vector<Node> nodes_;
  std::vector<Point> leaves_;
  std::vector<std::uint32_t> position_;  // point -> index into leaves_, or npos
};

/// Same result as `color_filter`, with the recursion guided by an annotated
/// structure tree of a group containing <coset.sub()>: inactive subtrees are
/// skipped and facile chains are jumped through delta.
Coset color_filter_tree(const Coset& coset, const StructureTree& tree, std::span<const int> colors,
                        SolveStats* stats = nullptr);

}  // namespace luks
