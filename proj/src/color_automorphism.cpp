#include "luks/color_automorphism.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace luks {

namespace {

constexpr std::uint32_t kNoPosition = std::numeric_limits<std::uint32_t>::max();

bool in_sorted(std::span<const Point> sorted, Point p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

int color_at(std::span<const int> colors, Point p) {
  if (p >= colors.size()) throw std::out_of_range("color table does not cover the ground set");
  return colors[p];
}

class NaiveSolver {
 public:
  NaiveSolver(std::span<const int> colors, SolveStats* stats) : colors_(colors), stats_(stats) {}

  // `points` is sorted and stable under coset.sub().
  Coset solve(Coset coset, std::span<const Point> points) {
    if (stats_) ++stats_->calls;
    if (coset.empty() || points.empty()) return coset;
    if (points.size() == 1) return singleton(std::move(coset), points.front());

    const auto& gens = coset.sub().gens;
    std::vector<Point> first_orbit{points.front()};
    std::unordered_set<Point> seen{points.front()};
    for (std::size_t i = 0; i < first_orbit.size(); ++i) {
      for (const auto& g : gens) {
        Point y = g(first_orbit[i]);
        if (seen.insert(y).second) first_orbit.push_back(y);
      }
    }
    std::sort(first_orbit.begin(), first_orbit.end());

    if (first_orbit.size() < points.size()) {
      std::vector<Point> rest;
      rest.reserve(points.size() - first_orbit.size());
      std::set_difference(points.begin(), points.end(), first_orbit.begin(), first_orbit.end(),
                          std::back_inserter(rest));
      Coset partial = solve(std::move(coset), first_orbit);
      if (partial.empty()) return partial;
      return solve(std::move(partial), rest);
    }

    if (stats_) ++stats_->transitive_splits;
    BlockSystem blocks = two_block_system(coset.sub(), points);
    const auto& b1 = blocks.first;
    auto keeps_b1 = [&](const Permutation& g) { return in_sorted(b1, g(b1.front())); };
    const Permutation* tau = nullptr;
    for (const auto& g : gens) {
      if (!keeps_b1(g)) {
        tau = &g;
        break;
      }
    }
    auto h = std::make_shared<const Sgs>(compact(index2_sgs(coset.sub(), keeps_b1)));
    Coset left = solve_blocks(Coset(coset.rep(), h), blocks);
    Coset right = solve_blocks(Coset(compose(coset.rep(), *tau), h), blocks);
    return coset_union(left, right);
  }

 private:
  Coset solve_blocks(Coset coset, const BlockSystem& blocks) {
    Coset partial = solve(std::move(coset), blocks.first);
    if (partial.empty()) return partial;
    return solve(std::move(partial), blocks.second);
  }

  Coset singleton(Coset coset, Point b) {
    if (stats_) ++stats_->singleton_checks;
    if (color_at(colors_, coset.rep()(b)) == color_at(colors_, b)) return coset;
    return Coset::empty_set();
  }

  std::span<const int> colors_;
  SolveStats* stats_;
};

}  // namespace

Coset color_filter(const Coset& coset, std::span<const Point> points, std::span<const int> colors,
                   SolveStats* stats) {
  std::vector<Point> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  NaiveSolver solver(colors, stats);
  return solver.solve(coset, sorted);
}

class StructureTree::Builder {
 public:
  explicit Builder(StructureTree& tree) : tree_(tree) {}

  int build(std::vector<Point> content, const Sgs& group, int parent) {
    const int index = static_cast<int>(tree_.nodes_.size());
    tree_.nodes_.emplace_back();
    tree_.nodes_[index].parent = parent;
    tree_.nodes_[index].lo = static_cast<std::uint32_t>(tree_.leaves_.size());

    if (content.size() == 1) {
      tree_.leaves_.push_back(content.front());
    } else {
      auto orbits = orbits_on(group, content);
      int left = -1, right = -1;
      if (orbits.size() == 1) {
        BlockSystem blocks = two_block_system(group, content);
        const auto& b1 = blocks.first;
        auto keeps_b1 = [&](const Permutation& g) { return in_sorted(b1, g(b1.front())); };
        const Permutation* tau = nullptr;
        for (const auto& g : group.gens) {
          if (!keeps_b1(g)) {
            tau = &g;
            break;
          }
        }
        Permutation tau_copy = *tau;
        Sgs h = compact(index2_sgs(group, keeps_b1));
        left = build(std::move(blocks.first), h, index);
        right = clone(left, tau_copy, index);
        tree_.nodes_[index].transitive = true;
        tree_.nodes_[index].tau = std::move(tau_copy);
      } else {
        // Balanced split of the orbit list.
        std::size_t total = content.size(), prefix = 0, best_cut = 1;
        std::size_t best_gap = std::numeric_limits<std::size_t>::max();
        for (std::size_t cut = 1; cut < orbits.size(); ++cut) {
          prefix += orbits[cut - 1].size();
          std::size_t gap = prefix > total - prefix ? 2 * prefix - total : total - 2 * prefix;
          if (gap < best_gap) {
            best_gap = gap;
            best_cut = cut;
          }
        }
        std::vector<Point> a, b;
        for (std::size_t i = 0; i < orbits.size(); ++i) {
          auto& dst = i < best_cut ? a : b;
          dst.insert(dst.end(), orbits[i].begin(), orbits[i].end());
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        left = build(std::move(a), group, index);
        right = build(std::move(b), group, index);
      }
      tree_.nodes_[index].left = left;
      tree_.nodes_[index].right = right;
    }
    tree_.nodes_[index].hi = static_cast<std::uint32_t>(tree_.leaves_.size());
    return index;
  }

 private:
  // Appends the image under tau of the subtree rooted at `source`. Subtrees
  // occupy a contiguous node range and a contiguous leaf range.
  int clone(int source, const Permutation& tau, int parent) {
    const Node& src_root = tree_.nodes_[source];
    const int first = source;
    const int last = subtree_end(source);
    const int base = static_cast<int>(tree_.nodes_.size());
    const auto leaf_shift = static_cast<std::uint32_t>(tree_.leaves_.size()) - src_root.lo;
    const std::uint32_t leaf_lo = src_root.lo, leaf_hi = src_root.hi;
    const Permutation tau_inv = tau.inverse();

    for (int i = first; i < last; ++i) {
      Node copy = tree_.nodes_[i];
      copy.lo += leaf_shift;
      copy.hi += leaf_shift;
      if (copy.left >= 0) copy.left += base - first;
      if (copy.right >= 0) copy.right += base - first;
      copy.parent = i == first ? parent : copy.parent + base - first;
      if (copy.tau) copy.tau = compose(compose(tau, *copy.tau), tau_inv);
      tree_.nodes_.push_back(std::move(copy));
    }
    for (std::uint32_t i = leaf_lo; i < leaf_hi; ++i) tree_.leaves_.push_back(tau(tree_.leaves_[i]));
    return base;
  }

  int subtree_end(int i) const {
    while (!tree_.nodes_[i].is_leaf()) i = tree_.nodes_[i].right;
    return i + 1;
  }

  StructureTree& tree_;
};

StructureTree StructureTree::build(std::span<const Point> points, const Sgs& sgs) {
  if (points.empty()) throw std::invalid_argument("StructureTree: empty point set");
  std::vector<Point> content(points.begin(), points.end());
  std::sort(content.begin(), content.end());
  StructureTree tree;
  tree.nodes_.reserve(2 * content.size());
  tree.leaves_.reserve(content.size());
  Builder(tree).build(std::move(content), sgs, -1);
  tree.position_.assign(sgs.degree, kNoPosition);
  for (std::size_t i = 0; i < tree.leaves_.size(); ++i) {
    Point p = tree.leaves_[i];
    if (p >= sgs.degree) throw std::out_of_range("StructureTree: point out of range");
    tree.position_[p] = static_cast<std::uint32_t>(i);
  }
  return tree;
}

void StructureTree::annotate(std::span<const int> colors, int neutral) {
  // Children always have larger indices than their parent.
  for (std::size_t k = nodes_.size(); k-- > 0;) {
    Node& n = nodes_[k];
    if (n.is_leaf()) {
      n.active = color_at(colors, leaves_[n.lo]) != neutral;
      n.facile = false;
      n.delta = static_cast<int>(k);
      continue;
    }
    const Node& l = nodes_[static_cast<std::size_t>(n.left)];
    const Node& r = nodes_[static_cast<std::size_t>(n.right)];
    n.active = l.active || r.active;
    n.facile = n.active && !n.transitive && (l.active != r.active);
    n.delta = n.facile ? (l.active ? l.delta : r.delta) : static_cast<int>(k);
  }
}

std::span<const Point> StructureTree::content(int i) const {
  const Node& n = node(i);
  return std::span<const Point>(leaves_).subspan(n.lo, n.hi - n.lo);
}

bool StructureTree::contains(int i, Point p) const {
  if (p >= position_.size()) return false;
  const std::uint32_t pos = position_[p];
  const Node& n = node(i);
  return pos != kNoPosition && pos >= n.lo && pos < n.hi;
}

namespace {

class TreeSolver {
 public:
  TreeSolver(const StructureTree& tree, std::span<const int> colors, SolveStats* stats)
      : tree_(tree), colors_(colors), stats_(stats) {}

  Coset solve(Coset coset, int index) {
    if (stats_) ++stats_->calls;
    if (coset.empty() || !tree_.node(index).active) return coset;
    index = tree_.node(index).delta;
    const auto& node = tree_.node(index);
    if (node.is_leaf()) {
      if (stats_) ++stats_->singleton_checks;
      const Point b = tree_.leaves()[node.lo];
      if (color_at(colors_, coset.rep()(b)) == color_at(colors_, b)) return coset;
      return Coset::empty_set();
    }

    const Point probe = tree_.leaves()[tree_.node(node.left).lo];
    auto keeps_left = [&](const Permutation& g) { return tree_.contains(node.left, g(probe)); };
    const Permutation* tau = nullptr;
    for (const auto& g : coset.sub().gens) {
      if (!keeps_left(g)) {
        tau = &g;
        break;
      }
    }
    if (!tau) return solve_children(std::move(coset), node);

    if (stats_) ++stats_->transitive_splits;
    auto h = std::make_shared<const Sgs>(compact(index2_sgs(coset.sub(), keeps_left)));
    Coset left = solve_children(Coset(coset.rep(), h), node);
    Coset right = solve_children(Coset(compose(coset.rep(), *tau), h), node);
    return coset_union(left, right);
  }

 private:
  Coset solve_children(Coset coset, const StructureTree::Node& node) {
    Coset partial = solve(std::move(coset), node.left);
    if (partial.empty()) return partial;
    return solve(std::move(partial), node.right);
  }

  const StructureTree& tree_;
  std::span<const int> colors_;
  SolveStats* stats_;
};

}  // namespace

Coset color_filter_tree(const Coset& coset, const StructureTree& tree, std::span<const int> colors,
                        SolveStats* stats) {
  if (!coset.empty() && coset.rep().degree() != tree.degree()) {
    throw std::invalid_argument("color_filter_tree: tree and coset have different ground sets");
  }
  TreeSolver solver(tree, colors, stats);
  return solver.solve(coset, StructureTree::root());
}

}  // namespace luks
