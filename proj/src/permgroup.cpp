#include "luks/permgroup.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace luks {

namespace {

// Dense indices for a sorted point set.
class LocalIndex {
 public:
  explicit LocalIndex(std::span<const Point> points) : points_(points.begin(), points.end()) {
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
      throw std::invalid_argument("point set contains duplicates");
    }
  }

  std::size_t size() const { return points_.size(); }
  Point point(std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }

  // Index of p, or size() when p is not in the set.
  std::size_t find(Point p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) return points_.size();
    return static_cast<std::size_t>(it - points_.begin());
  }

 private:
  std::vector<Point> points_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Action of each generator on a set of n local indices.
using LocalAction = std::vector<std::vector<std::size_t>>;

// Atkinson's pair-collapse: the finest invariant partition in which x and y
// share a class. Returns the class representative of every index.
std::vector<std::size_t> minimal_block_partition(const LocalAction& action, std::size_t n,
                                                 std::size_t x, std::size_t y) {
  UnionFind uf(n);
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  uf.unite(x, y);
  queue.emplace_back(x, y);
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    for (const auto& g : action) {
      std::size_t ga = uf.find(g[a]);
      std::size_t gb = uf.find(g[b]);
      if (ga != gb) {
        uf.unite(ga, gb);
        queue.emplace_back(ga, gb);
      }
    }
  }
  std::vector<std::size_t> rep(n);
  for (std::size_t i = 0; i < n; ++i) rep[i] = uf.find(i);
  return rep;
}

}  // namespace

SmoothGeneratingSequence::SmoothGeneratingSequence(std::size_t m, std::vector<Permutation> g)
    : degree(m), gens(std::move(g)) {
  for (const auto& p : gens) {
    if (p.degree() != degree) throw std::invalid_argument("SGS generator degree mismatch");
  }
}

Sgs compact(Sgs sgs) {
  std::erase_if(sgs.gens, [](const Permutation& p) { return p.is_identity(); });
  return sgs;
}

Coset::Coset(Permutation rep, Sgs sub) : Coset(std::move(rep), std::make_shared<const Sgs>(std::move(sub))) {}

Coset::Coset(Permutation rep, std::shared_ptr<const Sgs> sub) : rep_(std::move(rep)), sub_(std::move(sub)) {
  if (!sub_) throw std::invalid_argument("coset without subgroup");
  if (rep_->degree() != sub_->degree) throw std::invalid_argument("coset degree mismatch");
}

Coset Coset::subgroup(Sgs sub) {
  Permutation id(sub.degree);
  return Coset(std::move(id), std::move(sub));
}

std::vector<Point> orbit(std::span<const Permutation> gens, Point point) {
  if (gens.empty()) throw std::invalid_argument("orbit: empty generator list");
  const std::size_t m = gens.front().degree();
  if (point >= m) throw std::out_of_range("orbit: point out of range");
  std::vector<bool> seen(m, false);
  std::vector<Point> out{point};
  seen[point] = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : gens) {
      Point y = g(out[i]);
      if (!seen[y]) {
        seen[y] = true;
        out.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> orbit(const Sgs& sgs, Point point) {
  if (point >= sgs.degree) throw std::out_of_range("orbit: point out of range");
  if (sgs.empty()) return {point};
  return orbit(std::span<const Permutation>(sgs.gens), point);
}

std::vector<std::vector<Point>> orbits_on(const Sgs& sgs, std::span<const Point> points) {
  LocalIndex index(points);
  const std::size_t n = index.size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Point>> result;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<Point> orb{index.point(i)};
    seen[i] = true;
    for (std::size_t k = 0; k < orb.size(); ++k) {
      for (const auto& g : sgs.gens) {
        std::size_t j = index.find(g(orb[k]));
        if (j == n) throw std::invalid_argument("point set is not stable under the group");
        if (!seen[j]) {
          seen[j] = true;
          orb.push_back(index.point(j));
        }
      }
    }
    std::sort(orb.begin(), orb.end());
    result.push_back(std::move(orb));
  }
  return result;
}

bool is_transitive(const Sgs& sgs, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("is_transitive: empty point set");
  return orbits_on(sgs, points).size() == 1;
}

BlockSystem two_block_system(const Sgs& sgs, std::span<const Point> points) {
  LocalIndex index(points);
  const std::size_t n = index.size();
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("two_block_system: |B| must be even and >= 2");

  LocalAction action;
  action.reserve(sgs.size());
  for (const auto& g : sgs.gens) {
    std::vector<std::size_t> local(n);
    for (std::size_t i = 0; i < n; ++i) {
      local[i] = index.find(g(index.point(i)));
      if (local[i] == n) throw std::invalid_argument("point set is not stable under the group");
    }
    action.push_back(std::move(local));
  }
  {
    Sgs probe = sgs;
    if (orbits_on(probe, index.points()).size() != 1) {
      throw std::invalid_argument("two_block_system: group is intransitive on B");
    }
  }

  // block[i]: block id of point i in the current system; starts discrete and
  // is coarsened through minimal blocks of the quotient action until two
  // blocks remain.
  std::vector<std::size_t> block(n);
  std::iota(block.begin(), block.end(), 0);
  std::size_t block_count = n;
  while (block_count > 2) {
    std::vector<std::size_t> member(block_count);
    for (std::size_t i = 0; i < n; ++i) member[block[i]] = i;
    LocalAction quotient;
    quotient.reserve(action.size());
    for (const auto& g : action) {
      std::vector<std::size_t> q(block_count);
      for (std::size_t b = 0; b < block_count; ++b) q[b] = block[g[member[b]]];
      quotient.push_back(std::move(q));
    }
    const std::size_t b0 = block[0];
    bool coarsened = false;
    for (std::size_t other = 0; other < block_count && !coarsened; ++other) {
      if (other == b0) continue;
      auto rep = minimal_block_partition(quotient, block_count, b0, other);
      std::vector<std::size_t> renumber(block_count, block_count);
      std::size_t classes = 0;
      for (std::size_t b = 0; b < block_count; ++b) {
        if (renumber[rep[b]] == block_count) renumber[rep[b]] = classes++;
      }
      if (classes < 2) continue;  // the pair generates the trivial system
      for (std::size_t i = 0; i < n; ++i) block[i] = renumber[rep[block[i]]];
      block_count = classes;
      coarsened = true;
    }
    if (!coarsened) throw std::invalid_argument("two_block_system: action is primitive (not a 2-group)");
  }

  BlockSystem result;
  const std::size_t first_block = block[0];
  for (std::size_t i = 0; i < n; ++i) {
    (block[i] == first_block ? result.first : result.second).push_back(index.point(i));
  }
  return result;
}

Sgs index2_sgs(const Sgs& sgs, const std::function<bool(const Permutation&)>& member) {
  std::vector<bool> in(sgs.size());
  std::size_t j = sgs.size();
  for (std::size_t i = 0; i < sgs.size(); ++i) {
    in[i] = member(sgs.gens[i]);
    if (!in[i] && j == sgs.size()) j = i;
  }
  if (j == sgs.size()) return sgs;
  const Permutation gj_inv = sgs.gens[j].inverse();
  Sgs out(sgs.degree);
  out.gens.reserve(sgs.size());
  for (std::size_t i = 0; i < sgs.size(); ++i) {
    out.gens.push_back(in[i] ? sgs.gens[i] : compose(gj_inv, sgs.gens[i]));
    assert(member(out.gens.back()) && "index2_sgs: predicate is not an index-2 subgroup");
  }
  return out;
}

Coset coset_union(const Coset& c1, const Coset& c2) {
  if (c1.empty()) return c2;
  if (c2.empty()) return c1;
  if (c1.rep().degree() != c2.rep().degree()) throw std::invalid_argument("coset_union: degree mismatch");
  Sgs sub = c1.sub();
  Permutation bridge = compose(c1.rep().inverse(), c2.rep());
  if (!bridge.is_identity()) sub.gens.push_back(std::move(bridge));
  return Coset(c1.rep(), std::move(sub));
}

std::optional<std::vector<Permutation>> enumerate_group(std::span<const Permutation> gens,
                                                        std::size_t degree, std::uint64_t cap) {
  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> elements{Permutation(degree)};
  seen.insert(elements.front());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : gens) {
      Permutation next = compose(g, elements[i]);
      if (seen.insert(next).second) {
        if (seen.size() > cap) return std::nullopt;
        elements.push_back(std::move(next));
      }
    }
  }
  std::sort(elements.begin(), elements.end());
  return elements;
}

std::optional<std::uint64_t> group_order(std::span<const Permutation> gens, std::size_t degree,
                                         std::uint64_t cap) {
  auto all = enumerate_group(gens, degree, cap);
  if (!all) return std::nullopt;
  return all->size();
}

std::optional<std::uint64_t> group_order(const Sgs& sgs, std::uint64_t cap) {
  return group_order(sgs.gens, sgs.degree, cap);
}

std::optional<std::vector<Permutation>> enumerate_coset(const Coset& coset, std::uint64_t cap) {
  if (coset.empty()) return std::vector<Permutation>{};
  auto group = enumerate_group(coset.sub().gens, coset.sub().degree, cap);
  if (!group) return std::nullopt;
  for (auto& h : *group) h = compose(coset.rep(), h);
  std::sort(group->begin(), group->end());
  return group;
}

bool is_smooth(const Sgs& sgs, std::uint64_t cap) {
  std::uint64_t previous = 1;
  for (std::size_t i = 1; i <= sgs.size(); ++i) {
    auto order = group_order(std::span<const Permutation>(sgs.gens.data(), i), sgs.degree, cap);
    if (!order) return false;
    if (*order != previous && *order != 2 * previous) return false;
    previous = *order;
  }
  return true;
}

}  // namespace luks
