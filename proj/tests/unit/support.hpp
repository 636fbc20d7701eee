#pragma once

// Shared helpers for tests: random small 2-groups with smooth generating
// sequences, and brute-force coset filtering.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "luks/permgroup.hpp"
#include "luks/permutation.hpp"
#include "luks/random.hpp"

namespace luks::testing {

/// Random element of a Sylow 2-subgroup of Sym(points): the points are
/// split into blocks of power-of-two size (binary digits of their count),
/// and each block carries an iterated wreath product of C2, i.e. every
/// internal node of a complete binary tree over the block may swap its two
/// halves.
class WreathAmbient {
 public:
  WreathAmbient(std::size_t degree, Rng& rng) : degree_(degree), layout_(degree) {
    for (std::size_t i = 0; i < degree; ++i) layout_[i] = static_cast<Point>(i);
    rng.shuffle(layout_);
    std::size_t start = 0;
    for (int k = 5; k >= 0; --k) {
      const std::size_t size = std::size_t{1} << k;
      if (degree & size) {
        blocks_.push_back({start, static_cast<unsigned>(k)});
        start += size;
      }
    }
  }

  std::size_t degree() const { return degree_; }

  Permutation random_element(Rng& rng) const {
    std::vector<Point> image(degree_);
    for (const auto& [start, k] : blocks_) {
      const std::size_t size = std::size_t{1} << k;
      std::vector<bool> swap(size);
      for (std::size_t i = 1; i < size; ++i) swap[i] = rng.bernoulli(0.5);
      for (std::size_t x = 0; x < size; ++x) {
        std::size_t y = 0;
        for (unsigned d = 0; d < k; ++d) {
          const std::size_t bit = (x >> (k - 1 - d)) & 1;
          const std::size_t node = (std::size_t{1} << d) + (x >> (k - d));
          y = (y << 1) | (bit ^ (swap[node] ? 1 : 0));
        }
        image[layout_[start + x]] = layout_[start + y];
      }
    }
    return Permutation(std::move(image));
  }

 private:
  struct Block {
    std::size_t start;
    unsigned k;
  };
  std::size_t degree_;
  std::vector<Point> layout_;
  std::vector<Block> blocks_;
};

/// A smooth generating sequence for <gens> (a 2-group), found greedily by
/// enumeration: each step adds an element doubling the current prefix group.
inline Sgs smooth_sequence(std::span<const Permutation> gens, std::size_t degree) {
  const auto all = enumerate_group(gens, degree).value();
  std::vector<Permutation> chain;
  std::set<Permutation> current{Permutation::identity(degree)};
  while (current.size() < all.size()) {
    bool grown = false;
    for (const auto& g : all) {
      if (current.count(g)) continue;
      auto next = chain;
      next.push_back(g);
      const auto order = group_order(next, degree).value();
      if (order == 2 * current.size()) {
        chain = std::move(next);
        const auto elems = enumerate_group(chain, degree).value();
        current = std::set<Permutation>(elems.begin(), elems.end());
        grown = true;
        break;
      }
    }
    if (!grown) throw std::logic_error("no doubling element; not a 2-group?");
  }
  return Sgs(degree, std::move(chain));
}

/// Random 2-group of order at most max_order inside `ambient`, as an SGS.
inline Sgs random_two_group(const WreathAmbient& ambient, Rng& rng, std::uint64_t max_order) {
  std::vector<Permutation> gens;
  const std::size_t want = 1 + rng.below(4);
  for (std::size_t tries = 0; gens.size() < want && tries < 20; ++tries) {
    gens.push_back(ambient.random_element(rng));
    if (!group_order(gens, ambient.degree(), max_order)) gens.pop_back();
  }
  return smooth_sequence(gens, ambient.degree());
}

/// Elements of `coset` preserving colors on `points`, sorted.
inline std::vector<Permutation> exhaustive_filter(const Coset& coset, std::span<const Point> points,
                                                  std::span<const int> colors) {
  std::vector<Permutation> out;
  if (coset.empty()) return out;
  const auto all = enumerate_coset(coset).value();
  for (const auto& p : all) {
    const bool keeps = std::all_of(points.begin(), points.end(), [&](Point b) { return colors[p(b)] == colors[b]; });
    if (keeps) out.push_back(p);
  }
  return out;
}

inline std::vector<Permutation> elements(const Coset& coset) {
  if (coset.empty()) return {};
  return enumerate_coset(coset).value();
}

}  // namespace luks::testing
