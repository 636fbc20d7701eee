#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "luks/permutation.hpp"

namespace luks {

/// Ordered generators (g_1, ..., g_k) of a 2-group such that every prefix
/// subgroup has index at most 2 in the next one.
///
/// Smoothness is a precondition maintained by the producers in this library
/// (index2_sgs, coset_union, lifting); it is not re-checked on construction.
/// `is_smooth` verifies it by enumeration for small groups.
struct SmoothGeneratingSequence {
  std::size_t degree = 0;
  std::vector<Permutation> gens;

  SmoothGeneratingSequence() = default;
  explicit SmoothGeneratingSequence(std::size_t m) : degree(m) {}
  SmoothGeneratingSequence(std::size_t m, std::vector<Permutation> g);

  std::size_t size() const noexcept { return gens.size(); }
  bool empty() const noexcept { return gens.empty(); }
};

using Sgs = SmoothGeneratingSequence;

/// Drops identity generators. Prefix indices of the removed steps were 1,
/// so the result is still smooth and generates the same group.
Sgs compact(Sgs sgs);

/// Left coset rep * <sub>, or the empty set. The generator list is shared
/// between copies.
class Coset {
 public:
  static Coset empty_set() { return Coset(); }
  Coset(Permutation rep, Sgs sub);
  Coset(Permutation rep, std::shared_ptr<const Sgs> sub);
  /// The subgroup <sub> itself.
  static Coset subgroup(Sgs sub);

  bool empty() const noexcept { return !rep_.has_value(); }
  explicit operator bool() const noexcept { return !empty(); }
  const Permutation& rep() const { return *rep_; }
  const Sgs& sub() const { return *sub_; }
  const std::shared_ptr<const Sgs>& shared_sub() const { return sub_; }

 private:
  Coset() = default;
  std::optional<Permutation> rep_;
  std::shared_ptr<const Sgs> sub_;
};

/// A two-cell invariant partition of a transitive point set.
struct BlockSystem {
  std::vector<Point> first;   // B1, sorted
  std::vector<Point> second;  // B2, sorted
};

/// Smallest generator-closed set containing `point`, sorted.
std::vector<Point> orbit(std::span<const Permutation> gens, Point point);
std::vector<Point> orbit(const Sgs& sgs, Point point);

/// Orbits of the group on the stable set `points`, each sorted, ordered by
/// their smallest point.
std::vector<std::vector<Point>> orbits_on(const Sgs& sgs, std::span<const Point> points);

/// True iff `points` is a single orbit. Throws std::invalid_argument if
/// `points` is empty or not stable under every generator.
bool is_transitive(const Sgs& sgs, std::span<const Point> points);

/// A coarsest nontrivial block system (two blocks) of a 2-group acting
/// transitively on `points`. Throws std::invalid_argument on an
/// intransitive action, odd |points|, or |points| < 2.
BlockSystem two_block_system(const Sgs& sgs, std::span<const Point> points);

/// Generators of the index-<=2 subgroup H = {g : member(g)}: each g_i not in
/// H is replaced by g_j^-1 g_i, j the first index with g_j not in H.
/// Debug builds assert that every output passes `member`.
Sgs index2_sgs(const Sgs& sgs, const std::function<bool(const Permutation&)>& member);

/// Union of two cosets of one subgroup K whose union is again a coset
/// (of <K, rep1^-1 rep2>, with index at most 2).
Coset coset_union(const Coset& c1, const Coset& c2);

// Enumeration utilities. Exponential; intended for tests and oracles.

inline constexpr std::uint64_t kDefaultOrderCap = std::uint64_t{1} << 16;

/// |<gens>| by closure, or nullopt when it exceeds `cap`.
std::optional<std::uint64_t> group_order(std::span<const Permutation> gens, std::size_t degree,
                                         std::uint64_t cap = kDefaultOrderCap);
std::optional<std::uint64_t> group_order(const Sgs& sgs, std::uint64_t cap = kDefaultOrderCap);

/// All elements of <gens>, sorted, or nullopt when more than `cap`.
std::optional<std::vector<Permutation>> enumerate_group(std::span<const Permutation> gens,
                                                        std::size_t degree,
                                                        std::uint64_t cap = kDefaultOrderCap);

/// All elements of a coset, sorted, or nullopt when more than `cap`.
std::optional<std::vector<Permutation>> enumerate_coset(const Coset& coset,
                                                        std::uint64_t cap = kDefaultOrderCap);

/// Checks that every prefix order ratio is 1 or 2 (requires order <= cap).
bool is_smooth(const Sgs& sgs, std::uint64_t cap = kDefaultOrderCap);

}  // namespace luks
