#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace luks {

using Point = std::uint32_t;

/// A bijection on the ground set {0, ..., m-1}, stored as its image table.
///
/// Equality, ordering and hashing are all defined on the image array, so
/// any tie-breaking built on top of permutations is deterministic.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t degree);
  /// Throws std::invalid_argument unless `image` is a bijection.
  explicit Permutation(std::vector<Point> image);

  static Permutation identity(std::size_t degree) { return Permutation(degree); }
  /// Skips the bijection check; the caller guarantees it.
  static Permutation from_image_unchecked(std::vector<Point> image);
  static Permutation transposition(std::size_t degree, Point a, Point b);
  /// Builds a permutation from disjoint cycles, e.g. {{0, 1}, {2, 3}}.
  static Permutation from_cycles(std::size_t degree,
                                 std::initializer_list<std::initializer_list<Point>> cycles);

  std::size_t degree() const noexcept { return image_.size(); }
  Point operator()(Point x) const noexcept { return image_[x]; }
  Point operator[](Point x) const noexcept { return image_[x]; }
  std::span<const Point> image() const noexcept { return image_; }

  bool is_identity() const noexcept;
  Permutation inverse() const;

  /// Same permutation on a larger ground set, fixing the new points.
  Permutation extended(std::size_t degree) const;
  /// Restriction to {0, ..., degree-1}; the prefix must be invariant.
  Permutation restricted(std::size_t degree) const;

  /// Cycle notation with points printed through `name`, "()" for identity.
  std::string to_cycle_string(const std::function<std::string(Point)>& name = {}) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.image_ <=> b.image_;
  }

 private:
  std::vector<Point> image_;
};

/// x -> p(q(x)). Throws std::invalid_argument on a degree mismatch.
Permutation compose(const Permutation& p, const Permutation& q);

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

}  // namespace luks
