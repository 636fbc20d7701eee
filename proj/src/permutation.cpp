#include "luks/permutation.hpp"

#include <numeric>
#include <stdexcept>

namespace luks {

Permutation::Permutation(std::size_t degree) : image_(degree) {
  std::iota(image_.begin(), image_.end(), Point{0});
}

Permutation::Permutation(std::vector<Point> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (Point y : image_) {
    if (y >= image_.size() || seen[y]) {
      throw std::invalid_argument("permutation image is not a bijection");
    }
    seen[y] = true;
  }
}

Permutation Permutation::from_image_unchecked(std::vector<Point> image) {
  Permutation p;
  p.image_ = std::move(image);
  return p;
}

Permutation Permutation::transposition(std::size_t degree, Point a, Point b) {
  if (a >= degree || b >= degree) {
    throw std::invalid_argument("transposition point out of range");
  }
  Permutation p(degree);
  std::swap(p.image_[a], p.image_[b]);
  return p;
}

Permutation Permutation::from_cycles(
    std::size_t degree, std::initializer_list<std::initializer_list<Point>> cycles) {
  std::vector<Point> image(degree);
  std::iota(image.begin(), image.end(), Point{0});
  for (const auto& cycle : cycles) {
    std::vector<Point> c(cycle);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= degree) throw std::invalid_argument("cycle point out of range");
      image[c[i]] = c[(i + 1) % c.size()];
    }
  }
  return Permutation(std::move(image));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.image_.resize(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv.image_[image_[i]] = static_cast<Point>(i);
  return inv;
}

Permutation Permutation::extended(std::size_t degree) const {
  if (degree < image_.size()) throw std::invalid_argument("cannot extend to a smaller degree");
  Permutation p;
  p.image_.reserve(degree);
  p.image_ = image_;
  for (std::size_t i = image_.size(); i < degree; ++i) p.image_.push_back(static_cast<Point>(i));
  return p;
}

Permutation Permutation::restricted(std::size_t degree) const {
  if (degree > image_.size()) throw std::invalid_argument("cannot restrict to a larger degree");
  Permutation p;
  p.image_.assign(image_.begin(), image_.begin() + static_cast<std::ptrdiff_t>(degree));
  for (Point y : p.image_) {
    if (y >= degree) throw std::invalid_argument("restriction target is not invariant");
  }
  return p;
}

std::string Permutation::to_cycle_string(const std::function<std::string(Point)>& name) const {
  auto label = [&](Point x) { return name ? name(x) : std::to_string(x); };
  std::string out;
  std::vector<bool> done(image_.size(), false);
  for (Point start = 0; start < image_.size(); ++start) {
    if (done[start] || image_[start] == start) continue;
    out += '(';
    Point x = start;
    bool first = true;
    while (!done[x]) {
      done[x] = true;
      if (!first) out += ' ';
      out += label(x);
      first = false;
      x = image_[x];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw std::invalid_argument("compose: degree mismatch");
  std::vector<Point> image(p.degree());
  for (std::size_t x = 0; x < image.size(); ++x) image[x] = p(q(static_cast<Point>(x)));
  return Permutation::from_image_unchecked(std::move(image));
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  // FNV-1a over the image table.
  std::size_t h = 1469598103934665603ull;
  for (Point y : p.image()) {
    h ^= y;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace luks
