#include "luks/layers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace luks {

namespace {

constexpr int kUnreached = -1;

// Distance from the edge {a, b} (both endpoints at 0).
std::vector<int> distances_from_edge(const LabeledGraph& g, NodeIndex a, NodeIndex b) {
  std::vector<int> dist(g.node_count(), kUnreached);
  std::deque<NodeIndex> queue{a, b};
  dist[a] = dist[b] = 0;
  while (!queue.empty()) {
    NodeIndex v = queue.front();
    queue.pop_front();
    for (const auto& n : g.neighbors(v)) {
      if (dist[n.node] == kUnreached) {
        dist[n.node] = dist[v] + 1;
        queue.push_back(n.node);
      }
    }
  }
  return dist;
}

void require_edge(const LabeledGraph& g, NodeIndex a, NodeIndex b) {
  if (a >= g.node_count() || b >= g.node_count() || !g.has_edge(a, b)) {
    throw InputError("base edge is not an edge of the graph");
  }
}

constexpr std::uint64_t kPackBits = 21;
constexpr std::uint64_t kPackLimit = (std::uint64_t{1} << kPackBits) - 1;

std::uint64_t pack(const NodeTuple& t) {
  std::uint64_t key = 0;
  for (std::uint8_t i = 0; i < t.size; ++i) {
    if (t.nodes[i] + std::uint64_t{1} >= kPackLimit) throw std::length_error("graph too large for tuple packing");
    key |= (t.nodes[i] + std::uint64_t{1}) << (kPackBits * i);
  }
  return key;
}

NodeTuple sorted_tuple(std::span<const NodeIndex> nodes) {
  NodeTuple t;
  t.size = static_cast<std::uint8_t>(nodes.size());
  std::copy(nodes.begin(), nodes.end(), t.nodes.begin());
  std::sort(t.nodes.begin(), t.nodes.begin() + t.size);
  return t;
}

NodeTuple parent_set(const LayerDecomposition& dec, NodeIndex v) {
  const auto& parents = dec.neighbor_set(v);
  NodeTuple t;
  t.size = static_cast<std::uint8_t>(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i) t.nodes[i] = parents[i].node;
  return t;  // neighbor sets are stored sorted
}

int label_towards(const LayerDecomposition& dec, NodeIndex child, NodeIndex parent) {
  for (const auto& n : dec.neighbor_set(child)) {
    if (n.node == parent) return n.label;
  }
  throw std::logic_error("label_towards: not a parent");
}

FiberEntry fiber_entry(const LayerDecomposition& dec, NodeIndex child, const NodeTuple& t) {
  FiberEntry entry;
  entry.color = dec.graph().color(child);
  for (std::uint8_t i = 0; i < t.size; ++i) entry.labels[i] = label_towards(dec, child, t.nodes[i]);
  return entry;
}

std::optional<int> entering_edge_label(const LayerDecomposition& dec, std::size_t r, const NodeTuple& t) {
  if (t.size != 2) return std::nullopt;
  auto label = dec.graph().edge_label(t.nodes[0], t.nodes[1]);
  if (!label || dec.edge_level(t.nodes[0], t.nodes[1]) != r + 1) return std::nullopt;
  return label;
}

// Key identifying the class of a new node for lifting and kernel
// generation: color, then (parent, label) pairs.
std::vector<std::int64_t> child_key(const LayerDecomposition& dec, NodeIndex v,
                                    const Permutation* sigma = nullptr) {
  std::vector<std::pair<NodeIndex, int>> parents;
  for (const auto& n : dec.neighbor_set(v)) parents.emplace_back(sigma ? (*sigma)(n.node) : n.node, n.label);
  std::sort(parents.begin(), parents.end());
  std::vector<std::int64_t> key{dec.graph().color(v)};
  for (auto [p, l] : parents) {
    key.push_back(p);
    key.push_back(l);
  }
  return key;
}

}  // namespace

SpliceResult build_x(const LabeledGraph& g1, const LabeledGraph& g2, Edge e1, Edge e2) {
  require_valid(g1, "first graph");
  require_valid(g2, "second graph");
  require_edge(g1, e1.u, e1.v);
  require_edge(g2, e2.u, e2.v);
  const auto n1 = static_cast<NodeIndex>(g1.node_count());
  SpliceResult out;
  out.v1 = n1;
  out.v2 = n1 + 1;
  out.offset2 = n1 + 2;
  LabeledGraph& x = out.graph;
  for (NodeIndex v = 0; v < n1; ++v) x.add_node(v, g1.color(v));
  x.add_node(out.v1, reserved::kSpliceColor);
  x.add_node(out.v2, reserved::kSpliceColor);
  for (NodeIndex v = 0; v < g2.node_count(); ++v) x.add_node(out.offset2 + v, g2.color(v));

  auto same = [](const Edge& e, NodeIndex u, NodeIndex v) {
    return (e.u == u && e.v == v) || (e.u == v && e.v == u);
  };
  for (const auto& e : g1.edges()) {
    if (same(e1, e.u, e.v)) {
      x.add_edge(e.u, out.v1, e.label);
      x.add_edge(out.v1, e.v, e.label);
    } else {
      x.add_edge(e.u, e.v, e.label);
    }
  }
  for (const auto& e : g2.edges()) {
    if (same(e2, e.u, e.v)) {
      x.add_edge(out.offset2 + e.u, out.v2, e.label);
      x.add_edge(out.v2, out.offset2 + e.v, e.label);
    } else {
      x.add_edge(out.offset2 + e.u, out.offset2 + e.v, e.label);
    }
  }
  x.add_edge(out.v1, out.v2, 0);
  return out;
}

GadgetResult triangle_gadget(const LabeledGraph& g, NodeIndex a, NodeIndex b) {
  require_valid(g);
  require_edge(g, a, b);
  const auto dist = distances_from_edge(g, a, b);
  std::vector<bool> replaced(g.node_count(), false);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) != 3) continue;
    bool all_down = std::all_of(g.neighbors(v).begin(), g.neighbors(v).end(),
                                [&](const Neighbor& n) { return dist[n.node] == dist[v] - 1; });
    replaced[v] = all_down;
  }

  GadgetResult out;
  std::vector<NodeIndex> first(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    first[v] = static_cast<NodeIndex>(out.origin.size());
    const int copies = replaced[v] ? 3 : 1;
    for (int c = 0; c < copies; ++c) {
      out.graph.add_node(static_cast<std::int64_t>(out.origin.size()), g.color(v));
      out.origin.push_back(v);
    }
  }
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (!replaced[v]) continue;
    out.graph.add_edge(first[v], first[v] + 1, reserved::kGadgetLabel);
    out.graph.add_edge(first[v] + 1, first[v] + 2, reserved::kGadgetLabel);
    out.graph.add_edge(first[v], first[v] + 2, reserved::kGadgetLabel);
  }
  // Corner i of a triangle takes the i-th incident edge (by neighbor index).
  auto endpoint = [&](NodeIndex v, NodeIndex other) -> NodeIndex {
    if (!replaced[v]) return first[v];
    std::vector<NodeIndex> nbrs;
    for (const auto& n : g.neighbors(v)) nbrs.push_back(n.node);
    std::sort(nbrs.begin(), nbrs.end());
    auto pos = std::find(nbrs.begin(), nbrs.end(), other) - nbrs.begin();
    return first[v] + static_cast<NodeIndex>(pos);
  };
  for (const auto& e : g.edges()) out.graph.add_edge(endpoint(e.u, e.v), endpoint(e.v, e.u), e.label);
  return out;
}

LayerDecomposition layer_sequence(const LabeledGraph& g, NodeIndex a, NodeIndex b, bool apply_gadget) {
  require_valid(g);
  require_edge(g, a, b);

  GadgetResult base;
  if (apply_gadget) {
    base = triangle_gadget(g, a, b);
  } else {
    base.graph = g;
    base.origin.resize(g.node_count());
    std::iota(base.origin.begin(), base.origin.end(), NodeIndex{0});
  }
  // a and b are never replaced by the gadget; find their copies.
  NodeIndex ga = 0, gb = 0;
  for (NodeIndex v = 0; v < base.origin.size(); ++v) {
    if (base.origin[v] == a) ga = v;
    if (base.origin[v] == b) gb = v;
  }

  const LabeledGraph& src = base.graph;
  const auto dist = distances_from_edge(src, ga, gb);
  std::vector<NodeIndex> order(src.node_count());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex x, NodeIndex y) {
    auto rank = [&](NodeIndex v) { return v == ga ? 0 : v == gb ? 1 : 2; };
    if (dist[x] != dist[y]) return dist[x] < dist[y];
    return rank(x) < rank(y);
  });
  std::vector<NodeIndex> position(src.node_count());
  for (NodeIndex i = 0; i < order.size(); ++i) position[order[i]] = i;

  LayerDecomposition dec;
  dec.gadget_applied_ = apply_gadget;
  dec.level_.resize(src.node_count());
  dec.origin_.resize(src.node_count());
  for (NodeIndex i = 0; i < order.size(); ++i) {
    dec.graph_.add_node(static_cast<std::int64_t>(i), src.color(order[i]));
    dec.level_[i] = dist[order[i]] + 1;
    dec.origin_[i] = base.origin[order[i]];
  }
  for (const auto& e : src.edges()) dec.graph_.add_edge(position[e.u], position[e.v], e.label);

  const int levels = dec.level_.back();
  dec.level_start_.assign(static_cast<std::size_t>(levels) + 2, 0);
  for (int r = 1; r <= levels + 1; ++r) {
    dec.level_start_[r] = static_cast<std::size_t>(
        std::lower_bound(dec.level_.begin(), dec.level_.end(), r) - dec.level_.begin());
  }

  dec.parents_.resize(src.node_count());
  for (NodeIndex v = 0; v < dec.graph_.node_count(); ++v) {
    for (const auto& n : dec.graph_.neighbors(v)) {
      if (dec.level_[n.node] == dec.level_[v] - 1) dec.parents_[v].push_back(n);
    }
    std::sort(dec.parents_[v].begin(), dec.parents_[v].end(),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }

  dec.depth_ = static_cast<std::size_t>(levels);
  for (const auto& e : dec.graph_.edges()) dec.depth_ = std::max(dec.depth_, dec.edge_level(e.u, e.v));

  dec.working_of_.assign(g.node_count(), 0);
  std::vector<bool> assigned(g.node_count(), false);
  for (NodeIndex v = 0; v < dec.origin_.size(); ++v) {
    if (!assigned[dec.origin_[v]]) {
      assigned[dec.origin_[v]] = true;
      dec.working_of_[dec.origin_[v]] = v;
    }
  }
  return dec;
}

std::size_t LayerDecomposition::prefix_size(std::size_t r) const {
  const std::size_t levels = level_start_.size() - 2;
  return level_start_[std::min(r, levels) + 1];
}

std::vector<NodeIndex> LayerDecomposition::new_nodes(std::size_t r) const {
  const std::size_t lo = r <= 1 ? 0 : prefix_size(r - 1);
  const std::size_t hi = prefix_size(r);
  std::vector<NodeIndex> out;
  for (std::size_t v = lo; v < hi; ++v) out.push_back(static_cast<NodeIndex>(v));
  return out;
}

std::size_t LayerDecomposition::edge_level(NodeIndex u, NodeIndex v) const {
  if ((u == 0 && v == 1) || (u == 1 && v == 0)) return 1;
  return static_cast<std::size_t>(std::min(level_[u], level_[v])) + 1;
}

std::vector<Edge> LayerDecomposition::edges_entering(std::size_t r) const {
  std::vector<Edge> out;
  for (const auto& e : graph_.sorted_edges()) {
    if (edge_level(e.u, e.v) == r) out.push_back(e);
  }
  return out;
}

std::vector<NodeIndex> LayerDecomposition::layer_nodes(std::size_t r) const {
  std::vector<NodeIndex> out(prefix_size(r));
  std::iota(out.begin(), out.end(), NodeIndex{0});
  return out;
}

std::vector<Edge> LayerDecomposition::layer_edges(std::size_t r) const {
  std::vector<Edge> out;
  for (const auto& e : graph_.sorted_edges()) {
    if (edge_level(e.u, e.v) <= r) out.push_back(e);
  }
  return out;
}

EdgeClass ElementColor::edge_class() const {
  if (!edge_label) return EdgeClass::none;
  return *edge_label == 0 ? EdgeClass::unlabeled : EdgeClass::labeled;
}

Multiplicity ElementColor::multiplicity() const {
  if (fiber.empty()) return Multiplicity::none;
  return fiber.size() == 1 ? Multiplicity::unique : Multiplicity::multiple;
}

ElementColor color_of(const LayerDecomposition& dec, std::size_t /*r*/, NodeIndex v) {
  ElementColor c;
  c.kind = ElementColor::Kind::node;
  c.node_color = dec.graph().color(v);
  return c;
}

ElementColor color_of(const LayerDecomposition& dec, std::size_t r, const NodeTuple& t) {
  if (t.size == 0 || t.size > 3) throw std::invalid_argument("color_of: malformed subset");
  for (std::uint8_t i = 0; i < t.size; ++i) {
    if (t.nodes[i] >= dec.graph().node_count() || dec.level_of(t.nodes[i]) != static_cast<int>(r)) {
      throw std::invalid_argument("color_of: subset is not within V_r");
    }
  }
  ElementColor c;
  c.edge_label = entering_edge_label(dec, r, t);
  const NodeTuple set = sorted_tuple(t.view());
  for (NodeIndex v : dec.new_nodes(r + 1)) {
    if (parent_set(dec, v) == set) c.fiber.push_back(fiber_entry(dec, v, t));
  }
  std::sort(c.fiber.begin(), c.fiber.end());
  return c;
}

LevelSpace::LevelSpace(const LayerDecomposition& dec, std::size_t r, std::span<const Permutation> gens)
    : level_(r), node_points_(dec.prefix_size(r)), prior_points_(r <= 1 ? 0 : dec.prefix_size(r - 1)) {
  for (const auto& g : gens) {
    if (g.degree() != node_points_) throw std::invalid_argument("LevelSpace: generator degree mismatch");
  }
  const auto children_nodes = dec.new_nodes(r + 1);
  std::unordered_map<std::uint64_t, std::vector<NodeIndex>> children;
  for (NodeIndex v : children_nodes) {
    children[pack(parent_set(dec, v))].push_back(v);
    const auto& parents = dec.neighbor_set(v);
    for (std::size_t i = 1; i < parents.size(); ++i) {
      if (parents[i].label != parents[0].label) oriented_ = true;
    }
  }

  std::vector<NodeTuple> seeds;
  for (NodeIndex v : children_nodes) seeds.push_back(parent_set(dec, v));
  for (const auto& e : dec.edges_entering(r + 1)) {
    if (dec.level_of(e.u) == static_cast<int>(r) && dec.level_of(e.v) == static_cast<int>(r)) {
      seeds.push_back(sorted_tuple(std::array<NodeIndex, 2>{e.u, e.v}));
    }
  }

  std::unordered_map<std::uint64_t, bool> seen;
  std::vector<NodeTuple> found;
  auto add = [&](const NodeTuple& t) {
    if (seen.emplace(pack(t), true).second) found.push_back(t);
  };
  for (const auto& s : seeds) {
    if (oriented_ && s.size > 1) {
      NodeTuple t = s;
      do {
        add(t);
      } while (std::next_permutation(t.nodes.begin(), t.nodes.begin() + t.size));
    } else {
      add(s);
    }
  }
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& g : gens) add(image(g, found[i]));
  }
  std::sort(found.begin(), found.end());
  tuples_ = std::move(found);
  for (std::size_t i = 0; i < tuples_.size(); ++i) index_[pack(tuples_[i])] = static_cast<Point>(node_points_ + i);

  std::map<ElementColor, int> interned;
  palette_.push_back(ElementColor::neutral());
  interned[palette_.front()] = 0;
  color_id_.assign(size(), 0);
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    const NodeTuple& t = tuples_[i];
    ElementColor c;
    c.edge_label = entering_edge_label(dec, r, t);
    if (auto it = children.find(pack(sorted_tuple(t.view()))); it != children.end()) {
      for (NodeIndex v : it->second) c.fiber.push_back(fiber_entry(dec, v, t));
      std::sort(c.fiber.begin(), c.fiber.end());
    }
    auto [it, inserted] = interned.try_emplace(c, static_cast<int>(palette_.size()));
    if (inserted) palette_.push_back(std::move(c));
    color_id_[node_points_ + i] = it->second;
  }
  node_color_id_.reserve(node_points_);
  for (std::size_t v = 0; v < node_points_; ++v) node_color_id_.push_back(dec.graph().color(static_cast<NodeIndex>(v)));
}

ElementColor LevelSpace::color(Point p) const {
  if (p < node_points_) {
    ElementColor c;
    c.kind = ElementColor::Kind::node;
    c.node_color = node_color_id_[p];
    return c;
  }
  return palette_[color_id_[p]];
}

std::vector<Point> LevelSpace::b_set() const {
  std::vector<Point> out(prior_points_);
  std::iota(out.begin(), out.end(), Point{0});
  auto subsets = subset_points();
  out.insert(out.end(), subsets.begin(), subsets.end());
  return out;
}

std::vector<Point> LevelSpace::subset_points() const {
  std::vector<Point> out(tuples_.size());
  std::iota(out.begin(), out.end(), static_cast<Point>(node_points_));
  return out;
}

std::optional<Point> LevelSpace::point_of(const NodeTuple& t) const {
  auto it = index_.find(pack(t));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeTuple LevelSpace::image(const Permutation& on_nodes, const NodeTuple& t) const {
  NodeTuple out;
  out.size = t.size;
  for (std::uint8_t i = 0; i < t.size; ++i) out.nodes[i] = on_nodes(t.nodes[i]);
  if (!oriented_) std::sort(out.nodes.begin(), out.nodes.begin() + out.size);
  return out;
}

Permutation LevelSpace::extend(const Permutation& on_nodes) const {
  if (on_nodes.degree() != node_points_) throw std::invalid_argument("LevelSpace::extend: degree mismatch");
  std::vector<Point> img(size());
  for (std::size_t v = 0; v < node_points_; ++v) img[v] = on_nodes(static_cast<Point>(v));
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    auto it = index_.find(pack(image(on_nodes, tuples_[i])));
    if (it == index_.end()) throw std::logic_error("LevelSpace: subset set is not closed under the group");
    img[node_points_ + i] = it->second;
  }
  return Permutation::from_image_unchecked(std::move(img));
}

std::vector<Permutation> kernel_generators(const LayerDecomposition& dec, std::size_t r) {
  const std::size_t degree = dec.prefix_size(r + 1);
  std::map<std::vector<std::int64_t>, std::vector<NodeIndex>> classes;
  for (NodeIndex v : dec.new_nodes(r + 1)) classes[child_key(dec, v)].push_back(v);
  std::vector<Permutation> out;
  for (const auto& [key, members] : classes) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        out.push_back(Permutation::transposition(degree, members[i], members[j]));
      }
    }
  }
  return out;
}

Permutation lift(const LayerDecomposition& dec, std::size_t r, const Permutation& sigma) {
  if (sigma.degree() != dec.prefix_size(r)) throw std::invalid_argument("lift: degree mismatch");
  const std::size_t degree = dec.prefix_size(r + 1);
  std::vector<Point> img(degree);
  for (std::size_t v = 0; v < sigma.degree(); ++v) img[v] = sigma(static_cast<Point>(v));
  std::map<std::vector<std::int64_t>, std::vector<NodeIndex>> classes;
  const auto children = dec.new_nodes(r + 1);
  for (NodeIndex v : children) classes[child_key(dec, v)].push_back(v);
  for (const auto& [key, members] : classes) {
    auto target_key = child_key(dec, members.front(), &sigma);
    auto it = classes.find(target_key);
    if (it == classes.end() || it->second.size() != members.size()) {
      throw std::logic_error("lift: permutation does not extend to the next layer");
    }
    for (std::size_t i = 0; i < members.size(); ++i) img[members[i]] = it->second[i];
  }
  return Permutation(std::move(img));
}

}  // namespace luks
