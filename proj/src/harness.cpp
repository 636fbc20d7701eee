#include "luks/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace luks {

namespace {

void check_cap(std::size_t n) {
  if (n > kOracleNodeCap) {
    throw std::invalid_argument("oracle: " + std::to_string(n) + " nodes exceeds the cap of " +
                                std::to_string(kOracleNodeCap));
  }
}

// BFS order from `start` covering every node (components appended).
std::vector<NodeIndex> bfs_order(std::size_t n, NodeIndex start,
                                 const std::function<std::vector<NodeIndex>(NodeIndex)>& neighbors) {
  std::vector<NodeIndex> order;
  std::vector<bool> seen(n, false);
  auto run = [&](NodeIndex s) {
    seen[s] = true;
    order.push_back(s);
    for (std::size_t i = order.size() - 1; i < order.size(); ++i) {
      for (NodeIndex w : neighbors(order[i])) {
        if (!seen[w]) {
          seen[w] = true;
          order.push_back(w);
        }
      }
    }
  };
  if (n > 0) run(start);
  for (NodeIndex v = 0; v < n; ++v) {
    if (!seen[v]) run(v);
  }
  return order;
}

// Enumerates color/label-preserving isomorphisms g1 -> g2 that extend the
// initial pairs; `visit` returns false to stop.
class GraphMatcher {
 public:
  GraphMatcher(const LabeledGraph& g1, const LabeledGraph& g2) : g1_(g1), g2_(g2) {}

  void run(NodeIndex start, const std::vector<NodeIndex>& start_images,
           const std::function<bool(const std::vector<NodeIndex>&)>& visit) {
    if (g1_.node_count() != g2_.node_count() || g1_.edge_count() != g2_.edge_count()) return;
    if (g1_.node_count() == 0) {
      visit({});
      return;
    }
    order_ = bfs_order(g1_.node_count(), start, [&](NodeIndex v) {
      std::vector<NodeIndex> out;
      for (const auto& n : g1_.neighbors(v)) out.push_back(n.node);
      return out;
    });
    map_.assign(g1_.node_count(), kUnmapped);
    used_.assign(g2_.node_count(), false);
    visit_ = &visit;
    for (NodeIndex image : start_images) {
      if (!try_assign(start, image)) continue;
      bool go_on = extend(1);
      unassign(start, image);
      if (!go_on) return;
    }
  }

 private:
  static constexpr NodeIndex kUnmapped = ~NodeIndex{0};

  bool compatible(NodeIndex u, NodeIndex x) const {
    if (used_[x] || g1_.degree(u) != g2_.degree(x) || g1_.color(u) != g2_.color(x)) return false;
    for (const auto& n : g1_.neighbors(u)) {
      if (map_[n.node] == kUnmapped) continue;
      auto label = g2_.edge_label(x, map_[n.node]);
      if (!label || *label != n.label) return false;
    }
    return true;
  }

  bool try_assign(NodeIndex u, NodeIndex x) {
    if (!compatible(u, x)) return false;
    map_[u] = x;
    used_[x] = true;
    return true;
  }

  void unassign(NodeIndex u, NodeIndex x) {
    map_[u] = kUnmapped;
    used_[x] = false;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return (*visit_)(map_);
    const NodeIndex u = order_[depth];
    for (NodeIndex x = 0; x < g2_.node_count(); ++x) {
      if (!try_assign(u, x)) continue;
      bool go_on = extend(depth + 1);
      unassign(u, x);
      if (!go_on) return false;
    }
    return true;
  }

  const LabeledGraph& g1_;
  const LabeledGraph& g2_;
  std::vector<NodeIndex> order_;
  std::vector<NodeIndex> map_;
  std::vector<bool> used_;
  const std::function<bool(const std::vector<NodeIndex>&)>* visit_ = nullptr;
};

std::vector<NodeIndex> all_nodes(std::size_t n) {
  std::vector<NodeIndex> v(n);
  std::iota(v.begin(), v.end(), NodeIndex{0});
  return v;
}

}  // namespace

bool oracle_isomorphic(const LabeledGraph& g1, const LabeledGraph& g2) {
  check_cap(g1.node_count());
  check_cap(g2.node_count());
  bool found = false;
  GraphMatcher(g1, g2).run(0, all_nodes(g2.node_count()), [&](const std::vector<NodeIndex>&) {
    found = true;
    return false;
  });
  return found;
}

std::vector<Permutation> oracle_aut_e(const LabeledGraph& g, Edge e) {
  check_cap(g.node_count());
  if (!g.has_edge(e.u, e.v)) throw std::invalid_argument("oracle_aut_e: not an edge");
  std::vector<Permutation> out;
  GraphMatcher(g, g).run(e.u, {e.u, e.v}, [&](const std::vector<NodeIndex>& map) {
    if (map[e.v] == e.u || map[e.v] == e.v) out.emplace_back(std::vector<Point>(map.begin(), map.end()));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool oracle_network_isomorphic(const PhyloNetwork& a, const PhyloNetwork& b) {
  check_cap(a.node_count());
  check_cap(b.node_count());
  if (a.node_count() != b.node_count() || a.arc_count() != b.arc_count()) return false;
  const std::size_t n = a.node_count();
  if (n == 0) return true;
  auto order = bfs_order(n, 0, [&](NodeIndex v) {
    std::vector<NodeIndex> out = a.children(v);
    out.insert(out.end(), a.parents(v).begin(), a.parents(v).end());
    return out;
  });
  constexpr NodeIndex kUnmapped = ~NodeIndex{0};
  std::vector<NodeIndex> map(n, kUnmapped);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == n) return true;
    const NodeIndex u = order[depth];
    for (NodeIndex x = 0; x < n; ++x) {
      if (used[x] || a.label(u) != b.label(x) || a.in_degree(u) != b.in_degree(x) ||
          a.out_degree(u) != b.out_degree(x)) {
        continue;
      }
      bool ok = true;
      for (NodeIndex w = 0; w < n && ok; ++w) {
        if (map[w] == kUnmapped) continue;
        ok = a.has_arc(u, w) == b.has_arc(x, map[w]) && a.has_arc(w, u) == b.has_arc(map[w], x);
      }
      if (!ok) continue;
      map[u] = x;
      used[x] = true;
      if (extend(depth + 1)) return true;
      map[u] = kUnmapped;
      used[x] = false;
    }
    return false;
  };
  return extend(0);
}

LabeledGraph random_ternary_graph(std::size_t n, std::uint64_t seed, double fill) {
  if (n == 0) throw std::invalid_argument("random_ternary_graph: n must be positive");
  Rng rng(seed);
  LabeledGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(0);
  std::vector<NodeIndex> open;  // nodes of degree < 3
  open.push_back(0);
  for (NodeIndex v = 1; v < n; ++v) {
    const std::size_t pick = rng.below(open.size());
    const NodeIndex u = open[pick];
    g.add_edge(u, v);
    if (g.degree(u) == 3) {
      open[pick] = open.back();
      open.pop_back();
    }
    open.push_back(v);
  }

  std::size_t budget = 0;
  for (NodeIndex v = 0; v < n; ++v) budget += 3 - g.degree(v);
  const auto target = static_cast<std::size_t>(std::floor(std::clamp(fill, 0.0, 1.0) * static_cast<double>(budget / 2)));
  std::size_t added = 0, failures = 0;
  while (added < target && open.size() >= 2 && failures < 64) {
    const std::size_t i = rng.below(open.size());
    std::size_t j = rng.below(open.size() - 1);
    if (j >= i) ++j;
    const NodeIndex u = open[i], v = open[j];
    if (g.has_edge(u, v)) {
      ++failures;
      continue;
    }
    failures = 0;
    g.add_edge(u, v);
    ++added;
    // Remove saturated nodes, larger index first so the other stays valid.
    for (std::size_t k : {std::max(i, j), std::min(i, j)}) {
      if (g.degree(open[k]) == 3) {
        open[k] = open.back();
        open.pop_back();
      }
    }
  }
  return g;
}

namespace {

struct EdgeSet {
  std::vector<std::set<NodeIndex>> adj;
  explicit EdgeSet(std::size_t n) : adj(n) {}
  bool has(NodeIndex u, NodeIndex v) const { return adj[u].count(v) > 0; }
  void add(NodeIndex u, NodeIndex v) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  void remove(NodeIndex u, NodeIndex v) {
    adj[u].erase(v);
    adj[v].erase(u);
  }
  std::vector<int> components() const {
    std::vector<int> comp(adj.size(), -1);
    int c = 0;
    for (NodeIndex s = 0; s < adj.size(); ++s) {
      if (comp[s] >= 0) continue;
      std::vector<NodeIndex> stack{s};
      comp[s] = c;
      while (!stack.empty()) {
        NodeIndex v = stack.back();
        stack.pop_back();
        for (NodeIndex w : adj[v]) {
          if (comp[w] < 0) {
            comp[w] = c;
            stack.push_back(w);
          }
        }
      }
      ++c;
    }
    return comp;
  }
  bool connected() const {
    auto comp = components();
    return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
  }
};

}  // namespace

std::optional<LabeledGraph> degree_sequence_graph(const std::vector<int>& degrees, std::uint64_t seed) {
  const std::size_t n = degrees.size();
  if (n == 0) return std::nullopt;
  if (n == 1) {
    if (degrees[0] != 0) return std::nullopt;
    LabeledGraph g;
    g.add_node(0);
    return g;
  }
  long sum = 0;
  for (int d : degrees) {
    if (d < 1 || d > 3) return std::nullopt;
    sum += d;
  }
  if (sum % 2 != 0 || sum < 2 * static_cast<long>(n - 1)) return std::nullopt;

  // Havel-Hakimi.
  EdgeSet es(n);
  std::vector<int> residual(degrees);
  while (true) {
    std::vector<NodeIndex> order(n);
    std::iota(order.begin(), order.end(), NodeIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return residual[a] > residual[b]; });
    const NodeIndex v = order[0];
    if (residual[v] == 0) break;
    const int need = residual[v];
    residual[v] = 0;
    for (int k = 1; k <= need; ++k) {
      if (static_cast<std::size_t>(k) >= n || residual[order[k]] == 0) return std::nullopt;
      es.add(v, order[k]);
      --residual[order[k]];
    }
  }

  // Merge components by 2-switches on a cycle edge.
  while (true) {
    auto comp = es.components();
    const int count = *std::max_element(comp.begin(), comp.end()) + 1;
    if (count == 1) break;
    std::optional<std::pair<NodeIndex, NodeIndex>> cycle_edge;
    for (NodeIndex u = 0; u < n && !cycle_edge; ++u) {
      const std::vector<NodeIndex> around(es.adj[u].begin(), es.adj[u].end());
      for (NodeIndex w : around) {
        if (w < u) continue;
        es.remove(u, w);
        bool still = es.components()[w] == es.components()[u];
        es.add(u, w);
        if (still) {
          cycle_edge = {u, w};
          break;
        }
      }
    }
    if (!cycle_edge) return std::nullopt;
    auto [a1, a2] = *cycle_edge;
    std::optional<std::pair<NodeIndex, NodeIndex>> other;
    for (NodeIndex u = 0; u < n && !other; ++u) {
      if (comp[u] == comp[a1]) continue;
      for (NodeIndex w : es.adj[u]) {
        other = {u, w};
        break;
      }
    }
    if (!other) return std::nullopt;
    auto [b1, b2] = *other;
    es.remove(a1, a2);
    es.remove(b1, b2);
    es.add(a1, b1);
    es.add(a2, b2);
  }

  // Randomize with connectivity-preserving double edge swaps.
  Rng rng(seed);
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex w : es.adj[u]) {
      if (u < w) edges.emplace_back(u, w);
    }
  }
  const std::size_t swaps = 2 * edges.size();
  for (std::size_t s = 0; s < swaps && edges.size() >= 2; ++s) {
    std::size_t i = rng.below(edges.size()), j = rng.below(edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng.bernoulli(0.5)) std::swap(c, d);
    // (a b), (c d) -> (a c), (b d)
    if (a == c || b == d || a == d || b == c || es.has(a, c) || es.has(b, d)) continue;
    es.remove(a, b);
    es.remove(c, d);
    es.add(a, c);
    es.add(b, d);
    if (!es.connected()) {
      es.remove(a, c);
      es.remove(b, d);
      es.add(a, b);
      es.add(c, d);
      continue;
    }
    edges[i] = {std::min(a, c), std::max(a, c)};
    edges[j] = {std::min(b, d), std::max(b, d)};
  }

  LabeledGraph g;
  for (std::size_t v = 0; v < n; ++v) g.add_node(0);
  std::sort(edges.begin(), edges.end());
  for (auto [u, w] : edges) g.add_edge(u, w);
  return g;
}

std::vector<NodeIndex> random_permutation(std::size_t n, Rng& rng) {
  std::vector<NodeIndex> perm(n);
  std::iota(perm.begin(), perm.end(), NodeIndex{0});
  rng.shuffle(perm);
  return perm;
}

LabeledGraph relabel_graph(const LabeledGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  return permute_nodes(g, random_permutation(g.node_count(), rng));
}

std::string_view to_string(BenchMode mode) {
  switch (mode) {
    case BenchMode::random: return "random";
    case BenchMode::semirandom: return "semirandom";
    case BenchMode::isomorphic: return "isomorphic";
    case BenchMode::phylo: return "phylo";
    case BenchMode::phylo_undirected_iso: return "phylo-undirected-iso";
  }
  return "?";
}

std::optional<BenchMode> parse_bench_mode(std::string_view text) {
  for (auto m : {BenchMode::random, BenchMode::semirandom, BenchMode::isomorphic, BenchMode::phylo,
                 BenchMode::phylo_undirected_iso}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

namespace {

std::vector<int> random_degrees(std::size_t n, Rng& rng) {
  while (true) {
    std::vector<int> d(n);
    for (auto& x : d) x = 1 + static_cast<int>(rng.below(3));
    long sum = std::accumulate(d.begin(), d.end(), 0L);
    if (sum % 2 != 0) {
      // Fix parity on the last node, which is the one left free.
      d.back() = d.back() == 3 ? 2 : d.back() + 1;
      sum = std::accumulate(d.begin(), d.end(), 0L);
    }
    if (sum >= 2 * static_cast<long>(n - 1)) return d;
  }
}

LabeledGraph realize(const std::vector<int>& degrees, Rng& rng) {
  while (true) {
    if (auto g = degree_sequence_graph(degrees, rng.next())) return *g;
  }
}

// Reverses a random arc whose reversal keeps the network valid; the
// underlying undirected graph is unchanged.
PhyloNetwork undirected_twin(const PhyloNetwork& net, Rng& rng) {
  std::vector<std::size_t> arcs(net.arc_count());
  std::iota(arcs.begin(), arcs.end(), std::size_t{0});
  rng.shuffle(arcs);
  for (std::size_t k : arcs) {
    if (auto m = reverse_arc(net, k)) return *m;
  }
  return net;
}

BenchRecord run_one(const BenchConfig& config, std::size_t n, std::size_t trial) {
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(config.mode), n, trial));
  BenchRecord rec;
  rec.n = n;
  rec.trial = trial;
  rec.mode = config.mode;
  IsoOptions iso;
  iso.aut = config.aut;

  std::function<bool()> call;
  LabeledGraph g1, g2;
  PhyloNetwork a, b;
  switch (config.mode) {
    case BenchMode::random:
      g1 = random_ternary_graph(n, rng.next());
      g2 = random_ternary_graph(n, rng.next());
      break;
    case BenchMode::semirandom: {
      auto degrees = random_degrees(n, rng);
      g1 = realize(degrees, rng);
      g2 = realize(degrees, rng);
      break;
    }
    case BenchMode::isomorphic:
      g1 = random_ternary_graph(n, rng.next());
      g2 = relabel_graph(g1, rng.next());
      break;
    case BenchMode::phylo:
      a = random_network(n, 0.5, rng.next());
      b = relabel_network(a, random_permutation(a.node_count(), rng));
      break;
    case BenchMode::phylo_undirected_iso:
      a = random_network(n, 0.5, rng.next());
      b = relabel_network(undirected_twin(a, rng), random_permutation(a.node_count(), rng));
      break;
  }
  const bool phylo = config.mode == BenchMode::phylo || config.mode == BenchMode::phylo_undirected_iso;
  const auto start = std::chrono::steady_clock::now();
  rec.verdict = phylo ? phylo_isomorphic(a, b, false, config.aut).isomorphic : is_isomorphic(g1, g2, iso).isomorphic;
  const auto stop = std::chrono::steady_clock::now();
  rec.elapsed = config.timing ? std::chrono::duration<double>(stop - start).count() : 0.0;
  return rec;
}

}  // namespace

std::vector<BenchRecord> bench_run(const BenchConfig& config) {
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t n : config.sizes) {
    for (std::size_t t = 0; t < config.trials; ++t) tasks.emplace_back(n, t);
  }
  std::vector<BenchRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) records[i] = run_one(config, tasks[i].first, tasks[i].second);
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, tasks.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::sort(records.begin(), records.end(), [](const BenchRecord& x, const BenchRecord& y) {
    return std::tuple(static_cast<int>(x.mode), x.n, x.trial) < std::tuple(static_cast<int>(y.mode), y.n, y.trial);
  });
  return records;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "n,trial,verdict,elapsed,mode\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.6f", r.elapsed);
    out += std::to_string(r.n) + "," + std::to_string(r.trial) + "," + (r.verdict ? "true" : "false") + "," + buf +
           "," + std::string(to_string(r.mode)) + "\n";
  }
  return out;
}

std::vector<SizeSummary> bench_summary(const std::vector<BenchRecord>& records) {
  std::map<std::size_t, std::vector<const BenchRecord*>> by_size;
  for (const auto& r : records) by_size[r.n].push_back(&r);
  std::vector<SizeSummary> out;
  for (const auto& [n, rs] : by_size) {
    SizeSummary s;
    s.n = n;
    s.trials = rs.size();
    std::vector<double> times;
    for (const auto* r : rs) {
      times.push_back(r->elapsed);
      if (r->verdict) ++s.positives;
    }
    std::sort(times.begin(), times.end());
    const std::size_t m = times.size();
    s.median = m % 2 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
    if (!out.empty() && out.back().median > 0 && s.median > 0) {
      s.slope = std::log2(s.median / out.back().median) /
                std::log2(static_cast<double>(n) / static_cast<double>(out.back().n));
    }
    out.push_back(s);
  }
  return out;
}

std::string format_summary(const std::vector<SizeSummary>& summary) {
  std::string out = "n,trials,positives,median_seconds,slope\n";
  char buf[128];
  for (const auto& s : summary) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.6f,", s.n, s.trials, s.positives, s.median);
    out += buf;
    if (s.slope) {
      std::snprintf(buf, sizeof buf, "%.3f", *s.slope);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace luks
