#include "luks/isomorphism.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace luks {

namespace {

Sgs initial_group(const LayerDecomposition& dec) {
  Sgs g(dec.prefix_size(1));
  if (dec.graph().color(0) == dec.graph().color(1)) g.gens.push_back(Permutation::transposition(2, 0, 1));
  return g;
}

bool swaps_base(const Permutation& p) { return p(0) == 1; }

Sgs extend_all(const LevelSpace& space, std::span<const Permutation> gens) {
  Sgs out(space.size());
  out.gens.reserve(gens.size());
  for (const auto& g : gens) out.gens.push_back(space.extend(g));
  return out;
}

Sgs restrict_all(const Sgs& sgs, std::size_t degree) {
  Sgs out(degree);
  for (const auto& g : sgs.gens) {
    Permutation r = g.restricted(degree);
    if (!r.is_identity()) out.gens.push_back(std::move(r));
  }
  return out;
}

// Color filtering over the subset points of one level, for cosets of a
// fixed group (and its subgroups).
class LevelSolver {
 public:
  LevelSolver(const LevelSpace& space, const Sgs& group, const AutOptions& options, AutStats* stats)
      : space_(space), points_(space.subset_points()), options_(options), stats_(stats) {
    if (options_.solver == Solver::tree && !points_.empty()) {
      tree_.emplace(StructureTree::build(points_, group));
      tree_->annotate(space_.color_ids());
    }
  }

  Coset filter(const Coset& coset) {
    if (points_.empty()) return coset;
    SolveStats* s = stats_ ? &stats_->solve : nullptr;
    if (tree_) return color_filter_tree(coset, *tree_, space_.color_ids(), s);
    return color_filter(coset, points_, space_.color_ids(), s);
  }

 private:
  const LevelSpace& space_;
  std::vector<Point> points_;
  AutOptions options_;
  AutStats* stats_;
  std::optional<StructureTree> tree_;
};

void note_level(AutStats* stats, const LevelSpace& space) {
  if (!stats) return;
  ++stats->levels;
  stats->max_level_points = std::max(stats->max_level_points, space.size() - space.node_points());
}

Sgs next_group(const LayerDecomposition& dec, std::size_t r, const Sgs& projected) {
  Sgs next(dec.prefix_size(r + 1), kernel_generators(dec, r));
  for (const auto& s : projected.gens) {
    Permutation lifted = lift(dec, r, s);
    if (!lifted.is_identity()) next.gens.push_back(std::move(lifted));
  }
  return next;
}

void require_user_values(const LabeledGraph& g, const char* what) {
  require_valid(g, what);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (g.color(v) < 0) throw InputError(std::string(what) + ": negative node colors are reserved");
  }
  for (const auto& e : g.edges()) {
    if (e.label < 0) throw InputError(std::string(what) + ": negative edge labels are reserved");
  }
}

bool local_match(const LabeledGraph& g1, const Edge& e1, const LabeledGraph& g2, const Edge& e2) {
  if (e1.label != e2.label) return false;
  auto profile = [](const LabeledGraph& g, const Edge& e) {
    std::array<std::pair<std::size_t, int>, 2> p{{{g.degree(e.u), g.color(e.u)}, {g.degree(e.v), g.color(e.v)}}};
    std::sort(p.begin(), p.end());
    return p;
  };
  return profile(g1, e1) == profile(g2, e2);
}

IsoResult search(const LabeledGraph& g1, const LabeledGraph& g2, const IsoOptions& options, bool swap_mode) {
  require_user_values(g1, "first graph");
  require_user_values(g2, "second graph");
  IsoResult result;
  if (options.pretests) {
    if (auto failed = pretest_mismatch(g1, g2)) {
      result.decided_by = "pretest:" + *failed;
      return result;
    }
  }
  if (g1.node_count() == 1 || g2.node_count() == 1) {
    result.decided_by = "single-node";
    result.isomorphic = g1.node_count() == 1 && g2.node_count() == 1 && g1.color(0) == g2.color(0);
    if (result.isomorphic && options.want_mapping) result.mapping = std::vector<NodeIndex>{0};
    return result;
  }

  result.decided_by = "search";
  const Edge e1 = g1.sorted_edges().front();
  for (const Edge& e2 : g2.sorted_edges()) {
    if (!local_match(g1, e1, g2, e2)) continue;
    ++result.candidates_tried;
    SpliceResult splice = build_x(g1, g2, e1, e2);
    LayerDecomposition dec = layer_sequence(splice.graph, splice.v1, splice.v2, options.aut.triangle_gadget);

    std::optional<Permutation> witness;
    if (swap_mode) {
      witness = swap_tower(dec, options.aut).swap;
    } else {
      Sgs group = aut_e_tower(dec, options.aut, nullptr, true);
      for (const auto& g : group.gens) {
        if (swaps_base(g)) {
          witness = g;
          break;
        }
      }
    }
    if (!witness) continue;

    std::vector<NodeIndex> mapping(g1.node_count());
    for (NodeIndex u = 0; u < g1.node_count(); ++u) {
      const NodeIndex image = dec.origin((*witness)(dec.working_of(u)));
      if (image < splice.offset2) throw std::logic_error("isomorphism witness does not exchange the parts");
      mapping[u] = image - splice.offset2;
    }
    if (!is_isomorphism(g1, g2, mapping)) throw std::logic_error("isomorphism witness failed verification");
    result.isomorphic = true;
    if (options.want_mapping) result.mapping = std::move(mapping);
    return result;
  }
  return result;
}

}  // namespace

Sgs aut_e_tower(const LayerDecomposition& dec, const AutOptions& options, AutStats* stats,
                bool stop_without_swap) {
  Sgs group = initial_group(dec);
  for (std::size_t r = 1; r < dec.depth(); ++r) {
    if (stop_without_swap && std::none_of(group.gens.begin(), group.gens.end(), swaps_base)) return group;
    LevelSpace space(dec, r, group.gens);
    note_level(stats, space);
    Sgs solved = group;
    if (!group.empty() && space.size() > space.node_points()) {
      Sgs ext = extend_all(space, group.gens);
      LevelSolver solver(space, ext, options, stats);
      Coset c = solver.filter(Coset::subgroup(ext));
      if (c.empty()) throw std::logic_error("color filter lost the identity");
      solved = restrict_all(c.sub(), space.node_points());
    }
    group = next_group(dec, r, solved);
  }
  return group;
}

SwapSearch swap_tower(const LayerDecomposition& dec, const AutOptions& options) {
  SwapSearch out;
  out.preserving = Sgs(dec.prefix_size(1));
  std::optional<Permutation> sigma;
  if (dec.graph().color(0) == dec.graph().color(1)) sigma = Permutation::transposition(2, 0, 1);
  if (!sigma) return out;

  for (std::size_t r = 1; r < dec.depth(); ++r) {
    std::vector<Permutation> gens = out.preserving.gens;
    gens.push_back(*sigma);
    LevelSpace space(dec, r, gens);
    note_level(&out.stats, space);
    Sgs solved = out.preserving;
    Permutation swap = *sigma;
    if (space.size() > space.node_points()) {
      Sgs ext = extend_all(space, out.preserving.gens);
      LevelSolver solver(space, ext, options, &out.stats);
      Coset keep = solver.filter(Coset::subgroup(ext));
      Coset exchange = solver.filter(Coset(space.extend(*sigma), ext));
      if (exchange.empty()) return out;
      solved = restrict_all(keep.sub(), space.node_points());
      swap = exchange.rep().restricted(space.node_points());
    }
    out.preserving = next_group(dec, r, solved);
    sigma = lift(dec, r, swap);
  }
  out.swap = std::move(sigma);
  return out;
}

AutResult aut_e_generators(const LabeledGraph& g, Edge e, const AutOptions& options) {
  require_valid(g);
  if (e.u >= g.node_count() || e.v >= g.node_count() || !g.has_edge(e.u, e.v)) {
    throw InputError("base edge is not an edge of the graph");
  }
  LayerDecomposition dec = layer_sequence(g, e.u, e.v, options.triangle_gadget);
  AutResult result;
  result.base = Edge{e.u, e.v, *g.edge_label(e.u, e.v)};
  Sgs working = aut_e_tower(dec, options, &result.stats);

  const std::size_t n = g.node_count();
  result.generators = Sgs(n);
  for (const auto& w : working.gens) {
    std::vector<Point> image(n);
    for (NodeIndex u = 0; u < n; ++u) image[u] = dec.origin(w(dec.working_of(u)));
    Permutation p(std::move(image));
    if (!p.is_identity()) result.generators.gens.push_back(std::move(p));
  }
  for (const auto& p : result.generators.gens) {
    if (p(e.u) == e.v) {
      result.swap_witness = p;
      break;
    }
  }
  return result;
}

std::optional<std::string> pretest_mismatch(const LabeledGraph& g1, const LabeledGraph& g2) {
  if (g1.node_count() != g2.node_count()) return "node-count";
  if (g1.edge_count() != g2.edge_count()) return "edge-count";
  auto sorted = [](auto values) {
    std::sort(values.begin(), values.end());
    return values;
  };
  auto degrees = [&](const LabeledGraph& g) {
    std::vector<std::size_t> d;
    for (NodeIndex v = 0; v < g.node_count(); ++v) d.push_back(g.degree(v));
    return sorted(d);
  };
  if (degrees(g1) != degrees(g2)) return "degree-sequence";
  auto colors = [&](const LabeledGraph& g) {
    std::vector<int> c;
    for (NodeIndex v = 0; v < g.node_count(); ++v) c.push_back(g.color(v));
    return sorted(c);
  };
  if (colors(g1) != colors(g2)) return "color-multiset";
  auto labels = [&](const LabeledGraph& g) {
    std::vector<int> l;
    for (const auto& e : g.edges()) l.push_back(e.label);
    return sorted(l);
  };
  if (labels(g1) != labels(g2)) return "label-multiset";
  return std::nullopt;
}

IsoResult is_isomorphic(const LabeledGraph& g1, const LabeledGraph& g2, const IsoOptions& options) {
  return search(g1, g2, options, false);
}

IsoResult is_isomorphic_swap(const LabeledGraph& g1, const LabeledGraph& g2, const IsoOptions& options) {
  return search(g1, g2, options, true);
}

}  // namespace luks
