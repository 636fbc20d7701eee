#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "luks/graph.hpp"
#include "luks/harness.hpp"
#include "luks/isomorphism.hpp"
#include "luks/permgroup.hpp"
#include "luks/phylo.hpp"

namespace py = pybind11;
using namespace luks;

namespace {

AutOptions make_options(const std::string& solver, bool gadget) {
  AutOptions options;
  if (solver == "naive")
    options.solver = Solver::naive;
  else if (solver == "tree")
    options.solver = Solver::tree;
  else
    throw py::value_error("solver must be 'tree' or 'naive'");
  options.triangle_gadget = gadget;
  return options;
}

// Permutations cross the boundary as dicts keyed by external node id.
std::map<std::int64_t, std::int64_t> as_id_map(const LabeledGraph& g, const Permutation& p) {
  std::map<std::int64_t, std::int64_t> out;
  for (NodeIndex v = 0; v < g.node_count(); ++v) out[g.external_id(v)] = g.external_id(p(v));
  return out;
}

NodeIndex index_or_throw(const LabeledGraph& g, std::int64_t id) {
  auto i = g.index_of(id);
  if (!i) throw py::key_error("no node with id " + std::to_string(id));
  return *i;
}

py::dict iso_result(const LabeledGraph& g1, const LabeledGraph& g2, const IsoResult& r) {
  py::dict d;
  d["isomorphic"] = r.isomorphic;
  d["decided_by"] = r.decided_by;
  d["candidates_tried"] = r.candidates_tried;
  if (r.mapping) {
    std::map<std::int64_t, std::int64_t> m;
    for (NodeIndex u = 0; u < g1.node_count(); ++u) m[g1.external_id(u)] = g2.external_id((*r.mapping)[u]);
    d["mapping"] = m;
  } else {
    d["mapping"] = py::none();
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Isomorphism of ternary graphs and phylogenetic networks";

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", input_error.ptr());

  py::class_<LabeledGraph>(m, "Graph")
      .def(py::init<>())
      .def_static(
          "from_edges",
          [](const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
            return LabeledGraph::from_edges(edges);
          },
          py::arg("edges"))
      .def_static("parse", [](const std::string& text) { return parse_graph(text); }, py::arg("text"))
      .def_static("read", &read_graph_file, py::arg("path"))
      .def("to_text", [](const LabeledGraph& g) { return format_graph(g); })
      .def("add_node",
           [](LabeledGraph& g, std::int64_t id, int color) {
             if (id < 0 || color < 0) throw py::value_error("ids and colors must be non-negative");
             if (g.index_of(id)) throw py::value_error("duplicate node id");
             g.add_node(id, color);
           },
           py::arg("id"), py::arg("color") = 0)
      .def("add_edge",
           [](LabeledGraph& g, std::int64_t u, std::int64_t v, int label) {
             if (label < 0) throw py::value_error("labels must be non-negative");
             g.add_edge(index_or_throw(g, u), index_or_throw(g, v), label);
           },
           py::arg("u"), py::arg("v"), py::arg("label") = 0)
      .def_property_readonly("node_count", &LabeledGraph::node_count)
      .def_property_readonly("edge_count", &LabeledGraph::edge_count)
      .def("nodes",
           [](const LabeledGraph& g) {
             std::vector<std::int64_t> ids;
             for (NodeIndex v = 0; v < g.node_count(); ++v) ids.push_back(g.external_id(v));
             return ids;
           })
      .def("edges",
           [](const LabeledGraph& g) {
             std::vector<std::tuple<std::int64_t, std::int64_t, int>> out;
             for (const auto& e : g.sorted_edges()) out.emplace_back(g.external_id(e.u), g.external_id(e.v), e.label);
             return out;
           })
      .def("validate", [](const LabeledGraph& g) { return validate(g).violations; })
      .def("__repr__", [](const LabeledGraph& g) {
        return "<Graph nodes=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) + ">";
      });

  m.def(
      "is_isomorphic",
      [](const LabeledGraph& g1, const LabeledGraph& g2, bool mapping, bool swap_only, const std::string& solver,
         bool pretests) {
        IsoOptions options;
        options.aut = make_options(solver, true);
        options.want_mapping = mapping;
        options.pretests = pretests;
        IsoResult r;
        {
          py::gil_scoped_release release;
          r = swap_only ? is_isomorphic_swap(g1, g2, options) : is_isomorphic(g1, g2, options);
        }
        return iso_result(g1, g2, r);
      },
      py::arg("g1"), py::arg("g2"), py::arg("mapping") = false, py::arg("swap_only") = false,
      py::arg("solver") = "tree", py::arg("pretests") = true,
      "Returns a dict with 'isomorphic', 'mapping' (external ids or None) and 'decided_by'.");

  m.def(
      "aut_e_generators",
      [](const LabeledGraph& g, std::int64_t u, std::int64_t v, const std::string& solver) {
        const auto a = index_or_throw(g, u);
        const auto b = index_or_throw(g, v);
        AutResult r;
        {
          py::gil_scoped_release release;
          r = aut_e_generators(g, Edge{a, b}, make_options(solver, true));
        }
        std::vector<std::map<std::int64_t, std::int64_t>> gens;
        for (const auto& p : r.generators.gens) gens.push_back(as_id_map(g, p));
        return gens;
      },
      py::arg("graph"), py::arg("u"), py::arg("v"), py::arg("solver") = "tree",
      "Generators of the automorphisms fixing edge {u, v} setwise, as id -> id dicts.");

  m.def(
      "group_order",
      [](const std::vector<std::vector<Point>>& images, std::size_t degree, std::uint64_t cap) {
        std::vector<Permutation> gens;
        for (const auto& img : images) {
          if (img.size() != degree) throw py::value_error("permutation of the wrong degree");
          try {
            gens.emplace_back(img);
          } catch (const std::invalid_argument& e) {
            throw py::value_error(e.what());
          }
        }
        return group_order(gens, degree, cap);
      },
      py::arg("images"), py::arg("degree"), py::arg("cap") = kDefaultOrderCap,
      "Order of the group generated by image lists, or None above cap.");

  m.def("oracle_isomorphic", [](const LabeledGraph& g1, const LabeledGraph& g2) {
    try {
      return oracle_isomorphic(g1, g2);
    } catch (const std::invalid_argument& e) {
      throw py::value_error(e.what());
    }
  });

  m.def("random_ternary_graph", &random_ternary_graph, py::arg("n"), py::arg("seed"), py::arg("fill") = 1.0);
  m.def("relabel_graph", &relabel_graph, py::arg("graph"), py::arg("seed"));

  py::class_<PhyloNetwork>(m, "Network")
      .def_static("parse", [](const std::string& text) { return parse_enewick(text); }, py::arg("text"))
      .def_static("read", &read_enewick_file, py::arg("path"))
      .def("to_enewick", [](const PhyloNetwork& n) { return write_enewick(n); })
      .def_property_readonly("node_count", &PhyloNetwork::node_count)
      .def_property_readonly("arc_count", &PhyloNetwork::arc_count)
      .def("arcs", &PhyloNetwork::arcs)
      .def("label", [](const PhyloNetwork& n, NodeIndex v) {
        if (v >= n.node_count()) throw py::index_error("node out of range");
        return n.label(v);
      })
      .def("reticulation_count",
           [](const PhyloNetwork& n) {
             std::size_t k = 0;
             for (NodeIndex v = 0; v < n.node_count(); ++v) k += n.kind(v) == NodeKind::reticulate;
             return k;
           })
      .def("validate", [](const PhyloNetwork& n) { return validate_network(n).violations; })
      .def("__repr__", [](const PhyloNetwork& n) {
        return "<Network nodes=" + std::to_string(n.node_count()) + " arcs=" + std::to_string(n.arc_count()) + ">";
      });

  m.def(
      "phylo_isomorphic",
      [](const PhyloNetwork& a, const PhyloNetwork& b, bool mapping) {
        PhyloIsoResult r;
        {
          py::gil_scoped_release release;
          r = phylo_isomorphic(a, b, mapping);
        }
        py::dict d;
        d["isomorphic"] = r.isomorphic;
        d["decided_by"] = r.decided_by;
        if (r.mapping)
          d["mapping"] = *r.mapping;
        else
          d["mapping"] = py::none();
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("mapping") = false);

  m.def("random_network", &random_network, py::arg("n"), py::arg("hybrid_prob") = 0.5, py::arg("seed") = 0);

  m.def(
      "bench_csv",
      [](const std::string& mode, const std::vector<std::size_t>& sizes, std::size_t trials, std::uint64_t seed,
         bool timing) {
        auto parsed = parse_bench_mode(mode);
        if (!parsed) throw py::value_error("unknown bench mode " + mode);
        BenchConfig config;
        config.mode = *parsed;
        config.sizes = sizes;
        config.trials = trials;
        config.seed = seed;
        config.timing = timing;
        std::vector<BenchRecord> records;
        {
          py::gil_scoped_release release;
          records = bench_run(config);
        }
        return bench_csv(records);
      },
      py::arg("mode"), py::arg("sizes"), py::arg("trials") = 1, py::arg("seed") = 0, py::arg("timing") = true);
}
