// luks: ternary graph and phylogenetic network isomorphism from the shell.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "luks/graph.hpp"
#include "luks/harness.hpp"
#include "luks/isomorphism.hpp"
#include "luks/phylo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

bool stderr_colored() {
  const char* no_color = std::getenv("NO_COLOR");
  if (no_color != nullptr && no_color[0] != '\0') return false;
  return isatty(fileno(stderr)) != 0;
}

void report_error(const std::string& message) {
  if (stderr_colored())
    std::cerr << "\033[31merror:\033[0m " << message << '\n';
  else
    std::cerr << "error: " << message << '\n';
}

luks::AutOptions aut_options(const std::string& solver, bool no_gadget) {
  luks::AutOptions options;
  options.solver = solver == "naive" ? luks::Solver::naive : luks::Solver::tree;
  options.triangle_gadget = !no_gadget;
  return options;
}

std::string node_name(const luks::PhyloNetwork& net, luks::NodeIndex v) {
  const auto& label = net.label(v);
  return label ? *label : "#" + std::to_string(v);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw luks::InputError("cannot write " + path);
  out << text;
  if (!out) throw luks::InputError("write failed: " + path);
}

struct IsoArgs {
  std::string a, b;
  bool mapping = false;
  bool swap_only = false;
  bool no_pretests = false;
  std::string solver = "tree";
  bool no_gadget = false;
};

int run_iso(const IsoArgs& args) {
  const auto g1 = luks::read_graph_file(args.a);
  const auto g2 = luks::read_graph_file(args.b);
  luks::IsoOptions options;
  options.aut = aut_options(args.solver, args.no_gadget);
  options.want_mapping = args.mapping;
  options.pretests = !args.no_pretests;
  const auto result = args.swap_only ? luks::is_isomorphic_swap(g1, g2, options)
                                     : luks::is_isomorphic(g1, g2, options);
  if (result.mapping) {
    for (luks::NodeIndex u = 0; u < g1.node_count(); ++u)
      std::cout << g1.external_id(u) << " -> " << g2.external_id((*result.mapping)[u]) << '\n';
  }
  std::cout << (result.isomorphic ? "true" : "false") << '\n';
  return kExitOk;
}

struct AutArgs {
  std::string path;
  std::string edge;
  std::string solver = "tree";
  bool no_gadget = false;
};

int run_aut(const AutArgs& args) {
  const auto g = luks::read_graph_file(args.path);
  const auto comma = args.edge.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--edge", "expected U,V");
  std::int64_t u = 0, v = 0;
  try {
    u = std::stoll(args.edge.substr(0, comma));
    v = std::stoll(args.edge.substr(comma + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--edge", "expected two integer node ids");
  }
  const auto iu = g.index_of(u);
  const auto iv = g.index_of(v);
  if (!iu || !iv || !g.has_edge(*iu, *iv))
    throw luks::InputError("no edge " + std::to_string(u) + "," + std::to_string(v) + " in " + args.path);

  const auto result = luks::aut_e_generators(g, luks::Edge{*iu, *iv}, aut_options(args.solver, args.no_gadget));
  const auto name = [&](luks::Point p) { return std::to_string(g.external_id(p)); };
  if (result.generators.empty()) std::cout << "()\n";
  for (const auto& gen : result.generators.gens) std::cout << gen.to_cycle_string(name) << '\n';
  return kExitOk;
}

struct PhyloArgs {
  std::string a, b;
  bool mapping = false;
  bool no_pretests = false;
};

int run_phylo(const PhyloArgs& args) {
  const auto n1 = luks::read_enewick_file(args.a);
  const auto n2 = luks::read_enewick_file(args.b);
  const auto result = luks::phylo_isomorphic(n1, n2, args.mapping, {}, !args.no_pretests);
  if (result.mapping) {
    for (luks::NodeIndex u = 0; u < n1.node_count(); ++u)
      std::cout << node_name(n1, u) << " -> " << node_name(n2, (*result.mapping)[u]) << '\n';
  }
  std::cout << (result.isomorphic ? "true" : "false") << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::string mode = "isomorphic";
  std::vector<std::size_t> sizes;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t threads = 1;
  bool no_timing = false;
  std::string solver = "tree";
};

int run_bench(const BenchArgs& args) {
  const auto mode = luks::parse_bench_mode(args.mode);
  if (!mode) throw CLI::ValidationError("--mode", "unknown mode " + args.mode);
  for (auto n : args.sizes)
    if (n < 2) throw CLI::ValidationError("--sizes", "sizes must be at least 2");
  luks::BenchConfig config;
  config.mode = *mode;
  config.sizes = args.sizes;
  config.trials = args.trials;
  config.seed = args.seed;
  config.threads = args.threads == 0 ? 1 : args.threads;
  config.timing = !args.no_timing;
  config.aut = aut_options(args.solver, false);

  const auto records = luks::bench_run(config);
  write_output(luks::bench_csv(records), args.out);
  if (!args.out.empty() && args.out != "-") std::cout << luks::format_summary(luks::bench_summary(records));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isomorphism of ternary graphs and phylogenetic networks"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  const std::vector<std::string> solvers{"tree", "naive"};

  IsoArgs iso;
  auto* iso_cmd = app.add_subcommand("iso", "Test two graph files for isomorphism");
  iso_cmd->add_option("A", iso.a, "First graph file")->required();
  iso_cmd->add_option("B", iso.b, "Second graph file")->required();
  iso_cmd->add_flag("--mapping", iso.mapping, "Print a verified isomorphism as 'u -> v' lines");
  iso_cmd->add_flag("--swap-only", iso.swap_only, "Search only the part-swapping coset");
  iso_cmd->add_flag("--no-pretests", iso.no_pretests, "Skip the invariant pre-tests");
  iso_cmd->add_option("--solver", iso.solver, "Color-automorphism solver")->check(CLI::IsMember(solvers));
  iso_cmd->add_flag("--no-gadget", iso.no_gadget, "Do not replace three-parent nodes by triangles");

  AutArgs aut;
  auto* aut_cmd = app.add_subcommand("aut", "Generators of the automorphisms fixing an edge");
  aut_cmd->add_option("G", aut.path, "Graph file")->required();
  aut_cmd->add_option("--edge", aut.edge, "Edge as U,V (node ids)")->required();
  aut_cmd->add_option("--solver", aut.solver, "Color-automorphism solver")->check(CLI::IsMember(solvers));
  aut_cmd->add_flag("--no-gadget", aut.no_gadget, "Do not replace three-parent nodes by triangles");

  PhyloArgs phylo;
  auto* phylo_cmd = app.add_subcommand("phylo-iso", "Test two eNewick networks for isomorphism");
  phylo_cmd->add_option("A", phylo.a, "First eNewick file")->required();
  phylo_cmd->add_option("B", phylo.b, "Second eNewick file")->required();
  phylo_cmd->add_flag("--mapping", phylo.mapping, "Print a verified node mapping");
  phylo_cmd->add_flag("--no-pretests", phylo.no_pretests, "Skip the invariant pre-tests");

  auto* gen_cmd = app.add_subcommand("gen", "Generate random inputs");
  gen_cmd->require_subcommand(1, 1);

  std::size_t graph_n = 0;
  std::uint64_t graph_seed = 0;
  double graph_fill = 1.0;
  std::string graph_out;
  auto* gen_graph = gen_cmd->add_subcommand("graph", "Random connected ternary graph");
  gen_graph->add_option("N", graph_n, "Node count")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  gen_graph->add_option("--seed", graph_seed, "Random seed")->required();
  gen_graph->add_option("--fill", graph_fill, "Fraction of spare degree turned into edges")
      ->check(CLI::Range(0.0, 1.0));
  gen_graph->add_option("--out", graph_out, "Output file (default stdout)");

  std::size_t net_n = 0;
  double net_p = 0.5;
  std::uint64_t net_seed = 0;
  std::string net_out;
  auto* gen_network = gen_cmd->add_subcommand("network", "Random fully resolved network (eNewick)");
  gen_network->add_option("N", net_n, "Target node count")->required()->check(CLI::Range(std::size_t{3}, std::size_t{1} << 24));
  gen_network->add_option("--hybrid-prob", net_p, "Reticulation probability")->check(CLI::Range(0.0, 1.0));
  gen_network->add_option("--seed", net_seed, "Random seed")->required();
  gen_network->add_option("--out", net_out, "Output file (default stdout)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Timed runs on generated instances");
  bench_cmd->add_option("--mode", bench.mode, "random, semirandom, isomorphic, phylo, phylo-undirected-iso")
      ->required();
  bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated node counts")->required()->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per size");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--out", bench.out, "CSV output file (default stdout)");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads");
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Write 0 for elapsed times");
  bench_cmd->add_option("--solver", bench.solver, "Color-automorphism solver")->check(CLI::IsMember(solvers));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*iso_cmd) return run_iso(iso);
    if (*aut_cmd) return run_aut(aut);
    if (*phylo_cmd) return run_phylo(phylo);
    if (*gen_graph) {
      write_output(luks::format_graph(luks::random_ternary_graph(graph_n, graph_seed, graph_fill)), graph_out);
      return kExitOk;
    }
    if (*gen_network) {
      write_output(luks::write_enewick(luks::random_network(net_n, net_p, net_seed)) + "\n", net_out);
      return kExitOk;
    }
    if (*bench_cmd) return run_bench(bench);
  } catch (const CLI::ValidationError& e) {
    report_error(e.what());
    return kExitUsage;
  } catch (const luks::InputError& e) {
    report_error(e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    report_error(e.what());
    return kExitInput;
  }
  return kExitUsage;
}
