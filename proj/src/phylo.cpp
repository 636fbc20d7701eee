#include "luks/phylo.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "luks/random.hpp"

namespace luks {

NodeIndex PhyloNetwork::add_node(std::optional<std::string> label) {
  labels_.push_back(std::move(label));
  children_.emplace_back();
  parents_.emplace_back();
  return static_cast<NodeIndex>(labels_.size() - 1);
}

void PhyloNetwork::add_arc(NodeIndex tail, NodeIndex head) {
  if (tail >= node_count() || head >= node_count()) throw std::invalid_argument("add_arc: node out of range");
  if (tail == head) throw std::invalid_argument("add_arc: loop");
  if (has_arc(tail, head)) throw std::invalid_argument("add_arc: repeated arc");
  arcs_.emplace_back(tail, head);
  children_[tail].push_back(head);
  parents_[head].push_back(tail);
}

bool PhyloNetwork::has_arc(NodeIndex tail, NodeIndex head) const {
  const auto& c = children_[tail];
  return std::find(c.begin(), c.end(), head) != c.end();
}

NodeKind PhyloNetwork::kind(NodeIndex v) const {
  const auto in = in_degree(v), out = out_degree(v);
  if (in == 0 && out == 2) return NodeKind::root;
  if (in == 1 && out == 0) return NodeKind::leaf;
  if (in == 1 && out == 2) return NodeKind::tree;
  if (in == 2 && out == 1) return NodeKind::reticulate;
  return NodeKind::invalid;
}

NodeIndex PhyloNetwork::root() const {
  std::optional<NodeIndex> found;
  for (NodeIndex v = 0; v < node_count(); ++v) {
    if (in_degree(v) != 0) continue;
    if (found) throw InputError("network has more than one root");
    found = v;
  }
  if (!found) throw InputError("network has no root");
  return *found;
}

ValidationReport validate_network(const PhyloNetwork& net) {
  ValidationReport report;
  if (net.node_count() == 0) {
    report.violations.push_back("network has no nodes");
    return report;
  }
  std::size_t roots = 0;
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    if (net.in_degree(v) == 0) ++roots;
    if (net.kind(v) == NodeKind::invalid) {
      report.violations.push_back("node " + std::to_string(v) + " has (indegree, outdegree) = (" +
                                  std::to_string(net.in_degree(v)) + ", " + std::to_string(net.out_degree(v)) +
                                  ")");
    }
    if (net.out_degree(v) == 0 && !net.label(v)) report.violations.push_back("leaf " + std::to_string(v) + " is unlabeled");
  }
  if (roots != 1) report.violations.push_back("network has " + std::to_string(roots) + " roots");

  // Kahn's algorithm: every node is removed iff there is no cycle.
  std::vector<std::size_t> pending(net.node_count());
  std::vector<NodeIndex> ready;
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    pending[v] = net.in_degree(v);
    if (pending[v] == 0) ready.push_back(v);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    NodeIndex v = ready.back();
    ready.pop_back();
    ++removed;
    for (NodeIndex c : net.children(v)) {
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  if (removed != net.node_count()) report.violations.push_back("network has a directed cycle");
  return report;
}

void require_valid_network(const PhyloNetwork& net, std::string_view what) {
  auto report = validate_network(net);
  if (!report.ok()) throw InputError(std::string(what) + ": " + report.violations.front());
}

int TaxonTable::color(const std::optional<std::string>& label) {
  if (!label) return 0;
  auto [it, inserted] = ids_.try_emplace(*label, static_cast<int>(ids_.size()) + 1);
  return it->second;
}

ReducedNetwork reduce_to_colored(const PhyloNetwork& net, TaxonTable& taxa) {
  require_valid_network(net);
  ReducedNetwork out;
  for (NodeIndex v = 0; v < net.node_count(); ++v) out.graph.add_node(v, taxa.color(net.label(v)));
  for (std::size_t k = 0; k < net.arc_count(); ++k) {
    const auto [tail, head] = net.arcs()[k];
    NodeIndex mid = out.graph.add_node(static_cast<std::int64_t>(net.node_count() + k), reserved::kMidpointColor);
    out.graph.add_edge(tail, mid, reserved::kArcOutLabel);
    out.graph.add_edge(mid, head, reserved::kArcInLabel);
  }
  out.root = net.root();
  return out;
}

bool is_network_isomorphism(const PhyloNetwork& a, const PhyloNetwork& b, const std::vector<NodeIndex>& map) {
  if (a.node_count() != b.node_count() || a.arc_count() != b.arc_count()) return false;
  if (map.size() != a.node_count()) return false;
  std::vector<bool> hit(b.node_count(), false);
  for (NodeIndex v = 0; v < map.size(); ++v) {
    if (map[v] >= b.node_count() || hit[map[v]]) return false;
    hit[map[v]] = true;
    if (a.label(v) != b.label(map[v])) return false;
  }
  for (auto [tail, head] : a.arcs()) {
    if (!b.has_arc(map[tail], map[head])) return false;
  }
  return true;
}

std::optional<std::string> network_pretest_mismatch(const PhyloNetwork& a, const PhyloNetwork& b) {
  if (a.node_count() != b.node_count()) return "node-count";
  if (a.arc_count() != b.arc_count()) return "arc-count";
  auto labels = [](const PhyloNetwork& n) {
    std::vector<std::string> out;
    for (NodeIndex v = 0; v < n.node_count(); ++v) {
      if (n.label(v)) out.push_back(*n.label(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  if (labels(a) != labels(b)) return "label-multiset";
  auto kinds = [](const PhyloNetwork& n) {
    std::array<std::size_t, 5> count{};
    for (NodeIndex v = 0; v < n.node_count(); ++v) ++count[static_cast<std::size_t>(n.kind(v))];
    return count;
  };
  if (kinds(a) != kinds(b)) return "node-kinds";
  return std::nullopt;
}

PhyloIsoResult phylo_isomorphic(const PhyloNetwork& a, const PhyloNetwork& b, bool want_mapping,
                                const AutOptions& options, bool pretests) {
  require_valid_network(a, "first network");
  require_valid_network(b, "second network");
  PhyloIsoResult result;
  if (pretests) {
    if (auto failed = network_pretest_mismatch(a, b)) {
      result.decided_by = "pretest:" + *failed;
      return result;
    }
  }
  result.decided_by = "search";
  TaxonTable taxa;
  ReducedNetwork ra = reduce_to_colored(a, taxa);
  ReducedNetwork rb = reduce_to_colored(b, taxa);

  LabeledGraph joined;
  for (NodeIndex v = 0; v < ra.graph.node_count(); ++v) joined.add_node(ra.graph.color(v));
  const auto offset = static_cast<NodeIndex>(ra.graph.node_count());
  for (NodeIndex v = 0; v < rb.graph.node_count(); ++v) joined.add_node(rb.graph.color(v));
  for (const auto& e : ra.graph.edges()) joined.add_edge(e.u, e.v, e.label);
  for (const auto& e : rb.graph.edges()) joined.add_edge(offset + e.u, offset + e.v, e.label);
  joined.add_edge(ra.root, offset + rb.root, reserved::kRootJoinLabel);

  LayerDecomposition dec = layer_sequence(joined, ra.root, offset + rb.root, options.triangle_gadget);
  Sgs group = aut_e_tower(dec, options, nullptr, true);
  auto it = std::find_if(group.gens.begin(), group.gens.end(), [](const Permutation& p) { return p(0) == 1; });
  if (it == group.gens.end()) return result;

  std::vector<NodeIndex> mapping(a.node_count());
  for (NodeIndex u = 0; u < a.node_count(); ++u) {
    const NodeIndex image = dec.origin((*it)(dec.working_of(u)));
    if (image < offset || image - offset >= b.node_count()) {
      throw std::logic_error("network witness does not map nodes to nodes");
    }
    mapping[u] = image - offset;
  }
  if (!is_network_isomorphism(a, b, mapping)) throw std::logic_error("network witness failed verification");
  result.isomorphic = true;
  if (want_mapping) result.mapping = std::move(mapping);
  return result;
}

namespace {

bool is_label_char(char c) {
  switch (c) {
    case '(': case ')': case '[': case ']': case '\'': case ':': case ';': case ',': case '#':
    case ' ': case '\t': case '\n': case '\r':
      return false;
    default:
      return true;
  }
}

class EnewickParser {
 public:
  explicit EnewickParser(std::string_view text) : text_(text) {}

  PhyloNetwork parse() {
    skip_space();
    subtree();
    skip_space();
    expect(';');
    skip_space();
    if (pos_ != text_.size()) fail("unexpected text after ';'");
    for (const auto& [tag, h] : hybrids_) {
      if (h.count != 2) {
        throw ParseError("hybrid tag #H" + tag + " occurs " + std::to_string(h.count) + " time(s), expected 2",
                         h.line, h.column);
      }
    }
    require_valid_network(net_, "eNewick network");
    return std::move(net_);
  }

 private:
  struct Hybrid {
    NodeIndex node;
    std::size_t count = 0;
    bool has_children = false;
    std::size_t line = 0, column = 0;
  };

  NodeIndex subtree() {
    std::vector<NodeIndex> kids;
    if (peek() == '(') {
      ++pos_;
      while (true) {
        skip_space();
        kids.push_back(subtree());
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    skip_space();
    auto [line, column] = position();
    std::optional<std::string> name = label();
    skip_space();
    std::optional<std::string> tag;
    if (peek() == '#') {
      ++pos_;
      if (peek() != 'H') fail("expected 'H' after '#' (only hybrid tags #H<k> are supported)");
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      if (start == pos_) fail("expected digits in hybrid tag");
      tag = std::string(text_.substr(start, pos_ - start));
    }
    skip_space();
    while (peek() == ':') {
      ++pos_;
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                     std::string_view("+-.eE").find(text_[pos_]) != std::string_view::npos)) {
        ++pos_;
      }
      if (start == pos_ && peek() != ':') fail("expected a number after ':'");
      skip_space();
    }

    NodeIndex node;
    if (tag) {
      auto [it, inserted] = hybrids_.try_emplace(*tag);
      Hybrid& h = it->second;
      if (inserted) {
        h.node = net_.add_node();
        h.line = line;
        h.column = column;
      }
      ++h.count;
      node = h.node;
      if (!kids.empty()) {
        if (h.has_children) throw ParseError("hybrid #H" + *tag + " has children at both occurrences", line, column);
        h.has_children = true;
      }
      if (name) {
        if (net_.label(node) && *net_.label(node) != *name) {
          throw ParseError("hybrid #H" + *tag + " has two different names", line, column);
        }
        net_.set_label(node, name);
      }
    } else {
      node = net_.add_node(name);
    }
    for (NodeIndex k : kids) {
      try {
        net_.add_arc(node, k);
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid arc: ") + e.what(), line, column);
      }
    }
    return node;
  }

  std::optional<std::string> label() {
    if (peek() == '\'') {
      ++pos_;
      std::string out;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            out += '\'';
            ++pos_;
            continue;
          }
          break;
        }
        out += c;
      }
      return out;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    if (start == pos_) return std::nullopt;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '[') {
        std::size_t close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) {
      fail(pos_ < text_.size() ? std::string("expected '") + c + "', got '" + text_[pos_] + "'"
                               : std::string("expected '") + c + "' before end of input");
    }
    ++pos_;
  }

  std::pair<std::size_t, std::size_t> position() const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return {line, column};
  }

  [[noreturn]] void fail(const std::string& what) const {
    auto [line, column] = position();
    throw ParseError(what, line, column);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  PhyloNetwork net_;
  std::map<std::string, Hybrid> hybrids_;
};

std::string quote_label(const std::string& s) {
  bool plain = !s.empty() && std::all_of(s.begin(), s.end(), is_label_char);
  if (plain) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

}  // namespace

PhyloNetwork parse_enewick(std::string_view text) { return EnewickParser(text).parse(); }

PhyloNetwork read_enewick_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_enewick(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.detail(),
                     e.line(), e.column());
  }
}

std::string write_enewick(const PhyloNetwork& net) {
  require_valid_network(net);
  std::vector<int> tag(net.node_count(), 0);
  int next_tag = 1;
  std::string out;
  // Explicit stack: (node, next child index); deep networks would overflow
  // a recursive writer.
  struct Frame {
    NodeIndex node;
    std::size_t child;
  };
  auto suffix = [&](NodeIndex v) {
    std::string s = net.label(v) ? quote_label(*net.label(v)) : "";
    if (tag[v]) s += "#H" + std::to_string(tag[v]);
    return s;
  };
  std::vector<Frame> stack;
  auto open = [&](NodeIndex v) {
    if (net.kind(v) == NodeKind::reticulate) {
      if (tag[v]) {
        out += "#H" + std::to_string(tag[v]);
        return;
      }
      tag[v] = next_tag++;
    }
    if (net.out_degree(v) == 0) {
      out += suffix(v);
      return;
    }
    out += '(';
    stack.push_back({v, 0});
  };
  open(net.root());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.child == net.out_degree(f.node)) {
      NodeIndex v = f.node;
      stack.pop_back();
      out += ')';
      out += suffix(v);
      continue;
    }
    if (f.child > 0) out += ',';
    NodeIndex c = net.children(f.node)[f.child++];
    open(c);
  }
  return out + ";";
}

PhyloNetwork random_network(std::size_t n_target, double hybrid_prob, std::uint64_t seed) {
  if (n_target < 3) throw InputError("random_network: node count must be at least 3");
  if (!(hybrid_prob >= 0.0 && hybrid_prob <= 1.0)) throw InputError("random_network: probability outside [0, 1]");
  Rng rng(seed);
  const std::size_t units = (n_target - 1) / 2;  // leaves + reticulations - 1
  const std::size_t hybrids = rng.binomial(units - 1, hybrid_prob);
  const std::size_t leaves = units + 1 - hybrids;

  std::size_t nodes = 3;
  std::vector<std::pair<NodeIndex, NodeIndex>> arcs{{0, 1}, {0, 2}};
  std::vector<NodeIndex> leaf_nodes{1, 2};
  while (leaf_nodes.size() < leaves) {
    const std::size_t pick = rng.below(leaf_nodes.size());
    const NodeIndex v = leaf_nodes[pick];
    const auto a = static_cast<NodeIndex>(nodes++), b = static_cast<NodeIndex>(nodes++);
    arcs.emplace_back(v, a);
    arcs.emplace_back(v, b);
    leaf_nodes[pick] = a;
    leaf_nodes.push_back(b);
  }

  auto reaches = [&](NodeIndex from, NodeIndex target) {
    std::vector<std::vector<NodeIndex>> out(nodes);
    for (auto [t, h] : arcs) out[t].push_back(h);
    std::vector<bool> seen(nodes, false);
    std::vector<NodeIndex> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      NodeIndex v = stack.back();
      stack.pop_back();
      if (v == target) return true;
      for (NodeIndex w : out[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return false;
  };

  for (std::size_t k = 0; k < hybrids; ++k) {
    std::size_t a1 = 0, a2 = 0;
    while (true) {
      a1 = rng.below(arcs.size());
      a2 = rng.below(arcs.size());
      // The new arc runs from a node on a1 to a node on a2; it closes a cycle
      // iff a1's tail lies below a2's head.
      if (a1 != a2 && !reaches(arcs[a2].second, arcs[a1].first)) break;
    }
    const auto x = static_cast<NodeIndex>(nodes++), y = static_cast<NodeIndex>(nodes++);
    const auto [t1, h1] = arcs[a1];
    const auto [t2, h2] = arcs[a2];
    arcs[a1] = {t1, x};
    arcs.emplace_back(x, h1);
    arcs[a2] = {t2, y};
    arcs.emplace_back(y, h2);
    arcs.emplace_back(x, y);
  }

  std::vector<std::size_t> taxa(leaf_nodes.size());
  for (std::size_t i = 0; i < taxa.size(); ++i) taxa[i] = i + 1;
  rng.shuffle(taxa);
  PhyloNetwork net;
  for (std::size_t v = 0; v < nodes; ++v) net.add_node();
  for (std::size_t i = 0; i < leaf_nodes.size(); ++i) net.set_label(leaf_nodes[i], "t" + std::to_string(taxa[i]));
  for (auto [t, h] : arcs) net.add_arc(t, h);
  return net;
}

PhyloNetwork relabel_network(const PhyloNetwork& net, const std::vector<NodeIndex>& perm) {
  if (perm.size() != net.node_count()) throw std::invalid_argument("relabel_network: size mismatch");
  std::vector<NodeIndex> inverse(perm.size());
  for (NodeIndex v = 0; v < perm.size(); ++v) inverse.at(perm[v]) = v;
  PhyloNetwork out;
  for (NodeIndex w = 0; w < perm.size(); ++w) out.add_node(net.label(inverse[w]));
  for (auto [t, h] : net.arcs()) out.add_arc(perm[t], perm[h]);
  return out;
}

std::optional<PhyloNetwork> reverse_arc(const PhyloNetwork& net, std::size_t arc) {
  if (arc >= net.arc_count()) throw std::out_of_range("reverse_arc: arc out of range");
  PhyloNetwork out;
  for (NodeIndex v = 0; v < net.node_count(); ++v) out.add_node(net.label(v));
  for (std::size_t k = 0; k < net.arc_count(); ++k) {
    auto [t, h] = net.arcs()[k];
    if (k == arc) std::swap(t, h);
    if (out.has_arc(t, h)) return std::nullopt;
    out.add_arc(t, h);
  }
  if (!validate_network(out).ok()) return std::nullopt;
  return out;
}

PhyloNetwork swap_labels(const PhyloNetwork& net, NodeIndex a, NodeIndex b) {
  PhyloNetwork out = net;
  auto la = net.label(a);
  out.set_label(a, net.label(b));
  out.set_label(b, std::move(la));
  return out;
}

}  // namespace luks
