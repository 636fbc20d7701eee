#include "luks/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace luks {

namespace {

std::string position_message(const std::string& what, std::size_t line, std::size_t column) {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : InputError(position_message(what, line, column)), detail_(what), line_(line), column_(column) {}

NodeIndex LabeledGraph::add_node(int color) {
  return add_node(next_id_, color);
}

NodeIndex LabeledGraph::add_node(std::int64_t external_id, int color) {
  const auto index = static_cast<NodeIndex>(colors_.size());
  if (!id_index_.emplace(external_id, index).second) {
    throw std::invalid_argument("duplicate node id " + std::to_string(external_id));
  }
  next_id_ = std::max(next_id_, external_id + 1);
  colors_.push_back(color);
  ids_.push_back(external_id);
  adjacency_.emplace_back();
  return static_cast<NodeIndex>(colors_.size() - 1);
}

void LabeledGraph::add_edge(NodeIndex u, NodeIndex v, int label) {
  if (u >= node_count() || v >= node_count()) throw std::out_of_range("add_edge: node out of range");
  if (u == v) throw std::invalid_argument("add_edge: loop at node " + std::to_string(ids_[u]));
  if (has_edge(u, v)) {
    throw std::invalid_argument("add_edge: parallel edge " + std::to_string(ids_[u]) + " " +
                                std::to_string(ids_[v]));
  }
  adjacency_[u].push_back({v, label});
  adjacency_[v].push_back({u, label});
  edges_.push_back({std::min(u, v), std::max(u, v), label});
}

LabeledGraph LabeledGraph::from_edges(const std::vector<std::pair<std::int64_t, std::int64_t>>& edges,
                                      const std::vector<std::int64_t>& extra_nodes) {
  std::set<std::int64_t> ids(extra_nodes.begin(), extra_nodes.end());
  for (auto [a, b] : edges) {
    ids.insert(a);
    ids.insert(b);
  }
  LabeledGraph g;
  std::map<std::int64_t, NodeIndex> index;
  for (auto id : ids) index[id] = g.add_node(id, 0);
  for (auto [a, b] : edges) g.add_edge(index[a], index[b]);
  return g;
}

std::optional<NodeIndex> LabeledGraph::index_of(std::int64_t external_id) const {
  auto it = id_index_.find(external_id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> LabeledGraph::edge_label(NodeIndex u, NodeIndex v) const {
  for (const auto& n : adjacency_[u]) {
    if (n.node == v) return n.label;
  }
  return std::nullopt;
}

std::vector<Edge> LabeledGraph::sorted_edges() const {
  std::vector<Edge> out = edges_;
  std::sort(out.begin(), out.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  return out;
}

bool LabeledGraph::is_connected() const {
  if (node_count() == 0) return true;
  std::vector<bool> seen(node_count(), false);
  std::vector<NodeIndex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeIndex v = stack.back();
    stack.pop_back();
    for (const auto& n : adjacency_[v]) {
      if (!seen[n.node]) {
        seen[n.node] = true;
        ++reached;
        stack.push_back(n.node);
      }
    }
  }
  return reached == node_count();
}

ValidationReport validate(const LabeledGraph& g) {
  ValidationReport report;
  if (g.node_count() == 0) report.violations.push_back("graph has no nodes");
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) > 3) {
      report.violations.push_back("node " + std::to_string(g.external_id(v)) + " has degree " +
                                  std::to_string(g.degree(v)) + " > 3");
    }
  }
  if (!g.is_connected()) report.violations.push_back("graph is disconnected");
  return report;
}

void require_valid(const LabeledGraph& g, std::string_view what) {
  auto report = validate(g);
  if (!report.ok()) throw InputError(std::string(what) + ": " + report.violations.front());
}

LabeledGraph permute_nodes(const LabeledGraph& g, const std::vector<NodeIndex>& map) {
  if (map.size() != g.node_count()) throw std::invalid_argument("permute_nodes: map size mismatch");
  std::vector<NodeIndex> inverse(map.size());
  for (NodeIndex v = 0; v < map.size(); ++v) inverse.at(map[v]) = v;
  LabeledGraph out;
  for (NodeIndex w = 0; w < map.size(); ++w) out.add_node(static_cast<std::int64_t>(w), g.color(inverse[w]));
  for (const auto& e : g.edges()) out.add_edge(map[e.u], map[e.v], e.label);
  return out;
}

bool is_isomorphism(const LabeledGraph& g1, const LabeledGraph& g2,
                    const std::vector<NodeIndex>& map) {
  if (g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count()) return false;
  if (map.size() != g1.node_count()) return false;
  std::vector<bool> hit(g2.node_count(), false);
  for (NodeIndex v = 0; v < map.size(); ++v) {
    if (map[v] >= g2.node_count() || hit[map[v]]) return false;
    hit[map[v]] = true;
    if (g1.color(v) != g2.color(map[v])) return false;
  }
  for (const auto& e : g1.edges()) {
    auto label = g2.edge_label(map[e.u], map[e.v]);
    if (!label || *label != e.label) return false;
  }
  return true;
}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

std::int64_t parse_nonnegative(const Token& t, std::size_t line, const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size() || value < 0) {
    throw ParseError(std::string("expected non-negative integer ") + what + ", got '" +
                         std::string(t.text) + "'",
                     line, t.column);
  }
  return value;
}

int parse_small(const Token& t, std::size_t line, const char* what) {
  std::int64_t value = parse_nonnegative(t, line, what);
  if (value > 1'000'000'000) throw ParseError(std::string(what) + " out of range", line, t.column);
  return static_cast<int>(value);
}

}  // namespace

LabeledGraph parse_graph(std::string_view text) {
  struct PendingEdge {
    std::int64_t a, b;
    int label;
    std::size_t line, column;
  };
  std::map<std::int64_t, int> node_colors;
  std::set<std::int64_t> declared;
  std::vector<PendingEdge> pending;
  std::set<std::pair<std::int64_t, std::int64_t>> seen_edges;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<Token> tokens;
    for (std::size_t i = 0; i < line.size();) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      tokens.push_back({line.substr(i, j - i), i + 1});
      i = j;
    }

    if (!tokens.empty()) {
      const auto& kw = tokens[0];
      if (kw.text == "node") {
        if (tokens.size() < 2 || tokens.size() > 3) {
          throw ParseError("expected 'node <id> [<color>]'", line_no, kw.column);
        }
        std::int64_t id = parse_nonnegative(tokens[1], line_no, "node id");
        if (!declared.insert(id).second) {
          throw ParseError("duplicate node " + std::to_string(id), line_no, tokens[1].column);
        }
        node_colors[id] = tokens.size() == 3 ? parse_small(tokens[2], line_no, "color") : 0;
      } else if (kw.text == "edge") {
        if (tokens.size() < 3 || tokens.size() > 4) {
          throw ParseError("expected 'edge <id> <id> [<label>]'", line_no, kw.column);
        }
        std::int64_t a = parse_nonnegative(tokens[1], line_no, "node id");
        std::int64_t b = parse_nonnegative(tokens[2], line_no, "node id");
        int label = tokens.size() == 4 ? parse_small(tokens[3], line_no, "label") : 0;
        if (a == b) throw ParseError("loop at node " + std::to_string(a), line_no, tokens[1].column);
        if (!seen_edges.insert({std::min(a, b), std::max(a, b)}).second) {
          throw ParseError("duplicate edge " + std::to_string(a) + " " + std::to_string(b), line_no,
                           kw.column);
        }
        pending.push_back({a, b, label, line_no, kw.column});
      } else {
        throw ParseError("unknown directive '" + std::string(kw.text) + "'", line_no, kw.column);
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }

  for (const auto& e : pending) {
    node_colors.try_emplace(e.a, 0);
    node_colors.try_emplace(e.b, 0);
  }
  LabeledGraph g;
  std::map<std::int64_t, NodeIndex> index;
  for (auto [id, color] : node_colors) index[id] = g.add_node(id, color);
  for (const auto& e : pending) g.add_edge(index[e.a], index[e.b], e.label);
  return g;
}

LabeledGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_graph(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                         e.detail(),
                     e.line(), e.column());
  }
}

std::string format_graph(const LabeledGraph& g) {
  std::vector<NodeIndex> order(g.node_count());
  for (NodeIndex v = 0; v < order.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](NodeIndex a, NodeIndex b) { return g.external_id(a) < g.external_id(b); });
  std::string out;
  for (NodeIndex v : order) {
    out += "node " + std::to_string(g.external_id(v));
    if (g.color(v) != 0) out += " " + std::to_string(g.color(v));
    out += '\n';
  }
  for (const auto& e : g.sorted_edges()) {
    std::int64_t a = g.external_id(e.u), b = g.external_id(e.v);
    out += "edge " + std::to_string(std::min(a, b)) + " " + std::to_string(std::max(a, b));
    if (e.label != 0) out += " " + std::to_string(e.label);
    out += '\n';
  }
  return out;
}

}  // namespace luks
