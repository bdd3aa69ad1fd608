#include "netident/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace netident {

namespace {

PathCount saturating_add(PathCount a, PathCount b) {
  return a > kPathCountMax - b ? kPathCountMax : a + b;
}

// Kahn order of the subgraph induced by `keep`; empty optional if it has a
// cycle.
std::optional<NodeSet> topological_order(const Network& g,
                                         const std::vector<bool>& keep) {
  const int n = g.size();
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  int kept = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    ++kept;
    for (NodeIndex u : g.in_neighbors(v))
      if (keep[u]) ++indeg[v];
  }
  NodeSet order;
  order.reserve(static_cast<std::size_t>(kept));
  for (NodeIndex v = 0; v < n; ++v)
    if (keep[v] && indeg[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (NodeIndex w : g.out_neighbors(order[head])) {
      if (keep[w] && --indeg[w] == 0) order.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != kept) return std::nullopt;
  return order;
}

std::string label_of(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("node label must be a string or integer, got " + v.dump());
}

}  // namespace

NodeSet normalized(NodeSet nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

Network::Network(std::vector<std::string> labels, std::vector<Edge> edges,
                 NodeSet measured)
    : labels_(std::move(labels)), edges_(std::move(edges)) {
  const int n = size();
  for (NodeIndex v = 0; v < n; ++v) {
    if (labels_[v].empty())
      throw std::invalid_argument("empty node label");
    if (!index_.emplace(labels_[v], v).second)
      throw std::invalid_argument("duplicate node label '" + labels_[v] + "'");
  }
  auto valid = [n](NodeIndex v) { return v >= 0 && v < n; };
  for (const Edge& e : edges_) {
    if (!valid(e.from) || !valid(e.to))
      throw std::invalid_argument("edge endpoint out of range");
    if (e.from == e.to)
      throw std::invalid_argument("self-edge on node '" + labels_[e.from] +
                                  "'");
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end());
      dup != edges_.end())
    throw std::invalid_argument("duplicate edge " + format_edge(*dup));

  out_.assign(static_cast<std::size_t>(n), {});
  in_.assign(static_cast<std::size_t>(n), {});
  for (const Edge& e : edges_) {
    out_[e.from].push_back(e.to);
    in_[e.to].push_back(e.from);
  }
  for (auto& s : in_) std::sort(s.begin(), s.end());

  measured_mask_.assign(static_cast<std::size_t>(n), false);
  for (NodeIndex v : measured) {
    if (!valid(v)) throw std::invalid_argument("measured node out of range");
    measured_mask_[v] = true;
  }
  measured_ = normalized(std::move(measured));
}

Network Network::from_labels(
    std::vector<std::string> labels,
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::vector<std::string>& measured) {
  std::unordered_map<std::string, NodeIndex> idx;
  for (std::size_t i = 0; i < labels.size(); ++i)
    idx.emplace(labels[i], static_cast<NodeIndex>(i));
  auto lookup = [&](const std::string& s) {
    auto it = idx.find(s);
    if (it == idx.end())
      throw std::invalid_argument("unknown node label '" + s + "'");
    return it->second;
  };
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [from, to] : edges) es.push_back({lookup(from), lookup(to)});
  NodeSet ms;
  for (const auto& m : measured) ms.push_back(lookup(m));
  return Network(std::move(labels), std::move(es), std::move(ms));
}

std::optional<NodeIndex> Network::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::index_of(std::string_view label) const {
  if (auto v = find(label)) return *v;
  throw std::invalid_argument("unknown node label '" + std::string(label) +
                              "'");
}

bool Network::has_edge(NodeIndex from, NodeIndex to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

Network Network::with_measured(NodeSet measured) const {
  return Network(labels_, edges_, std::move(measured));
}

Network Network::without_edge(Edge e) const {
  std::vector<Edge> es;
  es.reserve(edges_.size());
  for (const Edge& x : edges_)
    if (x != e) es.push_back(x);
  return Network(labels_, std::move(es), measured_);
}

std::string Network::format_set(const NodeSet& nodes) const {
  std::string out = "{";
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k) out += ",";
    out += label(nodes[k]);
  }
  return out + "}";
}

std::string Network::format_edge(Edge e) const {
  return label(e.from) + "->" + label(e.to);
}

// ---------------------------------------------------------------------------

Network parse_network(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "nodes" && key != "edges" && key != "measured")
      throw ParseError("unexpected top-level field '" + key + "'");
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    throw ParseError("field 'nodes' must be a list");

  std::vector<std::string> labels;
  for (const auto& v : doc["nodes"]) labels.push_back(label_of(v));

  std::vector<std::pair<std::string, std::string>> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array())
      throw ParseError("field 'edges' must be a list");
    for (const auto& e : doc["edges"]) {
      if (!e.is_object() || !e.contains("from") || !e.contains("to") ||
          e.size() != 2)
        throw ParseError("edge entries must be {\"from\": .., \"to\": ..}, got " +
                         e.dump());
      edges.emplace_back(label_of(e["from"]), label_of(e["to"]));
    }
  }

  std::vector<std::string> measured;
  if (doc.contains("measured")) {
    if (!doc["measured"].is_array())
      throw ParseError("field 'measured' must be a list");
    for (const auto& v : doc["measured"]) measured.push_back(label_of(v));
  }

  try {
    return Network::from_labels(std::move(labels), edges, measured);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

std::string serialize_network(const Network& g) {
  nlohmann::ordered_json doc;
  doc["nodes"] = g.labels();
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::ordered_json je;
    je["from"] = g.label(e.from);
    je["to"] = g.label(e.to);
    doc["edges"].push_back(std::move(je));
  }
  doc["measured"] = nlohmann::ordered_json::array();
  for (NodeIndex v : g.measured()) doc["measured"].push_back(g.label(v));
  return doc.dump(2) + "\n";
}

std::string to_dot(const Network& g) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream out;
  out << "digraph network {\n";
  for (NodeIndex v = 0; v < g.size(); ++v) {
    out << "  " << quote(g.label(v)) << " [shape="
        << (g.is_measured(v) ? "doublecircle" : "circle") << "];\n";
  }
  for (const Edge& e : g.edges())
    out << "  " << quote(g.label(e.from)) << " -> " << quote(g.label(e.to))
        << ";\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------

SourcesSinks sources_sinks(const Network& g) {
  SourcesSinks out;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    const bool has_in = g.in_degree(v) > 0;
    const bool has_out = g.out_degree(v) > 0;
    if (has_out && !has_in) out.sources.push_back(v);
    else if (has_in && !has_out) out.sinks.push_back(v);
    else if (!has_in && !has_out) out.isolated.push_back(v);
  }
  return out;
}

StructureSummary summarize(const Network& g) {
  const SourcesSinks ss = sources_sinks(g);
  StructureSummary s;
  s.nodes = g.size();
  s.edges = g.edge_count();
  s.measured = static_cast<int>(g.measured().size());
  s.sources = static_cast<int>(ss.sources.size());
  s.sinks = static_cast<int>(ss.sinks.size());
  s.isolated = static_cast<int>(ss.isolated.size());
  for (NodeIndex v = 0; v < g.size(); ++v)
    s.max_out_degree = std::max(s.max_out_degree, g.out_degree(v));
  return s;
}

std::vector<bool> reachable_from(const Network& g, const NodeSet& from,
                                 const std::vector<bool>* blocked) {
  std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
  NodeSet stack;
  for (NodeIndex v : from) {
    if (blocked && (*blocked)[v]) continue;
    if (!seen[v]) {
      seen[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex w : g.out_neighbors(v)) {
      if (seen[w] || (blocked && (*blocked)[w])) continue;
      seen[w] = true;
      stack.push_back(w);
    }
  }
  return seen;
}

std::vector<bool> reaching(const Network& g, NodeIndex to) {
  std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
  NodeSet stack{to};
  seen[to] = true;
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex u : g.in_neighbors(v)) {
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    }
  }
  return seen;
}

bool can_reach(const Network& g, NodeIndex i, NodeIndex j) {
  return reachable_from(g, {i})[j];
}

namespace {

// Set of nodes lying on some walk i -> j.
std::vector<bool> walk_support(const Network& g, NodeIndex i, NodeIndex j) {
  auto fwd = reachable_from(g, {i});
  const auto bwd = reaching(g, j);
  for (std::size_t v = 0; v < fwd.size(); ++v) fwd[v] = fwd[v] && bwd[v];
  return fwd;
}

}  // namespace

bool unique_walk(const Network& g, NodeIndex i, NodeIndex j) {
  return !unique_walk_path(g, i, j).empty();
}

NodeSet unique_walk_path(const Network& g, NodeIndex i, NodeIndex j) {
  if (i == j) throw std::invalid_argument("unique_walk requires i != j");
  const auto support = walk_support(g, i, j);
  if (!support[i]) return {};
  const auto order = topological_order(g, support);
  if (!order) return {};  // a cycle on some i -> j walk

  std::vector<PathCount> count(static_cast<std::size_t>(g.size()), 0);
  count[i] = 1;
  for (NodeIndex v : *order)
    for (NodeIndex w : g.out_neighbors(v))
      if (support[w]) count[w] = saturating_add(count[w], count[v]);
  if (count[j] != 1) return {};

  // Every support node lies on an i -> j walk and there is only one, so each
  // node on it has exactly one successor inside the support.
  NodeSet path{i};
  for (NodeIndex v = i; v != j;) {
    for (NodeIndex w : g.out_neighbors(v)) {
      if (support[w]) {
        v = w;
        break;
      }
    }
    path.push_back(v);
  }
  return path;
}

bool is_acyclic(const Network& g) {
  return topological_order(g, std::vector<bool>(g.size(), true)).has_value();
}

bool is_multitree(const Network& g) {
  const auto order = topological_order(g, std::vector<bool>(g.size(), true));
  if (!order) return false;
  std::vector<NodeIndex> rank(static_cast<std::size_t>(g.size()));
  for (std::size_t k = 0; k < order->size(); ++k) rank[(*order)[k]] = k;
  std::vector<PathCount> count(static_cast<std::size_t>(g.size()));
  for (NodeIndex s = 0; s < g.size(); ++s) {
    std::fill(count.begin(), count.end(), 0);
    count[s] = 1;
    for (std::size_t k = rank[s]; k < order->size(); ++k) {
      const NodeIndex v = (*order)[k];
      if (count[v] == 0) continue;
      if (count[v] > 1) return false;
      for (NodeIndex w : g.out_neighbors(v))
        count[w] = saturating_add(count[w], count[v]);
    }
  }
  return true;
}

int weak_components(const Network& g) {
  std::vector<int> parent(static_cast<std::size_t>(g.size()));
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = g.size();
  for (const Edge& e : g.edges()) {
    const int a = root(e.from), b = root(e.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

std::vector<NodeSet> strong_components(const Network& g) {
  // Iterative Tarjan.
  const int n = g.size();
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(index);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  NodeSet stack;
  std::vector<NodeSet> components;
  int next = 0;
  struct Frame {
    NodeIndex v;
    std::size_t child;
  };
  std::vector<Frame> call;
  for (NodeIndex root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = g.out_neighbors(f.v);
      if (f.child < succ.size()) {
        const NodeIndex w = succ[f.child++];
        if (index[w] < 0) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const NodeIndex v = f.v;
      call.pop_back();
      if (!call.empty())
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        NodeSet comp;
        NodeIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  std::sort(components.begin(), components.end());
  return components;
}

std::vector<NodeSet> isolated_cycles(const Network& g) {
  std::vector<NodeSet> cycles;
  std::vector<int> comp_of(static_cast<std::size_t>(g.size()), -1);
  const auto comps = strong_components(g);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (NodeIndex v : comps[c]) comp_of[v] = static_cast<int>(c);

  for (std::size_t c = 0; c < comps.size(); ++c) {
    const NodeSet& comp = comps[c];
    if (comp.size() < 2) continue;
    bool simple = true;
    for (NodeIndex v : comp) {
      int in = 0, out = 0;
      for (NodeIndex w : g.out_neighbors(v)) out += comp_of[w] == int(c);
      for (NodeIndex u : g.in_neighbors(v)) in += comp_of[u] == int(c);
      if (in != 1 || out != 1) {
        simple = false;
        break;
      }
    }
    if (!simple) continue;
    NodeSet cycle{comp.front()};
    for (;;) {
      NodeIndex next = -1;
      for (NodeIndex w : g.out_neighbors(cycle.back()))
        if (comp_of[w] == int(c)) next = w;
      if (next == cycle.front()) break;
      cycle.push_back(next);
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

}  // namespace netident
