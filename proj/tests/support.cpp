#include "support.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

namespace testing {

std::string data_path(const std::string& name) {
  return std::string(NETIDENT_DATA_DIR) + "/" + name;
}

namespace {

std::vector<std::string> numbered(int n) {
  std::vector<std::string> labels;
  for (int v = 1; v <= n; ++v) labels.push_back(std::to_string(v));
  return labels;
}

Network numbered_network(int n, const std::vector<std::pair<int, int>>& edges,
                         const NodeSet& measured) {
  std::vector<Edge> es;
  for (auto [a, b] : edges) es.push_back({a - 1, b - 1});
  NodeSet m;
  for (int v : measured) m.push_back(v - 1);
  return Network(numbered(n), es, m);
}

}  // namespace

Network fork(const NodeSet& measured) {
  return numbered_network(3, {{1, 2}, {1, 3}, {3, 2}}, measured);
}

Network loop3(const NodeSet& measured) {
  return numbered_network(3, {{2, 1}, {3, 1}, {1, 3}}, measured);
}

Network dense3(const NodeSet& measured) {
  return numbered_network(3, {{2, 1}, {3, 1}, {1, 2}, {3, 2}, {2, 3}},
                          measured);
}

Network fanout(const std::vector<std::string>& measured) {
  std::vector<std::string> labels{"i"};
  for (int v = 1; v <= 9; ++v) labels.push_back(std::to_string(v));
  return Network::from_labels(labels,
                              {{"i", "1"},
                               {"i", "2"},
                               {"i", "3"},
                               {"1", "5"},
                               {"5", "7"},
                               {"2", "4"},
                               {"4", "8"},
                               {"3", "6"},
                               {"6", "9"}},
                              measured);
}

Network chain(int length, const NodeSet& measured) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < length; ++v) edges.emplace_back(v, v + 1);
  return numbered_network(length, edges, measured);
}

Network cycle(int length, const NodeSet& measured) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= length; ++v) edges.emplace_back(v, v % length + 1);
  return numbered_network(length, edges, measured);
}

NodeSet ids(const Network& g, std::initializer_list<int> labels) {
  NodeSet out;
  for (int l : labels) out.push_back(g.index_of(std::to_string(l)));
  return out;
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

NodeSet random_subset(Rng& rng, int n, double p) {
  NodeSet out;
  for (int v = 0; v < n; ++v)
    if (uniform_real(rng, 0.0, 1.0) < p) out.push_back(v);
  return out;
}

NodeSet random_nonempty_subset(Rng& rng, int n) {
  NodeSet out;
  while (out.empty()) out = random_subset(rng, n, 0.4);
  return out;
}

Network random_digraph(Rng& rng, int nodes, double p, NodeSet measured) {
  std::vector<Edge> edges;
  for (int a = 0; a < nodes; ++a)
    for (int b = 0; b < nodes; ++b)
      if (a != b && uniform_real(rng, 0.0, 1.0) < p) edges.push_back({a, b});
  return Network(numbered(nodes), edges, std::move(measured));
}

Network random_dag(Rng& rng, int nodes, double p, NodeSet measured) {
  NodeSet order(static_cast<std::size_t>(nodes));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> edges;
  for (int a = 0; a < nodes; ++a)
    for (int b = a + 1; b < nodes; ++b)
      if (uniform_real(rng, 0.0, 1.0) < p)
        edges.push_back({order[a], order[b]});
  return Network(numbered(nodes), edges, std::move(measured));
}

Network random_multitree(Rng& rng, int nodes, NodeSet measured) {
  NodeSet order(static_cast<std::size_t>(nodes));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> candidates;
  for (int a = 0; a < nodes; ++a)
    for (int b = a + 1; b < nodes; ++b) candidates.push_back({order[a], order[b]});
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::vector<Edge> edges;
  for (const Edge& e : candidates) {
    edges.push_back(e);
    if (!brute_is_multitree(Network(numbered(nodes), edges, {})))
      edges.pop_back();
  }
  return Network(numbered(nodes), edges, std::move(measured));
}

Network random_cycle(Rng& rng, int nodes, NodeSet measured) {
  NodeSet order(static_cast<std::size_t>(nodes));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> edges;
  for (int k = 0; k < nodes; ++k)
    edges.push_back({order[k], order[(k + 1) % nodes]});
  return Network(numbered(nodes), edges, std::move(measured));
}

CutInstance random_cut_instance(Rng& rng, int nodes, int cut_size, double p) {
  // 0 = S, 1 = B, 2 = P
  std::vector<int> part(static_cast<std::size_t>(nodes));
  NodeSet order(static_cast<std::size_t>(nodes));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < nodes; ++k) {
    if (k < cut_size)
      part[order[k]] = 1;
    else if (k == cut_size)
      part[order[k]] = 0;
    else if (k == cut_size + 1)
      part[order[k]] = 2;
    else
      part[order[k]] = uniform_int(rng, 0, 1) * 2;
  }
  std::vector<Edge> edges;
  for (int a = 0; a < nodes; ++a)
    for (int b = 0; b < nodes; ++b)
      if (a != b && !(part[a] == 0 && part[b] == 2) &&
          uniform_real(rng, 0.0, 1.0) < p)
        edges.push_back({a, b});
  CutInstance inst{Network(numbered(nodes), edges, {}), {}, {}, {}};
  for (int v = 0; v < nodes; ++v)
    (part[v] == 0 ? inst.s : part[v] == 1 ? inst.b : inst.p).push_back(v);
  return inst;
}

// ---------------------------------------------------------------------------

std::vector<NodeSet> simple_paths(const Network& g, const NodeSet& from,
                                  const NodeSet& to) {
  std::vector<bool> in_from(g.size()), in_to(g.size()), used(g.size());
  for (NodeIndex v : from) in_from[v] = true;
  for (NodeIndex v : to) in_to[v] = true;
  std::vector<NodeSet> out;
  NodeSet path;
  std::function<void(NodeIndex)> dfs = [&](NodeIndex v) {
    path.push_back(v);
    used[v] = true;
    if (in_to[v]) {
      out.push_back(path);
    } else {
      for (NodeIndex w : g.out_neighbors(v))
        if (!used[w] && !in_from[w]) dfs(w);
    }
    used[v] = false;
    path.pop_back();
  };
  for (NodeIndex s : from) dfs(s);
  return out;
}

int brute_max_disjoint(const Network& g, const NodeSet& from,
                       const NodeSet& to) {
  std::vector<NodeSet> paths = simple_paths(g, from, to);
  std::vector<std::vector<const NodeSet*>> by_start(from.size());
  for (const NodeSet& p : paths)
    for (std::size_t k = 0; k < from.size(); ++k)
      if (p.front() == from[k]) by_start[k].push_back(&p);
  std::vector<bool> used(g.size());
  int best = 0;
  std::function<void(std::size_t, int)> search = [&](std::size_t k, int count) {
    if (count + static_cast<int>(from.size() - k) <= best) return;
    if (k == from.size()) {
      best = std::max(best, count);
      return;
    }
    for (const NodeSet* p : by_start[k]) {
      if (std::any_of(p->begin(), p->end(), [&](NodeIndex v) { return used[v]; }))
        continue;
      for (NodeIndex v : *p) used[v] = true;
      search(k + 1, count + 1);
      for (NodeIndex v : *p) used[v] = false;
    }
    search(k + 1, count);
  };
  search(0, 0);
  return best;
}

namespace {

bool connected_avoiding(const Network& g, const NodeSet& from,
                        const NodeSet& to, std::uint32_t blocked) {
  std::vector<bool> seen(g.size());
  NodeSet stack;
  for (NodeIndex v : from)
    if (!(blocked >> v & 1u) && !seen[v]) {
      seen[v] = true;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    NodeIndex v = stack.back();
    stack.pop_back();
    if (std::find(to.begin(), to.end(), v) != to.end()) return true;
    for (NodeIndex w : g.out_neighbors(v))
      if (!(blocked >> w & 1u) && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return false;
}

}  // namespace

int brute_min_cut(const Network& g, const NodeSet& from, const NodeSet& to) {
  const int n = g.size();
  int best = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int size = std::popcount(mask);
    if (size < best && !connected_avoiding(g, from, to, mask)) best = size;
  }
  return best;
}

std::uint64_t brute_walks(const Network& g, NodeIndex j, NodeIndex i,
                          int length) {
  std::uint64_t count = 0;
  std::function<void(NodeIndex, int)> dfs = [&](NodeIndex v, int left) {
    if (left == 0) {
      count += v == i;
      return;
    }
    for (NodeIndex w : g.out_neighbors(v)) dfs(w, left - 1);
  };
  dfs(j, length);
  return count;
}

bool brute_unique_walk(const Network& g, NodeIndex i, NodeIndex j) {
  // Only nodes that reach j can continue a walk that ends there.
  std::vector<bool> useful(g.size());
  NodeSet stack{j};
  useful[j] = true;
  while (!stack.empty()) {
    NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex u : g.in_neighbors(v))
      if (!useful[u]) {
        useful[u] = true;
        stack.push_back(u);
      }
  }
  const int limit = 3 * g.size();
  int count = 0;
  std::function<void(NodeIndex, int)> dfs = [&](NodeIndex v, int len) {
    if (count >= 2) return;
    if (v == j && len > 0) ++count;
    if (len == limit) return;
    for (NodeIndex w : g.out_neighbors(v))
      if (useful[w]) dfs(w, len + 1);
  };
  dfs(i, 0);
  return count == 1;
}

bool brute_node_ok(const Network& g, NodeIndex i) {
  const NodeSet& out = g.out_neighbors(i);
  if (out.empty()) return true;
  if (g.measured().empty()) return false;
  return brute_max_disjoint(g, out, g.measured()) ==
         static_cast<int>(out.size());
}

bool brute_fully_identifiable(const Network& g) {
  for (NodeIndex i = 0; i < g.size(); ++i)
    if (!brute_node_ok(g, i)) return false;
  return true;
}

int brute_min_measurement_size(const Network& g) {
  const int n = g.size();
  int best = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int size = std::popcount(mask);
    if (size >= best) continue;
    NodeSet m;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1u) m.push_back(v);
    if (brute_fully_identifiable(g.with_measured(m))) best = size;
  }
  return best;
}

bool brute_is_multitree(const Network& g) {
  for (const Edge& e : g.edges())
    if (!simple_paths(g, {e.to}, {e.from}).empty()) return false;
  for (NodeIndex a = 0; a < g.size(); ++a)
    for (NodeIndex b = 0; b < g.size(); ++b)
      if (a != b && simple_paths(g, {a}, {b}).size() > 1) return false;
  return true;
}

}  // namespace testing
