#include "netident/disjoint_paths.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace netident {

namespace {

// Dinic's algorithm on a small integral network. Arcs are scanned in
// insertion order, which makes the resulting flow deterministic.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  int add_arc(int from, int to, int capacity) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, capacity, 0});
    arcs_.push_back({from, 0, 0});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  int max_flow(int source, int sink) {
    int total = 0;
    while (build_levels(source, sink)) {
      cursor_.assign(adj_.size(), 0);
      while (int pushed = augment(source, sink, kInfinity)) total += pushed;
    }
    return total;
  }

  [[nodiscard]] int flow(int arc) const { return arcs_[arc].flow; }
  [[nodiscard]] int head(int arc) const { return arcs_[arc].to; }
  [[nodiscard]] const std::vector<int>& arcs_from(int v) const {
    return adj_[v];
  }
  [[nodiscard]] static bool is_forward(int arc) { return arc % 2 == 0; }

  /// Nodes reachable from `source` in the residual network.
  [[nodiscard]] std::vector<bool> residual_reachable(int source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<int> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int a : adj_[v]) {
        const Arc& arc = arcs_[a];
        if (arc.capacity - arc.flow > 0 && !seen[arc.to]) {
          seen[arc.to] = true;
          stack.push_back(arc.to);
        }
      }
    }
    return seen;
  }

  static constexpr int kInfinity = std::numeric_limits<int>::max() / 2;

 private:
  struct Arc {
    int to;
    int capacity;
    int flow;
  };

  bool build_levels(int source, int sink) {
    level_.assign(adj_.size(), -1);
    std::vector<int> queue{source};
    level_[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int a : adj_[v]) {
        const Arc& arc = arcs_[a];
        if (arc.capacity - arc.flow > 0 && level_[arc.to] < 0) {
          level_[arc.to] = level_[v] + 1;
          queue.push_back(arc.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  int augment(int v, int sink, int limit) {
    if (v == sink) return limit;
    for (std::size_t& k = cursor_[v]; k < adj_[v].size(); ++k) {
      const int a = adj_[v][k];
      Arc& arc = arcs_[a];
      if (arc.capacity - arc.flow <= 0 || level_[arc.to] != level_[v] + 1)
        continue;
      if (int pushed = augment(arc.to, sink,
                               std::min(limit, arc.capacity - arc.flow))) {
        arc.flow += pushed;
        arcs_[a ^ 1].flow -= pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

// Node v is split into v_in = 2v and v_out = 2v+1 joined by a unit arc; all
// other arcs are uncapacitated so that every minimum cut consists of split
// arcs only. Nodes in both end sets are wired source -> v_in and
// v_out -> sink, so a trivial path still consumes the node's unit.
MengerResult solve(const Network& g, const NodeSet& from, const NodeSet& to) {
  if (from.empty() || to.empty())
    throw std::invalid_argument("disjoint paths need nonempty end sets");
  const int n = g.size();
  for (NodeIndex v : from)
    if (v < 0 || v >= n) throw std::invalid_argument("node out of range");
  for (NodeIndex v : to)
    if (v < 0 || v >= n) throw std::invalid_argument("node out of range");

  const int source = 2 * n, sink = 2 * n + 1;
  FlowNetwork net(2 * n + 2);
  const int inf = FlowNetwork::kInfinity;
  for (NodeIndex v = 0; v < n; ++v) net.add_arc(2 * v, 2 * v + 1, 1);
  for (const Edge& e : g.edges()) net.add_arc(2 * e.from + 1, 2 * e.to, inf);
  for (NodeIndex v : normalized(from)) net.add_arc(source, 2 * v, inf);
  for (NodeIndex v : normalized(to)) net.add_arc(2 * v + 1, sink, inf);

  MengerResult result;
  result.paths.count = net.max_flow(source, sink);

  // Flow decomposition: every split arc carries at most one unit, so each
  // v_out has at most one outgoing arc with positive flow.
  for (int a : net.arcs_from(source)) {
    if (!FlowNetwork::is_forward(a) || net.flow(a) <= 0) continue;
    NodeSet path;
    int v_in = net.head(a);
    for (;;) {
      const NodeIndex v = v_in / 2;
      path.push_back(v);
      int next = -1;
      for (int b : net.arcs_from(2 * v + 1)) {
        if (FlowNetwork::is_forward(b) && net.flow(b) > 0) {
          next = net.head(b);
          break;
        }
      }
      if (next == sink || next < 0) break;
      v_in = next;
    }
    result.paths.certificate.paths.push_back(std::move(path));
  }

  const auto reach = net.residual_reachable(source);
  for (NodeIndex v = 0; v < n; ++v)
    if (reach[2 * v] && !reach[2 * v + 1]) result.cut.nodes.push_back(v);
  return result;
}

}  // namespace

MengerResult menger(const Network& g, const NodeSet& from, const NodeSet& to) {
  return solve(g, from, to);
}

DisjointPaths max_disjoint_paths(const Network& g, const NodeSet& from,
                                 const NodeSet& to) {
  return solve(g, from, to).paths;
}

Bottleneck min_vertex_cut(const Network& g, const NodeSet& from,
                          const NodeSet& to) {
  return solve(g, from, to).cut;
}

bool is_valid_certificate(const Network& g, const PathCertificate& cert,
                          const NodeSet& from, const NodeSet& to) {
  std::vector<bool> used(static_cast<std::size_t>(g.size()), false);
  auto contains = [](const NodeSet& s, NodeIndex v) {
    return std::find(s.begin(), s.end(), v) != s.end();
  };
  for (const NodeSet& path : cert.paths) {
    if (path.empty()) return false;
    if (!contains(from, path.front()) || !contains(to, path.back()))
      return false;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const NodeIndex v = path[k];
      if (v < 0 || v >= g.size() || used[v]) return false;
      used[v] = true;
      if (k > 0 && !g.has_edge(path[k - 1], v)) return false;
    }
  }
  return true;
}

bool separates(const Network& g, const Bottleneck& cut, const NodeSet& from,
               const NodeSet& to) {
  std::vector<bool> blocked(static_cast<std::size_t>(g.size()), false);
  for (NodeIndex v : cut.nodes) blocked[v] = true;
  const auto reach = reachable_from(g, from, &blocked);
  return std::none_of(to.begin(), to.end(),
                      [&](NodeIndex v) { return reach[v]; });
}

}  // namespace netident
