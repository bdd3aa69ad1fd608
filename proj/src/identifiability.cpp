#include "netident/identifiability.hpp"

#include <algorithm>
#include <stdexcept>

namespace netident {

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::AllOutEdgesIdentifiable: return "AllOutEdgesIdentifiable";
    case NodeStatus::NotAllIdentifiable: return "NotAllIdentifiable";
    case NodeStatus::NoOutEdges: return "NoOutEdges";
  }
  return "?";
}

std::string_view to_string(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::Identifiable: return "Identifiable";
    case EdgeStatus::Unknown: return "Unknown-by-graph-tests";
    case EdgeStatus::NotIdentifiableColumn: return "NotIdentifiableColumn";
  }
  return "?";
}

std::string_view to_string(EdgeBasis b) {
  switch (b) {
    case EdgeBasis::NodeCondition: return "node-disjoint-paths";
    case EdgeBasis::SubsetCondition: return "subset-disjoint-paths";
    case EdgeBasis::UniqueWalk: return "unique-walk";
    case EdgeBasis::IsolatedCycle: return "isolated-cycle";
    case EdgeBasis::Oracle: return "oracle";
    case EdgeBasis::None: return "none";
  }
  return "?";
}

bool EdgeVerdict::has_basis(EdgeBasis b) const {
  return std::find(bases.begin(), bases.end(), b) != bases.end();
}

NodeVerdict check_node(const Network& g, NodeIndex node) {
  NodeVerdict v;
  v.node = node;
  v.out_degree = g.out_degree(node);
  if (v.out_degree == 0) {
    v.status = NodeStatus::NoOutEdges;
    return v;
  }
  if (g.measured().empty()) {
    v.status = NodeStatus::NotAllIdentifiable;
    v.bottleneck = Bottleneck{};
    return v;
  }
  MengerResult r = menger(g, g.out_neighbors(node), g.measured());
  v.paths = std::move(r.paths.certificate);
  if (r.paths.count == v.out_degree) {
    v.status = NodeStatus::AllOutEdgesIdentifiable;
  } else {
    v.status = NodeStatus::NotAllIdentifiable;
    v.bottleneck = std::move(r.cut);
  }
  return v;
}

SubsetCheck check_subset(const Network& g, NodeIndex node,
                         const NodeSet& subset) {
  const NodeSet& out = g.out_neighbors(node);
  const NodeSet chosen = normalized(subset);
  if (chosen.empty())
    throw std::invalid_argument("check_subset needs a nonempty subset");
  NodeSet others;
  std::set_difference(out.begin(), out.end(), chosen.begin(), chosen.end(),
                      std::back_inserter(others));
  if (others.size() + chosen.size() != out.size())
    throw std::invalid_argument("subset is not contained in the out-neighbors of " +
                                g.label(node));

  // Any admissible target set lies among the measured nodes unreachable from
  // the other out-neighbors; one max-flow over all of them decides.
  const auto tainted = reachable_from(g, others);
  NodeSet targets;
  for (NodeIndex j : g.measured())
    if (!tainted[j]) targets.push_back(j);

  SubsetCheck result;
  if (targets.empty()) return result;
  DisjointPaths dp = max_disjoint_paths(g, chosen, targets);
  if (dp.count != static_cast<int>(chosen.size())) return result;
  result.ok = true;
  for (const NodeSet& p : dp.certificate.paths)
    result.measured_targets.push_back(p.back());
  result.measured_targets = normalized(std::move(result.measured_targets));
  result.paths = std::move(dp.certificate);
  return result;
}

std::vector<Edge> measured_cover(const Network& g, NodeIndex j) {
  if (!g.is_measured(j))
    throw std::invalid_argument("node " + g.label(j) + " is not measured");
  const auto ancestors = reaching(g, j);
  std::vector<Edge> cover;
  for (NodeIndex i = 0; i < g.size(); ++i) {
    if (i == j || !ancestors[i]) continue;
    const NodeSet path = unique_walk_path(g, i, j);
    for (std::size_t k = 1; k < path.size(); ++k)
      cover.push_back({path[k - 1], path[k]});
  }
  std::sort(cover.begin(), cover.end());
  cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
  return cover;
}

namespace {

bool on_unique_walk_to_measured(const Network& g, Edge e) {
  // A walk x -> ... -> i -> k -> ... -> j is unique only if the walk from i
  // is, so it suffices to start at the tail.
  for (NodeIndex j : g.measured()) {
    if (j == e.from) continue;
    const NodeSet path = unique_walk_path(g, e.from, j);
    if (path.size() >= 2 && path[1] == e.to) return true;
  }
  return false;
}

bool in_measured_isolated_cycle(const Network& g, Edge e,
                                const std::vector<NodeSet>& cycles) {
  for (const NodeSet& c : cycles) {
    const auto at = std::find(c.begin(), c.end(), e.from);
    if (at == c.end()) continue;
    const NodeIndex next = std::next(at) == c.end() ? c.front() : *std::next(at);
    if (next != e.to) return false;
    return std::any_of(c.begin(), c.end(),
                       [&](NodeIndex v) { return g.is_measured(v); });
  }
  return false;
}

EdgeVerdict edge_verdict(const Network& g, Edge e, const NodeVerdict& tail,
                         const std::vector<NodeSet>& cycles) {
  EdgeVerdict v;
  v.edge = e;
  if (tail.status == NodeStatus::AllOutEdgesIdentifiable)
    v.bases.push_back(EdgeBasis::NodeCondition);
  if (check_subset(g, e.from, {e.to}).ok)
    v.bases.push_back(EdgeBasis::SubsetCondition);
  if (on_unique_walk_to_measured(g, e)) v.bases.push_back(EdgeBasis::UniqueWalk);
  if (in_measured_isolated_cycle(g, e, cycles))
    v.bases.push_back(EdgeBasis::IsolatedCycle);
  v.status = v.bases.empty() ? EdgeStatus::Unknown : EdgeStatus::Identifiable;
  return v;
}

}  // namespace

EdgeVerdict check_edge(const Network& g, NodeIndex from, NodeIndex to) {
  if (from < 0 || from >= g.size() || to < 0 || to >= g.size() ||
      !g.has_edge(from, to))
    throw std::invalid_argument("no such edge");
  return edge_verdict(g, {from, to}, check_node(g, from), isolated_cycles(g));
}

BoundChecks bound_checks(const Network& g) {
  const SourcesSinks roles = sources_sinks(g);
  const StructureSummary sum = summarize(g);
  BoundChecks b;

  CountingBound& c = b.counting;
  c.nodes = sum.nodes;
  c.edges = sum.edges;
  c.sinks = sum.sinks;
  for (NodeIndex v : g.measured())
    if (!std::binary_search(roles.sinks.begin(), roles.sinks.end(), v))
      ++c.extra_measured;
  const int free_rows = c.nodes - c.sinks;
  c.vacuous = c.edges == 0 || free_rows <= 0;
  if (c.vacuous) {
    c.satisfied = true;
  } else {
    c.required = (c.edges + free_rows - 1) / free_rows;
    c.satisfied = (c.extra_measured + c.sinks) * free_rows >= c.edges;
  }

  b.out_degree.measured = sum.measured;
  b.out_degree.max_out_degree = sum.max_out_degree;
  b.out_degree.satisfied = sum.measured >= sum.max_out_degree;

  for (NodeIndex s : roles.sinks)
    if (!g.is_measured(s)) b.sinks.unmeasured_sinks.push_back(s);
  b.sinks.satisfied = b.sinks.unmeasured_sinks.empty();
  return b;
}

bool fully_identifiable(const Network& g) {
  for (NodeIndex v = 0; v < g.size(); ++v)
    if (!check_node(g, v).ok()) return false;
  return true;
}

IdentifiabilityReport full_report(const Network& g) {
  IdentifiabilityReport r;
  r.summary = summarize(g);
  r.roles = sources_sinks(g);
  r.checks = bound_checks(g);

  r.nodes.reserve(static_cast<std::size_t>(g.size()));
  for (NodeIndex v = 0; v < g.size(); ++v) r.nodes.push_back(check_node(g, v));
  r.fully_identifiable = std::all_of(r.nodes.begin(), r.nodes.end(),
                                     [](const NodeVerdict& v) { return v.ok(); });

  const auto cycles = isolated_cycles(g);
  r.edges.reserve(g.edges().size());
  for (const Edge& e : g.edges())
    r.edges.push_back(edge_verdict(g, e, r.nodes[e.from], cycles));

  r.shortcuts.multitree = is_multitree(g);
  r.shortcuts.multitree_identifiable =
      r.shortcuts.multitree && r.checks.sinks.satisfied;
  for (const NodeSet& c : cycles) {
    CycleAnnotation a{c, {}};
    for (NodeIndex v : c)
      if (g.is_measured(v)) a.measured.push_back(v);
    a.measured = normalized(std::move(a.measured));
    r.shortcuts.isolated_cycles.push_back(std::move(a));
  }

  if (g.size() > 0 && weak_components(g) > 1)
    r.warnings.emplace_back(
        "network is not connected; results are reported per the formal "
        "conditions, component by component");
  if (g.measured().empty() && g.edge_count() > 0)
    r.warnings.emplace_back("no measured nodes");
  if (r.shortcuts.multitree_identifiable && !r.fully_identifiable)
    r.warnings.emplace_back(
        "internal inconsistency: multitree shortcut disagrees with path checks");
  return r;
}

namespace {

// Calls visit(combination) for every k-subset of `pool` in lexicographic
// order until it returns true.
template <typename Visit>
bool for_each_combination(const NodeSet& pool, int k, Visit&& visit) {
  const int n = static_cast<int>(pool.size());
  if (k < 0 || k > n) return false;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) pick[t] = t;
  NodeSet chosen(static_cast<std::size_t>(k));
  for (;;) {
    for (int t = 0; t < k; ++t) chosen[t] = pool[pick[t]];
    if (visit(chosen)) return true;
    int t = k - 1;
    while (t >= 0 && pick[t] == n - k + t) --t;
    if (t < 0) return false;
    ++pick[t];
    for (int u = t + 1; u < k; ++u) pick[u] = pick[u - 1] + 1;
  }
}

NodeSet merged(const NodeSet& a, const NodeSet& b) {
  NodeSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return normalized(std::move(out));
}

int passing_nodes(const Network& g) {
  int ok = 0;
  for (NodeIndex v = 0; v < g.size(); ++v) ok += check_node(g, v).ok();
  return ok;
}

}  // namespace

NodeSet min_measurement_set(const Network& g, SearchMode mode) {
  const SourcesSinks roles = sources_sinks(g);
  // Sinks are mandatory; sources and isolated nodes never help.
  NodeSet candidates;
  for (NodeIndex v = 0; v < g.size(); ++v)
    if (g.in_degree(v) > 0 && g.out_degree(v) > 0) candidates.push_back(v);
  const NodeSet& base = roles.sinks;

  if (mode == SearchMode::Exact) {
    if (g.size() > kExactSearchMaxNodes)
      throw std::invalid_argument("exact search is limited to " +
                                  std::to_string(kExactSearchMaxNodes) +
                                  " nodes; use greedy mode");
    const BoundChecks b = bound_checks(g.with_measured(base));
    const int lower = std::max(b.counting.required, b.out_degree.max_out_degree);
    const int start = std::max(0, lower - static_cast<int>(base.size()));
    NodeSet found;
    for (int k = start; k <= static_cast<int>(candidates.size()); ++k) {
      if (for_each_combination(candidates, k, [&](const NodeSet& extra) {
            NodeSet trial = merged(base, extra);
            if (!fully_identifiable(g.with_measured(trial))) return false;
            found = std::move(trial);
            return true;
          }))
        return found;
    }
    throw std::logic_error("no measured set makes the network identifiable");
  }

  NodeSet measured = base;
  while (!fully_identifiable(g.with_measured(measured))) {
    NodeIndex best = -1;
    int best_score = -1;
    for (NodeIndex v : candidates) {
      if (std::binary_search(measured.begin(), measured.end(), v)) continue;
      const int score = passing_nodes(g.with_measured(merged(measured, {v})));
      if (score > best_score) {
        best = v;
        best_score = score;
      }
    }
    if (best < 0)
      throw std::logic_error("no measured set makes the network identifiable");
    measured = merged(measured, {best});
  }
  return measured;
}

}  // namespace netident
