#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netident/disjoint_paths.hpp"
#include "netident/graph.hpp"

namespace netident {

enum class NodeStatus { AllOutEdgesIdentifiable, NotAllIdentifiable, NoOutEdges };

/// Verdict on the column of the network matrix belonging to one node, i.e. on
/// all transfer functions of edges leaving it.
struct NodeVerdict {
  NodeIndex node = 0;
  int out_degree = 0;
  NodeStatus status = NodeStatus::NoOutEdges;
  /// Disjoint paths from the out-neighbors to measured nodes (maximum family).
  PathCertificate paths;
  /// Set when the status is NotAllIdentifiable; smaller than out_degree.
  std::optional<Bottleneck> bottleneck;

  [[nodiscard]] bool ok() const {
    return status != NodeStatus::NotAllIdentifiable;
  }
};

enum class EdgeStatus { Identifiable, Unknown, NotIdentifiableColumn };

/// Which argument established an edge verdict.
enum class EdgeBasis {
  NodeCondition,    // all out-edges of the tail identifiable
  SubsetCondition,  // disjoint paths from {head} avoiding other out-neighbors
  UniqueWalk,       // edge on the only walk from some node to a measured node
  IsolatedCycle,    // edge of an isolated cycle containing a measured node
  Oracle,           // decided by the numeric generic-rank oracle
  None,
};

struct EdgeVerdict {
  Edge edge{};
  EdgeStatus status = EdgeStatus::Unknown;
  /// Every argument that applies, in enum order; empty when Unknown.
  std::vector<EdgeBasis> bases;

  [[nodiscard]] bool has_basis(EdgeBasis b) const;
};

std::string_view to_string(NodeStatus s);
std::string_view to_string(EdgeStatus s);
std::string_view to_string(EdgeBasis b);

/// Column test: identifiable iff the out-neighbors of `node` have
/// out_degree vertex-disjoint paths to measured nodes.
NodeVerdict check_node(const Network& g, NodeIndex node);

struct SubsetCheck {
  bool ok = false;
  NodeSet measured_targets;  // the measured endpoints of the disjoint paths
  PathCertificate paths;
};

/// Partial-column test for the edges from `node` to `subset`: disjoint paths
/// from `subset` to measured nodes that no other out-neighbor can reach.
/// Throws std::invalid_argument unless subset is a nonempty subset of the
/// out-neighbors.
SubsetCheck check_subset(const Network& g, NodeIndex node,
                         const NodeSet& subset);

/// Every edge on the unique walk from some node to the measured node `j`.
/// Throws std::invalid_argument if j is not measured.
std::vector<Edge> measured_cover(const Network& g, NodeIndex j);

/// Graph-theoretic edge verdict. Never reports NotIdentifiableColumn; an
/// Unknown result is left for the numeric oracle to settle.
/// Throws std::invalid_argument for a nonexistent edge.
EdgeVerdict check_edge(const Network& g, NodeIndex from, NodeIndex to);

struct CountingBound {
  int nodes = 0;           // L
  int edges = 0;           // n
  int sinks = 0;           // s
  int extra_measured = 0;  // m: measured nodes that are not sinks
  int required = 0;        // least p with p (L - s) >= n
  bool vacuous = false;    // no edges, or every node a sink
  bool satisfied = false;  // (m + s)(L - s) >= n
};

struct OutDegreeBound {
  int measured = 0;
  int max_out_degree = 0;
  bool satisfied = false;
};

struct SinkCheck {
  NodeSet unmeasured_sinks;
  bool satisfied = false;
};

struct BoundChecks {
  CountingBound counting;
  OutDegreeBound out_degree;
  SinkCheck sinks;

  [[nodiscard]] bool all_satisfied() const {
    return counting.satisfied && out_degree.satisfied && sinks.satisfied;
  }
};

BoundChecks bound_checks(const Network& g);

struct CycleAnnotation {
  NodeSet cycle;     // traversal order
  NodeSet measured;  // measured members
};

struct Shortcuts {
  bool multitree = false;
  /// Multitree with every sink measured: fully identifiable without any
  /// per-node test.
  bool multitree_identifiable = false;
  std::vector<CycleAnnotation> isolated_cycles;
};

struct IdentifiabilityReport {
  StructureSummary summary;
  SourcesSinks roles;
  std::vector<NodeVerdict> nodes;
  std::vector<EdgeVerdict> edges;
  BoundChecks checks;
  Shortcuts shortcuts;
  std::vector<std::string> warnings;
  bool fully_identifiable = false;
};

IdentifiabilityReport full_report(const Network& g);

/// True iff every node passes check_node.
bool fully_identifiable(const Network& g);

enum class SearchMode { Exact, Greedy };

/// Measured set making the whole network identifiable. Exact mode returns a
/// minimum-cardinality set (ties broken lexicographically on node index) and
/// is limited to 20 nodes; greedy mode returns some feasible superset of the
/// sinks.
NodeSet min_measurement_set(const Network& g, SearchMode mode);

inline constexpr int kExactSearchMaxNodes = 20;

}  // namespace netident
