#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netident {

/// Dense internal node index, 0..L-1 in declaration order.
using NodeIndex = int;
using NodeSet = std::vector<NodeIndex>;

/// Directed edge j -> i, i.e. the network matrix entry G(to, from) is nonzero.
struct Edge {
  NodeIndex from;
  NodeIndex to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Known topology of a dynamical network together with the measured-node set.
///
/// Immutable after construction. Edges are kept sorted by (from, to); node
/// sets handed out by queries are sorted by index.
class Network {
 public:
  Network() = default;

  /// Throws std::invalid_argument on duplicate labels, unknown endpoints,
  /// self-edges, duplicate edges or unknown measured nodes.
  Network(std::vector<std::string> labels, std::vector<Edge> edges,
          NodeSet measured);

  /// Same, with edges and measured nodes given by label.
  static Network from_labels(
      std::vector<std::string> labels,
      const std::vector<std::pair<std::string, std::string>>& edges,
      const std::vector<std::string>& measured);

  [[nodiscard]] int size() const noexcept {
    return static_cast<int>(labels_.size());
  }
  [[nodiscard]] int edge_count() const noexcept {
    return static_cast<int>(edges_.size());
  }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept {
    return labels_;
  }
  [[nodiscard]] const std::string& label(NodeIndex v) const {
    return labels_.at(static_cast<std::size_t>(v));
  }
  [[nodiscard]] std::optional<NodeIndex> find(std::string_view label) const;
  /// Like find(), but throws std::invalid_argument for unknown labels.
  [[nodiscard]] NodeIndex index_of(std::string_view label) const;

  [[nodiscard]] const std::vector<Edge>& edges() const noexcept {
    return edges_;
  }
  [[nodiscard]] bool has_edge(NodeIndex from, NodeIndex to) const;
  [[nodiscard]] const NodeSet& out_neighbors(NodeIndex v) const {
    return out_[static_cast<std::size_t>(v)];
  }
  [[nodiscard]] const NodeSet& in_neighbors(NodeIndex v) const {
    return in_[static_cast<std::size_t>(v)];
  }
  [[nodiscard]] int out_degree(NodeIndex v) const {
    return static_cast<int>(out_neighbors(v).size());
  }
  [[nodiscard]] int in_degree(NodeIndex v) const {
    return static_cast<int>(in_neighbors(v).size());
  }

  [[nodiscard]] const NodeSet& measured() const noexcept { return measured_; }
  [[nodiscard]] bool is_measured(NodeIndex v) const {
    return measured_mask_[static_cast<std::size_t>(v)];
  }

  /// Copy of this topology with a different measured set.
  [[nodiscard]] Network with_measured(NodeSet measured) const;
  /// Copy of this topology without the given edge.
  [[nodiscard]] Network without_edge(Edge e) const;

  [[nodiscard]] std::string format_set(const NodeSet& nodes) const;
  [[nodiscard]] std::string format_edge(Edge e) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<Edge> edges_;
  std::vector<NodeSet> out_;
  std::vector<NodeSet> in_;
  NodeSet measured_;
  std::vector<bool> measured_mask_;
};

/// Sorts and deduplicates a node set.
NodeSet normalized(NodeSet nodes);

// ---------------------------------------------------------------------------
// Document I/O

/// Parses the JSON network description:
///
///   { "nodes":    ["a", "b", ...],
///     "edges":    [{"from": "a", "to": "b"}, ...],
///     "measured": ["b", ...] }
///
/// Labels may be strings or integers (integers are stored as their decimal
/// text). "measured" may be omitted (empty set). Other top-level keys are
/// rejected. Throws ParseError.
Network parse_network(std::string_view text);
Network load_network(const std::string& path);

/// Canonical document for the network; parse_network(serialize_network(g))
/// reproduces g.
std::string serialize_network(const Network& g);

/// Graphviz rendering; measured nodes are drawn double-circled.
std::string to_dot(const Network& g);

// ---------------------------------------------------------------------------
// Structural queries

struct SourcesSinks {
  NodeSet sources;   // out-edges only
  NodeSet sinks;     // in-edges only
  NodeSet isolated;  // no edges at all
};

SourcesSinks sources_sinks(const Network& g);

struct StructureSummary {
  int nodes = 0;            // L
  int edges = 0;            // n
  int measured = 0;         // p
  int sources = 0;          // f
  int sinks = 0;            // s
  int isolated = 0;
  int max_out_degree = 0;
};

StructureSummary summarize(const Network& g);

/// Nodes reachable from any node of `from` (including `from` itself),
/// optionally avoiding the `blocked` nodes entirely.
std::vector<bool> reachable_from(const Network& g, const NodeSet& from,
                                 const std::vector<bool>* blocked = nullptr);
/// Nodes that can reach `to` (including `to`).
std::vector<bool> reaching(const Network& g, NodeIndex to);

/// True iff a directed path from i to j exists; i reaches itself.
bool can_reach(const Network& g, NodeIndex i, NodeIndex j);

/// True iff exactly one walk leads from i to j (i != j).
bool unique_walk(const Network& g, NodeIndex i, NodeIndex j);

/// Nodes of the unique walk i -> ... -> j, empty when unique_walk is false.
NodeSet unique_walk_path(const Network& g, NodeIndex i, NodeIndex j);

bool is_acyclic(const Network& g);

/// Acyclic and at most one directed path between any ordered pair.
bool is_multitree(const Network& g);

/// Number of weakly connected components (isolated nodes count as one each).
int weak_components(const Network& g);

/// Strongly connected components, each sorted, ordered by smallest member.
std::vector<NodeSet> strong_components(const Network& g);

/// Cycles none of whose nodes lie on any other cycle, sorted by first node.
/// Each cycle is returned in traversal order starting at its smallest index.
std::vector<NodeSet> isolated_cycles(const Network& g);

/// Saturating path count used by the multitree and unique-walk tests.
using PathCount = std::uint64_t;
inline constexpr PathCount kPathCountMax = UINT64_MAX;

}  // namespace netident
