#pragma once

#include <vector>

#include "netident/graph.hpp"

namespace netident {

/// Mutually vertex-disjoint directed paths (endpoints included). A path of a
/// single node is the trivial path of a node lying in both end sets.
struct PathCertificate {
  std::vector<NodeSet> paths;
};

/// Vertex cut separating a source set from a target set.
struct Bottleneck {
  NodeSet nodes;
  [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
};

struct DisjointPaths {
  int count = 0;
  PathCertificate certificate;
};

/// Maximum number of vertex-disjoint directed paths from `from` to `to`
/// (the sets may overlap), with one maximum family as certificate.
/// Throws std::invalid_argument if either set is empty.
DisjointPaths max_disjoint_paths(const Network& g, const NodeSet& from,
                                 const NodeSet& to);

/// Minimum set of nodes meeting every directed path from `from` to `to`;
/// its size equals the max_disjoint_paths count.
Bottleneck min_vertex_cut(const Network& g, const NodeSet& from,
                          const NodeSet& to);

/// Both results of one max-flow run.
struct MengerResult {
  DisjointPaths paths;
  Bottleneck cut;
};
MengerResult menger(const Network& g, const NodeSet& from, const NodeSet& to);

/// True iff the paths are valid walks of g, pairwise vertex-disjoint, simple,
/// and each starts in `from` and ends in `to`.
bool is_valid_certificate(const Network& g, const PathCertificate& cert,
                          const NodeSet& from, const NodeSet& to);

/// True iff deleting `cut` leaves no directed path (trivial ones included)
/// from `from` to `to`.
bool separates(const Network& g, const Bottleneck& cut, const NodeSet& from,
               const NodeSet& to);

}  // namespace netident
