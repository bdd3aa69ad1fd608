#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "netident/graph.hpp"

namespace testing {

using netident::Edge;
using netident::Network;
using netident::NodeIndex;
using netident::NodeSet;
using Rng = std::mt19937_64;

std::string data_path(const std::string& name);

// Fixed example networks, labels "1".."L".
// Measured nodes are given by 1-based label.
Network fork(const NodeSet& measured);       // 1->2, 1->3, 3->2
Network loop3(const NodeSet& measured);      // 2->1, 3->1, 1->3
Network dense3(const NodeSet& measured);     // 2->1, 3->1, 1->2, 3->2, 2->3
Network fanout(const std::vector<std::string>& measured);  // nine nodes + "i"
Network chain(int length, const NodeSet& measured);
Network cycle(int length, const NodeSet& measured);

/// Index set from 1-based labels of a numerically labelled network.
NodeSet ids(const Network& g, std::initializer_list<int> labels);

// ---------------------------------------------------------------------------
// Seeded generators.

int uniform_int(Rng& rng, int lo, int hi);
double uniform_real(Rng& rng, double lo, double hi);
NodeSet random_subset(Rng& rng, int n, double p);
NodeSet random_nonempty_subset(Rng& rng, int n);

/// Each ordered pair is an edge with probability p.
Network random_digraph(Rng& rng, int nodes, double p, NodeSet measured = {});
/// Random multitree: edges added in a random topological order, each kept
/// only if no pair of nodes gains a second path.
Network random_multitree(Rng& rng, int nodes, NodeSet measured = {});
/// Directed cycle through a random permutation of the nodes.
Network random_cycle(Rng& rng, int nodes, NodeSet measured = {});
/// Random DAG over a random node order with edge probability p.
Network random_dag(Rng& rng, int nodes, double p, NodeSet measured = {});

struct CutInstance {
  Network g;
  NodeSet s, b, p;
};
/// Random graph partitioned into (S, B, P) with no edge from S into P.
CutInstance random_cut_instance(Rng& rng, int nodes, int cut_size, double p);

// ---------------------------------------------------------------------------
// Brute-force oracles, exponential and only for small graphs.

/// Every simple path starting in `from`, ending in `to`, touching `from`
/// only at its start and `to` only at its end.
std::vector<NodeSet> simple_paths(const Network& g, const NodeSet& from,
                                  const NodeSet& to);
/// Largest family of pairwise vertex-disjoint paths, by exhaustive search.
int brute_max_disjoint(const Network& g, const NodeSet& from,
                       const NodeSet& to);
/// Smallest separating node set, by enumeration in order of size.
int brute_min_cut(const Network& g, const NodeSet& from, const NodeSet& to);

/// Number of walks of exactly `length` edges from j to i, by enumeration.
std::uint64_t brute_walks(const Network& g, NodeIndex j, NodeIndex i,
                          int length);
/// Exactly one walk from i to j, counting walks of length up to 3L.
bool brute_unique_walk(const Network& g, NodeIndex i, NodeIndex j);
/// Column condition evaluated with brute_max_disjoint.
bool brute_node_ok(const Network& g, NodeIndex i);
bool brute_fully_identifiable(const Network& g);
/// Size of the smallest measured set making g fully identifiable.
int brute_min_measurement_size(const Network& g);
/// Acyclic and at most one path between any ordered pair, by path listing.
bool brute_is_multitree(const Network& g);

}  // namespace testing
