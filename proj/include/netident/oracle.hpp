#pragma once

// Numeric generic-rank oracle.
//
// The closed-loop matrix T = (I - G)^-1 is a matrix of rational functions in
// the entries of G, so the generic rank of any submatrix of T over transfer
// functions equals its rank at a random scalar point, with probability one
// over the reals and with probability >= 1 - deg/p over GF(p). The oracle
// evaluates T at `trials` random points per field and takes the maximum
// rank. A single full-rank witness proves generic full rank; deficiency in
// every trial is taken as generic deficiency. The measure-zero set of
// exceptional parameter values cannot be certified this way.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "netident/disjoint_paths.hpp"
#include "netident/graph.hpp"

namespace netident {

/// Mersenne prime 2^61 - 1.
inline constexpr std::uint64_t kFieldPrime = (std::uint64_t{1} << 61) - 1;

enum class Field { Real, Prime };

class OracleInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace gf {
std::uint64_t add(std::uint64_t a, std::uint64_t b);
std::uint64_t sub(std::uint64_t a, std::uint64_t b);
std::uint64_t mul(std::uint64_t a, std::uint64_t b);
std::uint64_t pow(std::uint64_t a, std::uint64_t e);
/// Multiplicative inverse via Fermat; a must be nonzero.
std::uint64_t inv(std::uint64_t a);
}  // namespace gf

/// Dense row-major matrix over GF(kFieldPrime).
class PrimeMatrix {
 public:
  PrimeMatrix() = default;
  PrimeMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  std::uint64_t& operator()(int r, int c) { return data_[idx(r, c)]; }
  std::uint64_t operator()(int r, int c) const { return data_[idx(r, c)]; }

  static PrimeMatrix identity(int n);
  [[nodiscard]] PrimeMatrix submatrix(const NodeSet& rows,
                                      const NodeSet& cols) const;
  /// Gauss-Jordan inverse; empty optional if singular.
  [[nodiscard]] std::optional<PrimeMatrix> inverse() const;
  [[nodiscard]] int rank() const;

 private:
  [[nodiscard]] std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r * cols_ + c);
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint64_t> data_;
};

/// A network matrix consistent with the topology and its closed loop.
/// Only the members of the chosen field are populated.
struct GenericInstance {
  Field field = Field::Real;
  Eigen::MatrixXd g_real;
  Eigen::MatrixXd t_real;
  PrimeMatrix g_prime;
  PrimeMatrix t_prime;
};

/// Real entries are uniform in [0.1, 1] / L, which keeps every row sum of G
/// below one; prime entries are uniform nonzero residues. Deterministic per
/// seed. Throws OracleInconsistency if I - G stays singular over GF(p) after
/// repeated resampling.
GenericInstance random_instance(const Network& g, std::uint64_t seed,
                                Field field);

/// Relative singular-value threshold of real_rank.
inline constexpr double kRealRankTolerance = 1e-9;

/// Numerical rank after row/column equilibration, counting singular values
/// above kRealRankTolerance * sigma_max.
int real_rank(const Eigen::MatrixXd& m);

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const NodeSet& rows,
                          const NodeSet& cols);

struct FieldRanks {
  int real = 0;
  int prime = 0;
};

/// Generic ranks of submatrices of T for one network, over a fixed set of
/// sampled instances in both fields.
class GenericRankOracle {
 public:
  static constexpr int kDefaultTrials = 8;

  GenericRankOracle(const Network& g, int trials, std::uint64_t seed);

  /// Max rank over trials in each field, without the agreement check.
  [[nodiscard]] FieldRanks ranks(const NodeSet& rows, const NodeSet& cols) const;
  /// Generic rank; throws OracleInconsistency if the fields disagree.
  [[nodiscard]] int rank(const NodeSet& rows, const NodeSet& cols) const;

  /// Column of node i: rank of T[measured, out-neighbors] equals out-degree.
  [[nodiscard]] bool column_identifiable(NodeIndex i) const;
  /// Per-field verdicts for the column test.
  struct ColumnVerdicts {
    bool real = false;
    bool prime = false;
  };
  [[nodiscard]] ColumnVerdicts column_verdicts(NodeIndex i) const;

  /// Edge i -> k: removing column k from T[measured, out-neighbors of i]
  /// lowers the rank by one.
  [[nodiscard]] bool edge_identifiable(NodeIndex i, NodeIndex k) const;

  [[nodiscard]] const std::vector<GenericInstance>& real_instances() const {
    return real_;
  }
  [[nodiscard]] const std::vector<GenericInstance>& prime_instances() const {
    return prime_;
  }

 private:
  const Network* g_;
  std::vector<GenericInstance> real_;
  std::vector<GenericInstance> prime_;
};

bool generic_column_identifiable(const Network& g, NodeIndex i, int trials,
                                 std::uint64_t seed);

/// Throws std::invalid_argument for a nonexistent edge.
bool generic_edge_identifiable(const Network& g, NodeIndex i, NodeIndex k,
                               int trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Walk and path lemmas, used as independent checks of the graph algorithms.

using BigInt = boost::multiprecision::cpp_int;
using WalkMatrix = std::vector<std::vector<BigInt>>;

/// A^k for the 0/1 adjacency matrix (A(i, j) = 1 iff edge j -> i); entry
/// (i, j) counts the walks of length k from j to i.
WalkMatrix walk_counts(const Network& g, int k);

/// Checks that A^k(i, j) = 0 for every k <= L whenever j cannot reach i.
bool walk_counts_respect_reachability(const Network& g);

/// For vertex-disjoint paths s_t -> ... -> e_t on `nodes` nodes, checks that
/// the inverse of I - A (A the adjacency of the path edges only) restricted
/// to rows {e_t} and columns {s_t} is the identity pairing e_t with s_t.
/// Throws std::invalid_argument if the paths overlap.
bool disjoint_paths_give_permutation(int nodes, const PathCertificate& paths);

/// Checks, over `trials` random instances in both fields, that
/// rank T[P u B, S u B] <= |B| and (reals) that
/// T[P, S] = (I - G[P, P])^-1 G[P, B] T[B, S] to 1e-9 relative.
/// Throws std::invalid_argument unless (S, B, P) partitions the nodes with no
/// edge from S into P.
bool partition_rank_bound_holds(const Network& g, const NodeSet& s,
                                const NodeSet& b, const NodeSet& p, int trials,
                                std::uint64_t seed);

}  // namespace netident
