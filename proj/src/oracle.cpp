#include "netident/oracle.hpp"

#include <algorithm>
#include <random>

namespace netident {

namespace gf {

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s >= kFieldPrime ? s - kFieldPrime : s;
}

std::uint64_t sub(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + kFieldPrime - b;
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  // 2^61 = 1 (mod p) for the Mersenne prime.
  const std::uint64_t lo = static_cast<std::uint64_t>(prod) & kFieldPrime;
  const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  return add(lo, hi);
}

std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv(std::uint64_t a) { return pow(a, kFieldPrime - 2); }

}  // namespace gf

PrimeMatrix PrimeMatrix::identity(int n) {
  PrimeMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

PrimeMatrix PrimeMatrix::submatrix(const NodeSet& rows,
                                   const NodeSet& cols) const {
  PrimeMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      m(static_cast<int>(r), static_cast<int>(c)) = (*this)(rows[r], cols[c]);
  return m;
}

std::optional<PrimeMatrix> PrimeMatrix::inverse() const {
  const int n = rows_;
  if (n != cols_) return std::nullopt;
  PrimeMatrix a = *this;
  PrimeMatrix inv = identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    const std::uint64_t scale = gf::inv(a(col, col));
    for (int c = 0; c < n; ++c) {
      a(col, c) = gf::mul(a(col, c), scale);
      inv(col, c) = gf::mul(inv(col, c), scale);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const std::uint64_t f = a(r, col);
      for (int c = 0; c < n; ++c) {
        a(r, c) = gf::sub(a(r, c), gf::mul(f, a(col, c)));
        inv(r, c) = gf::sub(inv(r, c), gf::mul(f, inv(col, c)));
      }
    }
  }
  return inv;
}

int PrimeMatrix::rank() const {
  PrimeMatrix a = *this;
  int rank = 0;
  for (int col = 0; col < cols_ && rank < rows_; ++col) {
    int pivot = rank;
    while (pivot < rows_ && a(pivot, col) == 0) ++pivot;
    if (pivot == rows_) continue;
    for (int c = 0; c < cols_; ++c) std::swap(a(pivot, c), a(rank, c));
    const std::uint64_t scale = gf::inv(a(rank, col));
    for (int r = rank + 1; r < rows_; ++r) {
      if (a(r, col) == 0) continue;
      const std::uint64_t f = gf::mul(a(r, col), scale);
      for (int c = col; c < cols_; ++c)
        a(r, c) = gf::sub(a(r, c), gf::mul(f, a(rank, c)));
    }
    ++rank;
  }
  return rank;
}

namespace {

constexpr int kMaxResamples = 16;
constexpr double kMaxConditionNumber = 1e6;

std::mt19937_64 make_rng(std::uint64_t seed, Field field) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(field)};
  return std::mt19937_64(seq);
}

// (I - G)^-1 as the Neumann series, summed by repeated squaring:
// sum_{k < 2^m} G^k = prod_{j < m} (I + G^(2^j)). G is entrywise nonnegative
// here, so no cancellation occurs and structural zeros of T stay exact.
Eigen::MatrixXd neumann_inverse(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd power = g;
  for (int iter = 0; iter < 64; ++iter) {
    if (power.lpNorm<Eigen::Infinity>() == 0.0) break;
    sum += power * sum;
    if (power.cwiseAbs().rowwise().sum().maxCoeff() < 1e-30) break;
    power = power * power;
  }
  return sum;
}

}  // namespace

GenericInstance random_instance(const Network& g, std::uint64_t seed,
                                Field field) {
  const int n = g.size();
  auto rng = make_rng(seed, field);
  GenericInstance inst;
  inst.field = field;

  if (field == Field::Real) {
    std::uniform_real_distribution<double> gain(0.1, 1.0);
    inst.g_real = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges())
      inst.g_real(e.to, e.from) = gain(rng) / static_cast<double>(n);
    inst.t_real = neumann_inverse(inst.g_real);
    const Eigen::MatrixXd i_minus_g =
        Eigen::MatrixXd::Identity(n, n) - inst.g_real;
    if (n > 0) {
      const double cond = i_minus_g.cwiseAbs().rowwise().sum().maxCoeff() *
                          inst.t_real.cwiseAbs().rowwise().sum().maxCoeff();
      if (!(cond < kMaxConditionNumber))
        throw OracleInconsistency("sampled I - G is ill-conditioned");
    }
    return inst;
  }

  std::uniform_int_distribution<std::uint64_t> residue(1, kFieldPrime - 1);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    inst.g_prime = PrimeMatrix(n, n);
    for (const Edge& e : g.edges()) inst.g_prime(e.to, e.from) = residue(rng);
    PrimeMatrix i_minus_g = PrimeMatrix::identity(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        i_minus_g(r, c) = gf::sub(i_minus_g(r, c), inst.g_prime(r, c));
    if (auto t = i_minus_g.inverse()) {
      inst.t_prime = std::move(*t);
      return inst;
    }
  }
  throw OracleInconsistency("I - G singular over GF(p) after resampling");
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const NodeSet& rows,
                          const NodeSet& cols) {
  Eigen::MatrixXd s(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(rows[r], cols[c]);
  return s;
}

int real_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  // Equilibration is a diagonal scaling and does not change the rank; it
  // keeps columns reached only through long paths from looking negligible.
  Eigen::MatrixXd a = m;
  for (int pass = 0; pass < 3; ++pass) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const double s = a.row(r).cwiseAbs().maxCoeff();
      if (s > 0) a.row(r) /= s;
    }
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const double s = a.col(c).cwiseAbs().maxCoeff();
      if (s > 0) a.col(c) /= s;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > kRealRankTolerance * sigma(0)) ++rank;
  return rank;
}

GenericRankOracle::GenericRankOracle(const Network& g, int trials,
                                     std::uint64_t seed)
    : g_(&g) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (int t = 0; t < trials; ++t) {
    real_.push_back(random_instance(g, seed + t, Field::Real));
    prime_.push_back(random_instance(g, seed + t, Field::Prime));
  }
}

FieldRanks GenericRankOracle::ranks(const NodeSet& rows,
                                    const NodeSet& cols) const {
  FieldRanks r;
  const int full = static_cast<int>(std::min(rows.size(), cols.size()));
  for (const auto& inst : real_) {
    if (r.real == full) break;
    r.real = std::max(r.real, real_rank(submatrix(inst.t_real, rows, cols)));
  }
  for (const auto& inst : prime_) {
    if (r.prime == full) break;
    r.prime = std::max(r.prime, inst.t_prime.submatrix(rows, cols).rank());
  }
  return r;
}

int GenericRankOracle::rank(const NodeSet& rows, const NodeSet& cols) const {
  const FieldRanks r = ranks(rows, cols);
  if (r.real != r.prime)
    throw OracleInconsistency(
        "real rank " + std::to_string(r.real) + " != prime-field rank " +
        std::to_string(r.prime) + " for rows " + g_->format_set(rows) +
        ", columns " + g_->format_set(cols));
  return r.real;
}

GenericRankOracle::ColumnVerdicts GenericRankOracle::column_verdicts(
    NodeIndex i) const {
  const NodeSet& out = g_->out_neighbors(i);
  const int d = static_cast<int>(out.size());
  const FieldRanks r = ranks(g_->measured(), out);
  return {r.real == d, r.prime == d};
}

bool GenericRankOracle::column_identifiable(NodeIndex i) const {
  const NodeSet& out = g_->out_neighbors(i);
  return rank(g_->measured(), out) == static_cast<int>(out.size());
}

bool GenericRankOracle::edge_identifiable(NodeIndex i, NodeIndex k) const {
  if (!g_->has_edge(i, k)) throw std::invalid_argument("no such edge");
  const NodeSet& out = g_->out_neighbors(i);
  NodeSet rest;
  for (NodeIndex v : out)
    if (v != k) rest.push_back(v);
  return rank(g_->measured(), out) == rank(g_->measured(), rest) + 1;
}

bool generic_column_identifiable(const Network& g, NodeIndex i, int trials,
                                 std::uint64_t seed) {
  if (g.out_degree(i) == 0) return true;
  return GenericRankOracle(g, trials, seed).column_identifiable(i);
}

bool generic_edge_identifiable(const Network& g, NodeIndex i, NodeIndex k,
                               int trials, std::uint64_t seed) {
  if (!g.has_edge(i, k)) throw std::invalid_argument("no such edge");
  return GenericRankOracle(g, trials, seed).edge_identifiable(i, k);
}

// ---------------------------------------------------------------------------

namespace {

WalkMatrix identity_walks(int n) {
  WalkMatrix m(static_cast<std::size_t>(n),
               std::vector<BigInt>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// A * m with A the adjacency matrix of g.
WalkMatrix extend_by_edge(const Network& g, const WalkMatrix& m) {
  const int n = g.size();
  WalkMatrix out(static_cast<std::size_t>(n),
                 std::vector<BigInt>(static_cast<std::size_t>(n), 0));
  for (const Edge& e : g.edges())
    for (int c = 0; c < n; ++c) out[e.to][c] += m[e.from][c];
  return out;
}

}  // namespace

WalkMatrix walk_counts(const Network& g, int k) {
  if (k < 0) throw std::invalid_argument("walk length must be >= 0");
  WalkMatrix m = identity_walks(g.size());
  for (int step = 0; step < k; ++step) m = extend_by_edge(g, m);
  return m;
}

bool walk_counts_respect_reachability(const Network& g) {
  const int n = g.size();
  std::vector<std::vector<bool>> reach;
  for (NodeIndex j = 0; j < n; ++j) reach.push_back(reachable_from(g, {j}));
  WalkMatrix m = identity_walks(n);
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!reach[j][i] && m[i][j] != 0) return false;
    m = extend_by_edge(g, m);
  }
  return true;
}

bool disjoint_paths_give_permutation(int nodes, const PathCertificate& paths) {
  std::vector<bool> used(static_cast<std::size_t>(nodes), false);
  for (const NodeSet& p : paths.paths) {
    if (p.empty()) throw std::invalid_argument("empty path");
    for (NodeIndex v : p) {
      if (v < 0 || v >= nodes) throw std::invalid_argument("node out of range");
      if (used[v]) throw std::invalid_argument("paths overlap");
      used[v] = true;
    }
  }
  using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  IntMatrix adj = IntMatrix::Zero(nodes, nodes);
  for (const NodeSet& p : paths.paths)
    for (std::size_t k = 1; k < p.size(); ++k) adj(p[k], p[k - 1]) = 1;

  // A is nilpotent, so (I - A)^-1 = I + A + ... + A^(nodes-1).
  IntMatrix inverse = IntMatrix::Identity(nodes, nodes);
  IntMatrix power = IntMatrix::Identity(nodes, nodes);
  for (int k = 1; k < nodes; ++k) {
    power = adj * power;
    inverse += power;
  }
  const auto& ps = paths.paths;
  for (std::size_t t = 0; t < ps.size(); ++t)
    for (std::size_t u = 0; u < ps.size(); ++u)
      if (inverse(ps[t].back(), ps[u].front()) != (t == u ? 1 : 0))
        return false;
  return true;
}

bool partition_rank_bound_holds(const Network& g, const NodeSet& s,
                                const NodeSet& b, const NodeSet& p, int trials,
                                std::uint64_t seed) {
  const int n = g.size();
  std::vector<int> part(static_cast<std::size_t>(n), -1);
  int which = 0;
  for (const NodeSet* set : {&s, &b, &p}) {
    for (NodeIndex v : *set) {
      if (v < 0 || v >= n || part[v] >= 0)
        throw std::invalid_argument("not a partition of the nodes");
      part[v] = which;
    }
    ++which;
  }
  if (std::count(part.begin(), part.end(), -1) > 0)
    throw std::invalid_argument("not a partition of the nodes");
  for (const Edge& e : g.edges())
    if (part[e.from] == 0 && part[e.to] == 2)
      throw std::invalid_argument("edge " + g.format_edge(e) +
                                  " leads from S directly into P");

  const NodeSet rows = normalized([&] {
    NodeSet r = p;
    r.insert(r.end(), b.begin(), b.end());
    return r;
  }());
  const NodeSet cols = normalized([&] {
    NodeSet c = s;
    c.insert(c.end(), b.begin(), b.end());
    return c;
  }());
  const int bound = static_cast<int>(b.size());

  for (int t = 0; t < trials; ++t) {
    const auto real = random_instance(g, seed + t, Field::Real);
    if (real_rank(submatrix(real.t_real, rows, cols)) > bound) return false;
    const auto prime = random_instance(g, seed + t, Field::Prime);
    if (prime.t_prime.submatrix(rows, cols).rank() > bound) return false;

    if (p.empty() || s.empty()) continue;
    const Eigen::MatrixXd lhs = submatrix(real.t_real, p, s);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(lhs.rows(), lhs.cols());
    if (!b.empty()) {
      const Eigen::MatrixXd i_minus_gpp =
          Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p.size()),
                                    static_cast<Eigen::Index>(p.size())) -
          submatrix(real.g_real, p, p);
      rhs = i_minus_gpp.partialPivLu().solve(submatrix(real.g_real, p, b) *
                                             submatrix(real.t_real, b, s));
    }
    const double scale = std::max(lhs.norm(), rhs.norm());
    if ((lhs - rhs).norm() > 1e-9 * scale) return false;
  }
  return true;
}

}  // namespace netident
