#include <limits>

#include "doctest.h"
#include "netident/identifiability.hpp"
#include "netident/oracle.hpp"
#include "support.hpp"

using namespace netident;
using namespace testing;

TEST_CASE("prime field arithmetic") {
  Rng rng(41);
  std::uniform_int_distribution<std::uint64_t> dist(1, kFieldPrime - 1);
  for (int t = 0; t < 1000; ++t) {
    std::uint64_t a = dist(rng), b = dist(rng);
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    CHECK(gf::mul(a, b) == static_cast<std::uint64_t>(prod % kFieldPrime));
    CHECK(gf::add(a, b) == (a + b) % kFieldPrime);
    CHECK(gf::add(gf::sub(a, b), b) == a);
    CHECK(gf::mul(a, gf::inv(a)) == 1);
  }
  CHECK(gf::pow(3, 0) == 1);
  CHECK(gf::pow(2, 61) == 1);  // 2^61 = p + 1
  CHECK(gf::sub(0, 1) == kFieldPrime - 1);
}

TEST_CASE("prime matrices") {
  PrimeMatrix m(3, 3);
  m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
  m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = 6;
  m(2, 0) = 0; m(2, 1) = 1; m(2, 2) = 5;
  CHECK(m.rank() == 2);
  CHECK_FALSE(m.inverse());
  CHECK(PrimeMatrix::identity(4).rank() == 4);
  CHECK(PrimeMatrix(0, 3).rank() == 0);
  m(1, 2) = 7;
  auto inv = m.inverse();
  REQUIRE(inv);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      std::uint64_t s = 0;
      for (int k = 0; k < 3; ++k) s = gf::add(s, gf::mul(m(r, k), (*inv)(k, c)));
      CHECK(s == (r == c ? 1u : 0u));
    }
  PrimeMatrix sub = m.submatrix({0, 2}, {1});
  CHECK(sub.rows() == 2);
  CHECK(sub(1, 0) == 1);
}

TEST_CASE("real rank") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 4;
  CHECK(real_rank(a) == 1);
  CHECK(real_rank(Eigen::MatrixXd::Identity(3, 3)) == 3);
  CHECK(real_rank(Eigen::MatrixXd::Zero(2, 3)) == 0);
  CHECK(real_rank(Eigen::MatrixXd(0, 2)) == 0);
  Eigen::MatrixXd scaled(2, 2);
  scaled << 1e-8, 0, 0, 1e4;
  CHECK(real_rank(scaled) == 2);
}

TEST_CASE("empty graph instance is the identity") {
  Network g({"a", "b", "c"}, {}, {});
  GenericInstance r = random_instance(g, 1, Field::Real);
  CHECK(r.g_real.isZero());
  CHECK(r.t_real.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  GenericInstance p = random_instance(g, 1, Field::Prime);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(p.g_prime(i, j) == 0);
      CHECK(p.t_prime(i, j) == (i == j ? 1u : 0u));
    }
}

TEST_CASE("fork instance has the symbolic closed loop") {
  Network g = fork({2, 3});
  GenericInstance r = random_instance(g, 7, Field::Real);
  const auto& G = r.g_real;
  const auto& T = r.t_real;
  // G(i, j) is the edge j -> i.
  CHECK(G(1, 0) != 0.0);
  CHECK(G(2, 0) != 0.0);
  CHECK(G(1, 2) != 0.0);
  CHECK(G(0, 1) == 0.0);
  CHECK(T(1, 0) == doctest::Approx(G(1, 0) + G(1, 2) * G(2, 0)).epsilon(1e-12));
  CHECK(T(2, 0) == doctest::Approx(G(2, 0)).epsilon(1e-12));
  CHECK(T(1, 2) == doctest::Approx(G(1, 2)).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) CHECK(T(i, i) == doctest::Approx(1.0));
  CHECK(T(0, 1) == 0.0);
  CHECK(T(0, 2) == 0.0);
  CHECK(T(2, 1) == 0.0);
}

TEST_CASE("instances follow the topology and invert I - G") {
  Rng rng(42);
  for (int t = 0; t < 60; ++t) {
    int n = uniform_int(rng, 1, 8);
    Network g = random_digraph(rng, n, uniform_real(rng, 0.1, 0.6));
    GenericInstance r = random_instance(g, t, Field::Real);
    GenericInstance p = random_instance(g, t, Field::Prime);
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    CHECK(((eye - r.g_real) * r.t_real - eye).cwiseAbs().maxCoeff() < 1e-12);
    for (NodeIndex i = 0; i < n; ++i)
      for (NodeIndex j = 0; j < n; ++j) {
        bool edge = g.has_edge(j, i);
        CHECK((r.g_real(i, j) != 0.0) == edge);
        CHECK((p.g_prime(i, j) != 0) == edge);
        if (edge) {
          CHECK(r.g_real(i, j) >= 0.1 / n);
          CHECK(r.g_real(i, j) <= 1.0 / n);
        }
        // Closed-loop support is reachability.
        CHECK((r.t_real(i, j) != 0.0) == can_reach(g, j, i));
        CHECK((p.t_prime(i, j) != 0) == can_reach(g, j, i));
        std::uint64_t s = 0;
        for (NodeIndex k = 0; k < n; ++k) {
          std::uint64_t a = (i == k ? 1 : 0);
          s = gf::add(s, gf::mul(gf::sub(a, p.g_prime(i, k)), p.t_prime(k, j)));
        }
        CHECK(s == (i == j ? 1u : 0u));
      }
  }
}

TEST_CASE("instances are deterministic per seed") {
  Network g = dense3({});
  CHECK(random_instance(g, 5, Field::Real).g_real ==
        random_instance(g, 5, Field::Real).g_real);
  CHECK(random_instance(g, 5, Field::Real).g_real !=
        random_instance(g, 6, Field::Real).g_real);
  CHECK(random_instance(g, 5, Field::Prime).g_prime(0, 1) ==
        random_instance(g, 5, Field::Prime).g_prime(0, 1));
}

TEST_CASE("column oracle examples") {
  CHECK(generic_column_identifiable(fork({2, 3}), 0, 8, 42));
  CHECK_FALSE(generic_column_identifiable(fork({2}), 0, 8, 42));
  CHECK(generic_column_identifiable(fork({2}), 1, 8, 42));
  CHECK(generic_column_identifiable(loop3({1}), 0, 8, 42));
}

TEST_CASE("edge oracle examples") {
  Network g = fork({2});
  CHECK(generic_edge_identifiable(g, 2, 1, 8, 42));
  CHECK_FALSE(generic_edge_identifiable(g, 0, 1, 8, 42));
  CHECK_FALSE(generic_edge_identifiable(g, 0, 2, 8, 42));
  CHECK_THROWS_AS(generic_edge_identifiable(g, 1, 0, 8, 42), std::invalid_argument);
}

TEST_CASE("oracle agrees with the column path test and bounds the edge tests") {
  Rng rng(43);
  int edges_checked = 0;
  for (int t = 0; t < 200; ++t) {
    int n = uniform_int(rng, 1, 8);
    Network g = random_digraph(rng, n, uniform_real(rng, 0.1, 0.6),
                               random_subset(rng, n, 0.5));
    GenericRankOracle oracle(g, 8, 1000 + t);
    for (NodeIndex i = 0; i < n; ++i) {
      auto v = oracle.column_verdicts(i);
      bool paths = check_node(g, i).ok();
      CHECK(v.real == paths);
      CHECK(v.prime == paths);
      for (NodeIndex k : g.out_neighbors(i)) {
        ++edges_checked;
        bool generic = oracle.edge_identifiable(i, k);
        if (paths) CHECK(generic);
        if (check_edge(g, i, k).status == EdgeStatus::Identifiable)
          CHECK(generic);
      }
    }
  }
  CHECK(edges_checked > 500);
}

TEST_CASE("real and prime ranks agree on arbitrary submatrices") {
  Rng rng(44);
  for (int t = 0; t < 100; ++t) {
    int n = uniform_int(rng, 1, 8);
    Network g = random_digraph(rng, n, uniform_real(rng, 0.1, 0.6));
    GenericRankOracle oracle(g, 4, t);
    for (int q = 0; q < 10; ++q) {
      NodeSet rows = random_subset(rng, n, 0.5);
      NodeSet cols = random_subset(rng, n, 0.5);
      FieldRanks r = oracle.ranks(rows, cols);
      CHECK(r.real == r.prime);
      // Generic rank of T[R, C] is the max number of disjoint paths C -> R.
      int paths = rows.empty() || cols.empty()
                      ? 0
                      : brute_max_disjoint(g, cols, rows);
      CHECK(r.real == paths);
    }
  }
}

TEST_CASE("walk counts") {
  Network c = chain(3, {});
  WalkMatrix a2 = walk_counts(c, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a2[i][j] == (i == 2 && j == 0 ? 1 : 0));
  Network f = fork({});
  CHECK(walk_counts(f, 2)[1][0] == 1);
  WalkMatrix a0 = walk_counts(f, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a0[i][j] == (i == j ? 1 : 0));
  // Exceeds 64 bits: complete graph on 30 nodes, length 16.
  Rng rng(45);
  Network dense = random_digraph(rng, 30, 1.0);
  CHECK(walk_counts(dense, 16)[0][1] > BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("walk counts against enumeration") {
  Rng rng(46);
  for (int t = 0; t < 40; ++t) {
    int n = uniform_int(rng, 1, 6);
    Network g = random_digraph(rng, n, uniform_real(rng, 0.1, 0.5));
    for (int k = 0; k <= 6; ++k) {
      WalkMatrix a = walk_counts(g, k);
      for (NodeIndex i = 0; i < n; ++i)
        for (NodeIndex j = 0; j < n; ++j)
          CHECK(a[i][j] == BigInt(brute_walks(g, j, i, k)));
    }
    CHECK(walk_counts_respect_reachability(g));
  }
}

TEST_CASE("disjoint path permutation") {
  Network fan = fanout({});
  auto idx = [&](const char* l) { return fan.index_of(l); };
  CHECK(disjoint_paths_give_permutation(fan.size(), {{{idx("1"), idx("5"), idx("7")}}}));
  CHECK(disjoint_paths_give_permutation(
      fan.size(), {{{idx("1"), idx("5"), idx("7")},
                    {idx("2"), idx("4"), idx("8")},
                    {idx("3"), idx("6"), idx("9")}}}));
  CHECK(disjoint_paths_give_permutation(4, {{{0, 1}, {2, 3}}}));
  CHECK(disjoint_paths_give_permutation(3, {{{0, 1, 2}}}));
  CHECK_THROWS_AS(disjoint_paths_give_permutation(3, {{{0, 1}, {1, 2}}}),
                  std::invalid_argument);

  // Unit-weight path 1 -> 2 -> 3: entry (3, 1) of (I - A)^-1 is one.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(1, 0) = 1;
  a(2, 1) = 1;
  Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(3, 3) - a).inverse();
  CHECK(inv(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("disjoint path permutation on certificates") {
  Rng rng(47);
  for (int t = 0; t < 100; ++t) {
    int n = uniform_int(rng, 2, 9);
    Network g = random_digraph(rng, n, 0.3);
    DisjointPaths d = max_disjoint_paths(g, random_nonempty_subset(rng, n),
                                         random_nonempty_subset(rng, n));
    CHECK(disjoint_paths_give_permutation(n, d.certificate));
  }
}

TEST_CASE("partition rank bound") {
  // No edge out of S at all and an empty cut: T[P, S] vanishes.
  Network g = Network::from_labels({"s", "p", "q"}, {{"p", "q"}, {"q", "p"}}, {});
  CHECK(partition_rank_bound_holds(g, {0}, {}, {1, 2}, 8, 1));
  CHECK(partition_rank_bound_holds(fork({}), {0}, {1, 2}, {}, 8, 1));
  CHECK_THROWS_AS(partition_rank_bound_holds(fork({}), {0}, {}, {1, 2}, 8, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(partition_rank_bound_holds(fork({}), {0}, {1}, {1, 2}, 8, 1),
                  std::invalid_argument);

  Rng rng(48);
  for (int t = 0; t < 50; ++t) {
    CutInstance c = random_cut_instance(rng, 8, 1, 0.4);
    CHECK(partition_rank_bound_holds(c.g, c.s, c.b, c.p, 1, 500 + t));
  }
}
