#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace cglasso;
using namespace testing_support;

TEST(IndexSet, SortsAndDeduplicates) {
  IndexSet s({5, 2, 5, 3});
  EXPECT_EQ(s.labels(), (std::vector<int>{2, 3, 5}));
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(4));
  EXPECT_EQ(s.position(5), 2u);
  EXPECT_FALSE(s.position(4).has_value());
  EXPECT_EQ(IndexSet::range(2, 4).labels(), (std::vector<int>{2, 3, 4}));
}

TEST(Permutation, RoundTripsAndValidates) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto q = random_permutation(9, rng);
    auto qi = q.inverse();
    for (int v = 1; v <= 9; ++v) {
      EXPECT_EQ(qi(q(v)), v);
      EXPECT_EQ(q.inverse(q(v)), v);
    }
  }
  EXPECT_THROW(Permutation(std::vector<int>{1, 1, 3}), std::invalid_argument);
  EXPECT_THROW(Permutation(std::vector<int>{1, 4, 2}), std::invalid_argument);
  EXPECT_TRUE(Permutation::identity(4).is_identity());
}

TEST(SparsityPattern, DropsSelfLoopsAndDuplicates) {
  SparsityPattern e(4, {{1, 2}, {2, 1}, {3, 3}, {3, 4}});
  EXPECT_EQ(e.num_edges(), 2u);
  EXPECT_TRUE(e.has_edge(2, 1));
  EXPECT_FALSE(e.has_edge(1, 3));
  EXPECT_EQ(e.degree(2), 1u);
  EXPECT_THROW(SparsityPattern(3, {{1, 4}}), std::out_of_range);
}

TEST(SymSparseMatrix, StoresAndLooksUp) {
  auto m = example_path_matrix();
  EXPECT_EQ(m.dim(), 4);
  EXPECT_DOUBLE_EQ(m.at(2, 1), 0.3);
  EXPECT_DOUBLE_EQ(m.at(3, 2), -0.4);
  EXPECT_DOUBLE_EQ(m.at(1, 4), 0.0);
  EXPECT_DOUBLE_EQ(m.at(4, 4), 1.0);
  EXPECT_DOUBLE_EQ(m.max_offdiag_abs(), 0.4);
  EXPECT_THROW(SymSparseMatrix(std::vector<double>{1, 1}, {{1, 2, 0.1}, {2, 1, 0.2}}),
               std::invalid_argument);
}

TEST(SymSparseMatrix, DenseRoundTrip) {
  std::mt19937_64 rng(2);
  auto e = random_graph(12, 0.3, rng);
  auto m = random_on_pattern(e, 0.5, rng);
  EXPECT_EQ(to_sparse(to_dense(m)), m);
  EXPECT_EQ(project(to_dense(m), e), m);
}

// Reversing the path moves each edge value to the mirrored position.
TEST(Permute, ReversedPathMatchesDenseOracle) {
  auto m = example_path_matrix();
  auto q = Permutation::from_order(std::vector<int>{4, 3, 2, 1});
  auto p = permute(m, q);
  EXPECT_DOUBLE_EQ(p.at(1, 2), 0.2);
  EXPECT_DOUBLE_EQ(p.at(2, 3), -0.4);
  EXPECT_DOUBLE_EQ(p.at(3, 4), 0.3);

  Eigen::MatrixXd qm = Eigen::MatrixXd::Zero(4, 4);
  for (int v = 1; v <= 4; ++v) { qm(q(v) - 1, v - 1) = 1.0; }
  Eigen::MatrixXd expect = qm * to_eigen(m) * qm.transpose();
  EXPECT_EQ(max_abs(to_eigen(p) - expect), 0.0);
}

TEST(Permute, RandomMatchesDenseOracleAndInverts) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto e = random_graph(10, 0.35, rng);
    auto m = random_on_pattern(e, 0.4, rng);
    auto q = random_permutation(10, rng);
    Eigen::MatrixXd qm = Eigen::MatrixXd::Zero(10, 10);
    for (int v = 1; v <= 10; ++v) { qm(q(v) - 1, v - 1) = 1.0; }
    EXPECT_EQ(max_abs(to_eigen(permute(m, q)) - qm * to_eigen(m) * qm.transpose()), 0.0);
    EXPECT_EQ(permute(permute(m, q), q.inverse()), m);
    EXPECT_EQ(to_eigen(permute(to_dense(m), q)), to_eigen(permute(m, q)));
    EXPECT_EQ(permute(e, q), permute(m, q).pattern());
  }
}

TEST(Submatrix, ExtractsRowsAndColumns) {
  auto m = example_path_matrix();
  auto b = submatrix(m, IndexSet({2, 3}), IndexSet({1, 2, 4}));
  ASSERT_EQ(b.rows(), 2u);
  ASSERT_EQ(b.cols(), 3u);
  EXPECT_DOUBLE_EQ(b(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(b(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(b(1, 1), -0.4);
  EXPECT_DOUBLE_EQ(b(1, 2), 0.2);
  EXPECT_DOUBLE_EQ(b(0, 2), 0.0);
}

TEST(PrincipalSubmatrix, RelabelsMembers) {
  auto m = example_path_matrix();
  auto s = principal_submatrix(m, IndexSet({2, 3, 4}));
  EXPECT_EQ(s.dim(), 3);
  EXPECT_DOUBLE_EQ(s.at(1, 2), -0.4);
  EXPECT_DOUBLE_EQ(s.at(2, 3), 0.2);
  EXPECT_EQ(s.pattern().num_edges(), 2u);
}

TEST(PositiveDefinite, AgreesWithEigenvalueSigns) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int agreed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd a(10, 10);
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j <= i; ++j) { a(i, j) = a(j, i) = u(rng); }
    }
    a += Eigen::MatrixXd::Identity(10, 10) * (0.5 + 2.5 * (u(rng) + 1.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    double const lmin = es.eigenvalues().minCoeff();
    if (std::abs(lmin) < 1e-6) { continue; }
    auto m = from_eigen(a);
    EXPECT_EQ(is_positive_definite(to_dense(m)), lmin > 0) << "trial " << trial;
    EXPECT_EQ(is_positive_definite(m), lmin > 0) << "trial " << trial;
    ++agreed;
  }
  EXPECT_GT(agreed, 150);
}

TEST(PositiveDefinite, RejectsNonFinite) {
  SymSparseMatrix m(std::vector<double>{1.0, std::nan("")});
  EXPECT_THROW(is_positive_definite(to_dense(m)), NonFinite);
  EXPECT_THROW(is_positive_definite(m), NonFinite);
}
