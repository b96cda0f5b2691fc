#pragma once

// Shared test helpers: random instance generators and Eigen-based oracles.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <cglasso/cglasso.hpp>

namespace testing_support {

  using namespace cglasso;

  inline Eigen::MatrixXd to_eigen(SymSparseMatrix const& m) {
    int const d = m.dim();
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) { x(i, i) = m.diagonal()[i]; }
    for (auto const& e : m.entries()) {
      x(e.i - 1, e.j - 1) = e.value;
      x(e.j - 1, e.i - 1) = e.value;
    }
    return x;
  }

  inline Eigen::MatrixXd to_eigen(DenseSymMatrix const& m) {
    int const d = m.dim();
    Eigen::MatrixXd x(d, d);
    for (int i = 1; i <= d; ++i) {
      for (int j = 1; j <= d; ++j) { x(i - 1, j - 1) = m.at(i, j); }
    }
    return x;
  }

  inline Eigen::MatrixXd to_eigen(DenseBlock const& b) {
    Eigen::MatrixXd x(b.rows(), b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) { x(i, j) = b(i, j); }
    }
    return x;
  }

  // Sparse matrix holding every nonzero of a symmetric dense matrix.
  inline SymSparseMatrix from_eigen(Eigen::MatrixXd const& x) {
    int const d = static_cast<int>(x.rows());
    std::vector<double> diag(d);
    std::vector<Entry> entries;
    for (int i = 0; i < d; ++i) {
      diag[i] = x(i, i);
      for (int j = i + 1; j < d; ++j) {
        if (x(i, j) != 0.0) { entries.push_back({i + 1, j + 1, x(i, j)}); }
      }
    }
    return SymSparseMatrix(diag, entries);
  }

  // Projection of a dense matrix onto a pattern.
  inline SymSparseMatrix project_eigen(Eigen::MatrixXd const& x, SparsityPattern const& e) {
    std::vector<double> diag(e.dim());
    for (int i = 0; i < e.dim(); ++i) { diag[i] = x(i, i); }
    std::vector<double> vals;
    for (auto const& ed : e.edges()) { vals.push_back(x(ed.i - 1, ed.j - 1)); }
    return SymSparseMatrix(e, diag, vals);
  }

  inline double max_abs(Eigen::MatrixXd const& x) { return x.cwiseAbs().maxCoeff(); }

  // Random chordal pattern in which the natural order is a perfect
  // elimination ordering: each vertex v picks a parent p > v (or none) and
  // a clique I_v = {p} plus a random subset of I_p, |I_v| <= w.
  inline SparsityPattern random_peo_chordal(int d, int w, std::mt19937_64& rng,
                                            double root_prob = 0.05) {
    std::vector<std::vector<int>> cols(d + 1);
    std::vector<Edge> edges;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int v = d - 1; v >= 1; --v) {
      if (w == 0 || u(rng) < root_prob) { continue; }
      std::uniform_int_distribution<int> pick(v + 1, d);
      int const p = pick(rng);
      std::vector<int> cand = cols[p];
      std::shuffle(cand.begin(), cand.end(), rng);
      std::uniform_int_distribution<int> extra(0, std::min<int>(w - 1, static_cast<int>(cand.size())));
      cand.resize(extra(rng));
      cand.push_back(p);
      std::sort(cand.begin(), cand.end());
      cols[v] = cand;
      for (int i : cand) { edges.push_back({v, i}); }
    }
    return SparsityPattern(d, edges);
  }

  inline Permutation random_permutation(int d, std::mt19937_64& rng) {
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    return Permutation::from_order(order);
  }

  // Random chordal pattern with a random labelling.
  inline SparsityPattern random_chordal(int d, int w, std::mt19937_64& rng) {
    return permute(random_peo_chordal(d, w, rng), random_permutation(d, rng));
  }

  // Erdos-Renyi graph.
  inline SparsityPattern random_graph(int d, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int i = 1; i <= d; ++i) {
      for (int j = i + 1; j <= d; ++j) {
        if (coin(rng)) { edges.push_back({i, j}); }
      }
    }
    return SparsityPattern(d, edges);
  }

  // Random S = L D L^T supported on a pattern whose natural order is a
  // perfect elimination ordering; the projection of S^-1 onto the
  // pattern then has S as its exact max-det dual solution.
  struct KnownDual {
    SymSparseMatrix c;
    Eigen::MatrixXd s;
  };

  inline KnownDual known_dual(SparsityPattern const& e, std::mt19937_64& rng) {
    int const d = e.dim();
    std::uniform_real_distribution<double> off(-0.6, 0.6);
    std::uniform_real_distribution<double> piv(0.5, 2.0);
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd dd(d);
    for (int j = 1; j <= d; ++j) {
      dd(j - 1) = piv(rng);
      for (int i : e.higher_neighbors(j)) { l(i - 1, j - 1) = off(rng); }
    }
    Eigen::MatrixXd s = l * dd.asDiagonal() * l.transpose();
    Eigen::MatrixXd sinv = s.inverse();
    return {project_eigen(sinv, e), s};
  }

  // Unit-diagonal matrix on a pattern with off-diagonals in [-a, a].
  inline SymSparseMatrix random_on_pattern(SparsityPattern const& e, double a, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> off(-a, a);
    std::vector<double> vals;
    for (std::size_t k = 0; k < e.num_edges(); ++k) {
      double v = 0.0;
      while (v == 0.0) { v = off(rng); }
      vals.push_back(v);
    }
    return SymSparseMatrix(e, std::vector<double>(e.dim(), 1.0), vals);
  }

  // The 4x4 path matrix with off-diagonals 0.3, -0.4, 0.2.
  inline SymSparseMatrix example_path_matrix() {
    return SymSparseMatrix(std::vector<double>{1, 1, 1, 1}, {{1, 2, 0.3}, {2, 3, -0.4}, {3, 4, 0.2}});
  }

} // namespace testing_support
