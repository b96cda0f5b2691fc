#pragma once

//
// ... Standard header files
//
#include <cmath>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/chordal.hpp>
#include <cglasso/dense.hpp>
#include <cglasso/spmat.hpp>

namespace cglasso {

  // S = L D L^T with unit lower triangular L supported on the tree's fill
  // pattern. lower[j-1][k] is L(I_j[k], j); the unit diagonal is implicit.
  struct CholeskyFactors {
    EliminationTree etree;
    std::vector<std::vector<double>> lower;
    std::vector<double> diag;

    int dim() const { return etree.dim(); }

    double log_det() const {
      double s = 0.0;
      for (double v : diag) { s += std::log(v); }
      return s;
    }

    // Strictly lower entries of L as (row, col, value).
    std::vector<Entry> lower_entries() const {
      std::vector<Entry> out;
      for (int j = 1; j <= dim(); ++j) {
        auto const& cs = etree.colset(j);
        for (std::size_t k = 0; k < cs.size(); ++k) { out.push_back({cs[k], j, lower[j - 1][k]}); }
      }
      return out;
    }

    // Values of L D L^T on the fill pattern. Column j contributes
    // D_jj (e_j + l_j)(e_j + l_j)^T; {j} u I_j is a clique of the fill
    // pattern, so every product lands on a stored position.
    SymSparseMatrix assemble() const {
      int const d = dim();
      auto const pattern = etree.fill_pattern();
      std::vector<double> sdiag(static_cast<std::size_t>(d), 0.0);
      std::vector<double> vals(pattern.num_edges(), 0.0);
      for (int j = 1; j <= d; ++j) {
        auto const& cs = etree.colset(j);
        auto const& l = lower[j - 1];
        double const dj = diag[j - 1];
        sdiag[j - 1] += dj;
        for (std::size_t a = 0; a < cs.size(); ++a) {
          vals[*pattern.edge_id(cs[a], j)] += dj * l[a];
          sdiag[cs[a] - 1] += dj * l[a] * l[a];
          for (std::size_t b = 0; b < a; ++b) {
            vals[*pattern.edge_id(cs[a], cs[b])] += dj * l[a] * l[b];
          }
        }
      }
      return SymSparseMatrix(pattern, std::move(sdiag), vals);
    }

    // Dense L D L^T, for diagnostics at small d.
    DenseBlock to_dense() const {
      int const d = dim();
      DenseBlock s(d, d);
      for (int j = 1; j <= d; ++j) {
        auto const& cs = etree.colset(j);
        std::vector<std::pair<int, double>> col{{j, 1.0}};
        for (std::size_t k = 0; k < cs.size(); ++k) { col.emplace_back(cs[k], lower[j - 1][k]); }
        for (auto [r, lr] : col) {
          for (auto [c, lc] : col) { s(r - 1, c - 1) += diag[j - 1] * lr * lc; }
        }
      }
      return s;
    }

    friend bool operator==(CholeskyFactors const& a, CholeskyFactors const& b) {
      return a.lower == b.lower && a.diag == b.diag;
    }
  };

  // Numeric LDL^T of m on the fill pattern of t (m must already be in the
  // tree's order and supported within its fill pattern). Right-looking:
  // eliminating column j updates the clique I_j x I_j. Throws
  // NotPositiveDefinite when a pivot is not above pivot_tol times the
  // largest diagonal magnitude.
  inline CholeskyFactors
  ldlt_factor(SymSparseMatrix const& m, EliminationTree const& t, double pivot_tol = 1e-12) {
    int const d = m.dim();
    if (t.dim() != d) { throw DimensionMismatch("ldlt_factor: tree and matrix differ in size"); }
    std::vector<std::vector<double>> work(static_cast<std::size_t>(d));
    std::vector<double> diag = m.diagonal();
    double scale = 0.0;
    for (double v : diag) { scale = std::max(scale, std::abs(v)); }
    for (int j = 1; j <= d; ++j) {
      auto const& cs = t.colset(j);
      work[j - 1].assign(cs.size(), 0.0);
      for (std::size_t k = 0; k < cs.size(); ++k) { work[j - 1][k] = m.at(cs[k], j); }
    }
    for (auto const& e : m.entries()) {
      if (!t.colset(e.i).contains(e.j)) {
        throw NotNoFill("ldlt_factor: matrix entry outside the fill pattern");
      }
    }

    CholeskyFactors f{t, {}, std::vector<double>(static_cast<std::size_t>(d), 0.0)};
    f.lower.resize(static_cast<std::size_t>(d));
    for (int j = 1; j <= d; ++j) {
      double const dj = diag[j - 1];
      if (!(dj > pivot_tol * scale) || !std::isfinite(dj)) {
        throw NotPositiveDefinite("ldlt_factor: non-positive pivot at column " + std::to_string(j));
      }
      auto const& cs = t.colset(j);
      auto& l = work[j - 1];
      for (auto& v : l) { v /= dj; }
      for (std::size_t a = 0; a < cs.size(); ++a) {
        int const r = cs[a];
        diag[r - 1] -= l[a] * l[a] * dj;
        for (std::size_t b = 0; b < a; ++b) {
          int const s = cs[b];
          auto pos = t.colset(s).position(r);
          work[s - 1][*pos] -= l[a] * l[b] * dj;
        }
      }
      f.diag[j - 1] = dj;
      f.lower[j - 1] = std::move(l);
    }
    return f;
  }

  // log det of a symmetric positive definite sparse matrix via a chordal
  // embedding of its pattern.
  inline double log_det(SymSparseMatrix const& m) {
    auto q = mcs_order(m.pattern());
    auto t = symbolic_factor(m.pattern(), q);
    return ldlt_factor(permute(m, q), t, 0.0).log_det();
  }

  inline bool is_positive_definite(SymSparseMatrix const& m, double pivot_tol = 1e-12) {
    for (double v : m.diagonal()) {
      if (!std::isfinite(v)) { throw NonFinite("is_positive_definite: non-finite entry"); }
    }
    for (double v : m.edge_values()) {
      if (!std::isfinite(v)) { throw NonFinite("is_positive_definite: non-finite entry"); }
    }
    auto q = mcs_order(m.pattern());
    auto t = symbolic_factor(m.pattern(), q);
    try {
      ldlt_factor(permute(m, q), t, pivot_tol);
      return true;
    } catch (NotPositiveDefinite const&) {
      return false;
    }
  }

} // namespace cglasso
