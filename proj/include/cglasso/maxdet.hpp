#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/chordal.hpp>
#include <cglasso/cholesky.hpp>
#include <cglasso/dense.hpp>
#include <cglasso/spmat.hpp>

// Maximum-determinant positive definite completion of a matrix with a
// chordal pattern, through both the dual route (Cholesky factors of the
// sparse inverse, computed by a reverse sweep over the elimination tree)
// and the primal route (dense completion filled one row at a time).

namespace cglasso {

  // Dense max-det completion; agrees with the input on its pattern.
  using CompletionMatrix = DenseSymMatrix;

  struct DualStats {
    FlopCounter flops;
    // Largest number of V-block entries alive at the same time.
    std::size_t peak_workspace = 0;
  };

  struct DualOptions {
    // Treat tree positions absent from supp(c) as constraints C_ij = 0
    // instead of rejecting them.
    bool allow_fill = false;
    // Pivots at or below tol * max_i C_ii mean no PD completion exists.
    double completable_tol = 1e-12;
    DualStats* stats = nullptr;
  };

  namespace detail {
    inline double diagonal_scale(SymSparseMatrix const& c) {
      double s = 0.0;
      for (double v : c.diagonal()) { s = std::max(s, std::abs(v)); }
      return s;
    }
  } // namespace detail

  // Factors L, D of the sparse S = L D L^T whose inverse agrees with c on
  // the tree pattern. Columns are processed from d down to 1; V_j holds
  // the completion restricted to I_j x I_j and is handed down to each
  // child i as the I_i x I_i block of [[C_jj, C_{I_j j}^T]; [C_{I_j j}, V_j]]
  // indexed by J_j = {j} u I_j.
  inline CholeskyFactors
  solve_dual(SymSparseMatrix const& c, EliminationTree const& t, DualOptions const& opt = {}) {
    int const d = c.dim();
    if (t.dim() != d) { throw DimensionMismatch("solve_dual: tree and matrix differ in size"); }
    for (auto const& e : c.entries()) {
      if (!t.colset(e.i).contains(e.j)) {
        throw NotNoFill("solve_dual: matrix entry outside the elimination tree pattern");
      }
    }
    if (!opt.allow_fill && t.nnz() != c.pattern().num_edges()) {
      throw NotNoFill("solve_dual: pattern does not factor without fill in this order");
    }

    FlopCounter* fc = opt.stats ? &opt.stats->flops : nullptr;
    double const floor = opt.completable_tol * detail::diagonal_scale(c);

    CholeskyFactors f{t, {}, std::vector<double>(static_cast<std::size_t>(d), 0.0)};
    f.lower.resize(static_cast<std::size_t>(d));
    std::vector<DenseBlock> v(static_cast<std::size_t>(d));
    std::size_t live = 0;
    std::vector<double> cvec;
    std::vector<std::size_t> pos;

    for (int j = d; j >= 1; --j) {
      auto const& cs = t.colset(j);
      std::size_t const n = cs.size();
      double const cjj = c.diagonal()[j - 1];
      cvec.resize(n);
      for (std::size_t k = 0; k < n; ++k) { cvec[k] = c.at(cs[k], j); }

      auto& l = f.lower[j - 1];
      double schur = cjj;
      if (n > 0) {
        DenseBlock g = v[j - 1];
        if (!dense::cholesky_in_place(g, floor, fc)) {
          throw NotCompletable("solve_dual: V block not positive definite at column " +
                               std::to_string(j));
        }
        l = cvec;
        dense::cholesky_solve(g, l, fc);
        for (std::size_t k = 0; k < n; ++k) {
          schur -= cvec[k] * l[k];
          l[k] = -l[k];
        }
        count(fc, 3 * n);
      }
      if (!(schur > floor) || !std::isfinite(schur)) {
        throw NotCompletable("solve_dual: non-positive Schur complement at column " +
                             std::to_string(j));
      }
      f.diag[j - 1] = 1.0 / schur;

      // Hand V_i down to the children of j.
      for (int i : t.children(j)) {
        auto const& ci = t.colset(i);
        pos.resize(ci.size());
        for (std::size_t a = 0; a < ci.size(); ++a) {
          pos[a] = ci[a] == j ? 0 : *cs.position(ci[a]) + 1;
        }
        DenseBlock vi(ci.size(), ci.size());
        for (std::size_t a = 0; a < ci.size(); ++a) {
          for (std::size_t b = 0; b < ci.size(); ++b) {
            std::size_t const pa = pos[a], pb = pos[b];
            double w;
            if (pa == 0 && pb == 0) {
              w = cjj;
            } else if (pa == 0) {
              w = cvec[pb - 1];
            } else if (pb == 0) {
              w = cvec[pa - 1];
            } else {
              w = v[j - 1](pa - 1, pb - 1);
            }
            vi(a, b) = w;
          }
        }
        count(fc, ci.size() * ci.size());
        live += ci.size() * ci.size();
        v[i - 1] = std::move(vi);
      }
      if (opt.stats) { opt.stats->peak_workspace = std::max(opt.stats->peak_workspace, live); }
      live -= n * n;
      v[j - 1] = DenseBlock();
    }
    return f;
  }

  // Dense max-det completion of m, whose natural order must be a perfect
  // elimination ordering of its pattern. Row k is completed against the
  // already completed trailing block:
  //   Mbar(k, C_k) = M(k, B_k) Mbar(B_k, B_k)^-1 Mbar(B_k, C_k)
  // with B_k the higher neighbors of k and C_k the remaining higher labels.
  inline CompletionMatrix
  complete_primal(SymSparseMatrix const& m, double completable_tol = 1e-12) {
    int const d = m.dim();
    no_fill_tree(m.pattern());
    double const floor = completable_tol * detail::diagonal_scale(m);

    DenseBlock x = to_dense(m).to_block();
    if (d > 0 && !(x(d - 1, d - 1) > floor)) {
      throw NotCompletable("complete_primal: non-positive diagonal");
    }
    std::vector<char> in_b(static_cast<std::size_t>(d));
    for (int k = d - 1; k >= 1; --k) {
      auto b = m.pattern().higher_neighbors(k);
      std::size_t const nb = b.size();
      double schur = x(k - 1, k - 1);
      if (nb > 0) {
        DenseBlock g(nb, nb);
        for (std::size_t r = 0; r < nb; ++r) {
          for (std::size_t s = 0; s < nb; ++s) { g(r, s) = x(b[r] - 1, b[s] - 1); }
        }
        if (!dense::cholesky_in_place(g, floor)) {
          throw NotCompletable("complete_primal: trailing block not positive definite at row " +
                               std::to_string(k));
        }
        std::vector<double> y(nb);
        for (std::size_t r = 0; r < nb; ++r) { y[r] = x(b[r] - 1, k - 1); }
        std::vector<double> const mkb = y;
        dense::cholesky_solve(g, y);
        for (std::size_t r = 0; r < nb; ++r) { schur -= mkb[r] * y[r]; }

        std::ranges::fill(in_b, 0);
        for (int u : b) { in_b[u - 1] = 1; }
        for (int col = k + 1; col <= d; ++col) {
          if (in_b[col - 1]) { continue; }
          double s = 0.0;
          for (std::size_t r = 0; r < nb; ++r) { s += y[r] * x(b[r] - 1, col - 1); }
          x(k - 1, col - 1) = s;
          x(col - 1, k - 1) = s;
        }
      }
      if (!(schur > floor)) {
        throw NotCompletable("complete_primal: non-positive Schur complement at row " +
                             std::to_string(k));
      }
    }
    return DenseSymMatrix::from_block(x);
  }

  // Max-det completion of the 3-block matrix
  //   [[M_AA, M_AB, ?], [M_AB^T, M_BB, M_BC], [?, M_BC^T, M_CC]]
  // whose missing corner is M_AB M_BB^-1 M_BC. Blocks in A, B, C order.
  inline DenseBlock block_completion(DenseBlock const& maa, DenseBlock const& mab,
                                     DenseBlock const& mbb, DenseBlock const& mbc,
                                     DenseBlock const& mcc) {
    std::size_t const na = maa.rows(), nb = mbb.rows(), nc = mcc.rows();
    if (maa.cols() != na || mbb.cols() != nb || mcc.cols() != nc || mab.rows() != na ||
        mab.cols() != nb || mbc.rows() != nb || mbc.cols() != nc) {
      throw DimensionMismatch("block_completion: block shapes are inconsistent");
    }
    if (nb == 0) { throw std::invalid_argument("block_completion: B must be nonempty"); }

    DenseBlock g = mbb;
    if (!dense::cholesky_in_place(g, 1e-12 * dense::max_abs_diagonal(mbb))) {
      throw NotCompletable("block_completion: M_BB is not positive definite");
    }
    // X = M_BB^-1 M_BC, column by column.
    DenseBlock xs(nb, nc);
    std::vector<double> col(nb);
    for (std::size_t cc = 0; cc < nc; ++cc) {
      for (std::size_t r = 0; r < nb; ++r) { col[r] = mbc(r, cc); }
      dense::cholesky_solve(g, col);
      for (std::size_t r = 0; r < nb; ++r) { xs(r, cc) = col[r]; }
    }
    auto corner = dense::multiply(mab, xs);

    std::size_t const n = na + nb + nc;
    DenseBlock out(n, n);
    auto put = [&out](DenseBlock const& blk, std::size_t r0, std::size_t c0) {
      for (std::size_t r = 0; r < blk.rows(); ++r) {
        for (std::size_t c = 0; c < blk.cols(); ++c) {
          out(r0 + r, c0 + c) = blk(r, c);
          out(c0 + c, r0 + r) = blk(r, c);
        }
      }
    };
    put(maa, 0, 0);
    put(mbb, na, na);
    put(mcc, na + nb, na + nb);
    put(mab, 0, na);
    put(mbc, na, na + nb);
    put(corner, 0, na + nb);
    return out;
  }

  namespace detail {
    // trace(C S) over the common support.
    inline double trace_product(SymSparseMatrix const& c, SymSparseMatrix const& s) {
      double tr = 0.0;
      for (int i = 1; i <= c.dim(); ++i) { tr += c.diagonal()[i - 1] * s.diagonal()[i - 1]; }
      for (auto const& e : c.entries()) { tr += 2.0 * e.value * s.at(e.i, e.j); }
      return tr;
    }
  } // namespace detail

  // -log det S + trace(C S) + d.
  inline double dual_objective(SymSparseMatrix const& s, SymSparseMatrix const& c) {
    if (s.dim() != c.dim()) { throw DimensionMismatch("dual_objective: size mismatch"); }
    return -log_det(s) + detail::trace_product(c, s) + c.dim();
  }

  inline double dual_objective(CholeskyFactors const& f, SymSparseMatrix const& c) {
    if (f.dim() != c.dim()) { throw DimensionMismatch("dual_objective: size mismatch"); }
    for (double v : f.diag) {
      if (!(v > 0.0)) { throw NotPositiveDefinite("dual_objective: D has a non-positive entry"); }
    }
    return -f.log_det() + detail::trace_product(c, f.assemble()) + c.dim();
  }

  // max |(L D L^T)^-1 - C| over the diagonal and the tree pattern. Dense.
  inline double verify_foc(CholeskyFactors const& f, SymSparseMatrix const& c) {
    if (f.dim() != c.dim()) { throw DimensionMismatch("verify_foc: size mismatch"); }
    auto const inv = dense::spd_inverse(f.to_dense());
    double r = 0.0;
    for (int j = 1; j <= c.dim(); ++j) {
      r = std::max(r, std::abs(inv(j - 1, j - 1) - c.diagonal()[j - 1]));
      for (int i : f.etree.colset(j)) {
        r = std::max(r, std::abs(inv(i - 1, j - 1) - c.at(i, j)));
      }
    }
    return r;
  }

} // namespace cglasso
