#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/dense.hpp>
#include <cglasso/glasso.hpp>
#include <cglasso/spmat.hpp>

// Slow dense oracles for tests and optimality-gap reports. None of these
// use the chordal machinery they are meant to check.

namespace cglasso::reference {

  struct OracleResult {
    DenseSymMatrix solution;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    // Max-norm of the last gradient-mapping step (S - S+) / t.
    double final_step_norm = 0.0;
    // Objective before the first step and after every step.
    std::vector<double> objective_history;
  };

  namespace detail {

    // -log det S + trace(Sigma S); nullopt when S is not PD.
    inline std::optional<double> smooth_part(DenseBlock const& s, DenseBlock const& sigma) {
      DenseBlock g = s;
      if (!dense::cholesky_in_place(g, 0.0)) { return std::nullopt; }
      double ld = 0.0;
      for (std::size_t i = 0; i < g.rows(); ++i) { ld += 2.0 * std::log(g(i, i)); }
      double tr = 0.0;
      for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j) { tr += sigma(i, j) * s(i, j); }
      }
      return -ld + tr;
    }

    inline double offdiag_l1(DenseBlock const& s) {
      double t = 0.0;
      for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j) {
          if (i != j) { t += std::abs(s(i, j)); }
        }
      }
      return t;
    }

    inline double soft(double x, double t) {
      return x > t ? x - t : (x < -t ? x + t : 0.0);
    }

  } // namespace detail

  // Proximal gradient on -log det S + trace(Sigma S) + lambda ||S||_*.
  // The prox soft-thresholds off-diagonals only. The step starts from a
  // Barzilai-Borwein estimate and is halved until the iterate is PD and
  // the quadratic upper model holds, so the objective never increases.
  // Stops when the gradient-mapping step drops to tol.
  inline OracleResult dense_glasso(DenseSymMatrix const& sigma_mat, double lambda,
                                   double tol = 1e-10, int max_iter = 20000) {
    int const d = sigma_mat.dim();
    if (d > 200) { throw TooLarge("dense_glasso: d > 200"); }
    if (!(lambda >= 0.0)) { throw std::invalid_argument("dense_glasso: lambda must be >= 0"); }
    auto const n = static_cast<std::size_t>(d);
    DenseBlock const sigma = sigma_mat.to_block();

    DenseBlock s(n, n);
    for (std::size_t i = 0; i < n; ++i) { s(i, i) = 1.0 / (sigma(i, i) + lambda); }
    double f = *detail::smooth_part(s, sigma);
    DenseBlock w = dense::spd_inverse(s);

    OracleResult r;
    r.objective_history.push_back(f + lambda * detail::offdiag_l1(s));
    double t = 1.0;
    DenseBlock next(n, n);
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
      // grad = Sigma - S^-1
      double f_next = 0.0;
      double step_norm = 0.0;
      double t_try = t;
      for (int halvings = 0;; ++halvings) {
        double lin = 0.0, quad = 0.0;
        step_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            double const g = sigma(i, j) - w(i, j);
            double const z = s(i, j) - t_try * g;
            next(i, j) = i == j ? z : detail::soft(z, t_try * lambda);
            double const diff = next(i, j) - s(i, j);
            lin += g * diff;
            quad += diff * diff;
            step_norm = std::max(step_norm, std::abs(diff));
          }
        }
        auto fn = detail::smooth_part(next, sigma);
        if (fn && *fn <= f + lin + quad / (2.0 * t_try) + 1e-15 * std::abs(f)) {
          f_next = *fn;
          break;
        }
        t_try *= 0.5;
        if (halvings > 200) { throw NotConverged("dense_glasso: line search failed"); }
      }
      r.final_step_norm = step_norm / t_try;
      DenseBlock w_next = dense::spd_inverse(next);

      // Barzilai-Borwein step for the next iteration.
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double const ds = next(i, j) - s(i, j);
          double const dy = w(i, j) - w_next(i, j);
          ss += ds * ds;
          sy += ds * dy;
        }
      }
      t = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e6) : t_try;

      s = next;
      w = std::move(w_next);
      f = f_next;
      r.objective_history.push_back(f + lambda * detail::offdiag_l1(s));
      if (r.final_step_norm <= tol) {
        r.converged = true;
        ++r.iterations;
        break;
      }
    }
    r.solution = DenseSymMatrix::from_block(s);
    r.objective = f + lambda * detail::offdiag_l1(s);
    return r;
  }

  // Max-det completion by cyclic coordinate ascent over the free entries.
  // The exact 1-D maximizer of log det(X + delta (e_i e_j^T + e_j e_i^T))
  // is delta = W_ij / (W_ii W_jj - W_ij^2) with W = X^-1, applied with a
  // rank-2 update of W. Converges when max |W_ij| over free entries <= tol.
  // The zero-filled start must be PD.
  inline DenseSymMatrix dense_maxdet(SymSparseMatrix const& c, double tol = 1e-12,
                                     int max_sweeps = 100000) {
    int const d = c.dim();
    if (d > 100) { throw TooLarge("dense_maxdet: d > 100"); }
    auto const n = static_cast<std::size_t>(d);
    DenseBlock x = to_dense(c).to_block();
    DenseBlock w(n, n);
    try {
      w = dense::spd_inverse(x);
    } catch (NotPositiveDefinite const&) {
      throw NotCompletable("dense_maxdet: zero-filled start is not positive definite");
    }
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (int i = 1; i <= d; ++i) {
      for (int j = i + 1; j <= d; ++j) {
        if (!c.pattern().has_edge(i, j)) { free.emplace_back(i - 1, j - 1); }
      }
    }
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double worst = 0.0;
      for (auto [i, j] : free) { worst = std::max(worst, std::abs(w(i, j))); }
      if (worst <= tol) { return DenseSymMatrix::from_block(x); }

      for (auto [i, j] : free) {
        double const a = w(i, i), b = w(j, j), wij = w(i, j);
        double const den = a * b - wij * wij;
        if (!(den > 0.0)) { throw NotCompletable("dense_maxdet: lost positive definiteness"); }
        double const delta = wij / den;
        if (delta == 0.0) { continue; }
        x(i, j) += delta;
        x(j, i) += delta;
        // Woodbury with U = [e_i e_j], C = [[0, delta], [delta, 0]]:
        // W -= W U K^-1 U^T W, K = C^-1 + U^T W U.
        double const k11 = a, k12 = 1.0 / delta + wij, k22 = b;
        double const kdet = k11 * k22 - k12 * k12;
        double const i11 = k22 / kdet, i12 = -k12 / kdet, i22 = k11 / kdet;
        std::vector<double> ci(n), cj(n);
        for (std::size_t r = 0; r < n; ++r) {
          ci[r] = w(r, i);
          cj[r] = w(r, j);
        }
        for (std::size_t r = 0; r < n; ++r) {
          double const pr = ci[r] * i11 + cj[r] * i12;
          double const qr = ci[r] * i12 + cj[r] * i22;
          for (std::size_t s = 0; s < n; ++s) { w(r, s) -= pr * ci[s] + qr * cj[s]; }
        }
      }
      // Refresh to keep rounding from accumulating.
      try {
        w = dense::spd_inverse(x);
      } catch (NotPositiveDefinite const&) {
        throw NotCompletable("dense_maxdet: iterate lost positive definiteness");
      }
    }
    throw NotConverged("dense_maxdet: no convergence within the sweep limit");
  }

  // Ground-truth chordality by enumerating every vertex subset of size >= 4
  // and testing whether it induces a cycle.
  inline bool brute_chordality(SparsityPattern const& e) {
    int const d = e.dim();
    if (d > 10) { throw TooLarge("brute_chordality: d > 10"); }
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(d), 0);
    for (auto const& ed : e.edges()) {
      adj[ed.i - 1] |= 1u << (ed.j - 1);
      adj[ed.j - 1] |= 1u << (ed.i - 1);
    }
    for (std::uint32_t set = 0; set < (1u << d); ++set) {
      if (std::popcount(set) < 4) { continue; }
      bool all_two = true;
      int first = -1;
      for (int v = 0; v < d && all_two; ++v) {
        if (!(set >> v & 1u)) { continue; }
        if (first < 0) { first = v; }
        all_two = std::popcount(adj[v] & set) == 2;
      }
      if (!all_two) { continue; }
      // 2-regular: it is a single induced cycle iff connected.
      std::uint32_t reach = 1u << first, frontier = reach;
      while (frontier) {
        std::uint32_t nxt = 0;
        for (int v = 0; v < d; ++v) {
          if (frontier >> v & 1u) { nxt |= adj[v] & set; }
        }
        frontier = nxt & ~reach;
        reach |= nxt;
      }
      if (reach == set) { return false; }
    }
    return true;
  }

  // Size of the largest clique, by subset enumeration.
  inline int brute_clique_number(SparsityPattern const& e) {
    int const d = e.dim();
    if (d > 10) { throw TooLarge("brute_clique_number: d > 10"); }
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(d), 0);
    for (auto const& ed : e.edges()) {
      adj[ed.i - 1] |= 1u << (ed.j - 1);
      adj[ed.j - 1] |= 1u << (ed.i - 1);
    }
    int best = 0;
    for (std::uint32_t set = 1; set < (1u << d); ++set) {
      int const size = std::popcount(set);
      if (size <= best) { continue; }
      bool clique = true;
      for (int v = 0; v < d && clique; ++v) {
        if (set >> v & 1u) { clique = (adj[v] & set) == (set & ~(1u << v)); }
      }
      if (clique) { best = size; }
    }
    return best;
  }

} // namespace cglasso::reference
