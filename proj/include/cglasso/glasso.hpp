#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/chordal.hpp>
#include <cglasso/cholesky.hpp>
#include <cglasso/maxdet.hpp>
#include <cglasso/spmat.hpp>

// Graphical Lasso through thresholding and max-det completion.
//
// For a correlation matrix Sigma and regularization lambda, the
// soft-thresholded residue Sigma^res carries the candidate sparsity
// pattern. When thresholding and the GL agree on that pattern (certified
// by check_equivalence) and the pattern is chordal, the GL optimum is the
// inverse of the max-det completion of diag(Sigma) + Sigma^res, computed
// component by component with solve_dual.

namespace cglasso {

  struct ResidueMatrix {
    // Off-diagonal soft-thresholded values; the diagonal is zero.
    SymSparseMatrix values;
    double lambda = 0.0;

    // diag + Sigma^res.
    SymSparseMatrix with_diagonal(std::vector<double> diag) const {
      return SymSparseMatrix(values.pattern(), std::move(diag), values.edge_values());
    }

    SymSparseMatrix identity_plus() const {
      return with_diagonal(std::vector<double>(static_cast<std::size_t>(values.dim()), 1.0));
    }
  };

  namespace detail {
    inline void check_correlation(SymSparseMatrix const& sigma) {
      for (int i = 1; i <= sigma.dim(); ++i) {
        if (!(std::abs(sigma.diagonal()[i - 1] - 1.0) <= 1e-9)) {
          throw NotACorrelation("diagonal entry " + std::to_string(i) + " is not 1");
        }
      }
    }

    inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
  } // namespace detail

  // Soft thresholding of the off-diagonals: entries with |Sigma_ij| > lambda
  // become Sigma_ij - lambda sign(Sigma_ij), all others vanish.
  inline ResidueMatrix residue(SymSparseMatrix const& sigma, double lambda) {
    if (!(lambda >= 0.0)) { throw std::invalid_argument("residue: lambda must be >= 0"); }
    detail::check_correlation(sigma);
    std::vector<Entry> kept;
    for (auto const& e : sigma.entries()) {
      if (std::abs(e.value) > lambda) {
        kept.push_back({e.i, e.j, e.value - lambda * detail::sign(e.value)});
      }
    }
    return {SymSparseMatrix(std::vector<double>(static_cast<std::size_t>(sigma.dim()), 0.0), kept),
            lambda};
  }

  inline ResidueMatrix residue(DenseSymMatrix const& sigma, double lambda) {
    return residue(to_sparse(sigma), lambda);
  }

  struct ThresholdSpectrum {
    // Distinct off-diagonal magnitudes, strictly decreasing.
    std::vector<double> sigma;
    double lambda = 0.0;
    // Number of magnitudes above lambda.
    int k = 0;
    bool has_duplicates = false;

    double sigma1() const { return sigma.empty() ? 0.0 : sigma.front(); }
    // sigma_{k+1}; entries absent from the input count as magnitude 0.
    double sigma_next() const {
      return static_cast<std::size_t>(k) < sigma.size() ? sigma[k] : 0.0;
    }
  };

  inline ThresholdSpectrum spectrum(SymSparseMatrix const& sigma, double lambda) {
    ThresholdSpectrum s;
    s.lambda = lambda;
    s.sigma.reserve(sigma.edge_values().size());
    for (double v : sigma.edge_values()) { s.sigma.push_back(std::abs(v)); }
    std::ranges::sort(s.sigma, std::greater<>());
    auto const before = s.sigma.size();
    s.sigma.erase(std::unique(s.sigma.begin(), s.sigma.end()), s.sigma.end());
    s.has_duplicates = s.sigma.size() != before;
    if (std::ranges::find(s.sigma, lambda) != s.sigma.end()) {
      throw AmbiguousLevel("lambda equals an off-diagonal magnitude; the level is not unique");
    }
    s.k = static_cast<int>(std::ranges::count_if(s.sigma, [lambda](double v) { return v > lambda; }));
    return s;
  }

  inline ThresholdSpectrum spectrum(DenseSymMatrix const& sigma, double lambda) {
    return spectrum(to_sparse(sigma), lambda);
  }

  // Connected components in ascending order of their smallest member.
  inline std::vector<IndexSet> components(SparsityPattern const& e) {
    int const d = e.dim();
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    std::vector<IndexSet> out;
    std::deque<int> bfs;
    for (int s = 1; s <= d; ++s) {
      if (seen[s - 1]) { continue; }
      std::vector<int> members{s};
      seen[s - 1] = 1;
      bfs.push_back(s);
      while (!bfs.empty()) {
        int const v = bfs.front();
        bfs.pop_front();
        for (int u : e.neighbors(v)) {
          if (!seen[u - 1]) {
            seen[u - 1] = 1;
            members.push_back(u);
            bfs.push_back(u);
          }
        }
      }
      out.emplace_back(std::move(members));
    }
    return out;
  }

  struct BetaBound {
    // Upper bound on the largest complement entry; +inf when the
    // denominator is not positive.
    double value = 0.0;
    // w <= 2(d-1)/3
    bool cond_2ii = false;
    // alpha < 1 / (w sqrt(d-w-1) + w - 1)
    bool cond_2iii = false;
  };

  // Closed-form bound w sqrt(d-w-1) alpha^2 / (1 - (w-1) alpha) on the
  // complement of any unit-diagonal PD matrix with a chordal support of
  // treewidth w and off-diagonals bounded by alpha. For w = 0 (no edges)
  // the complement is identically zero.
  inline BetaBound beta_bound(int w, int d, double alpha) {
    if (w < 0 || d < 1 || w > d - 1) {
      throw std::invalid_argument("beta_bound: need 0 <= w <= d - 1");
    }
    BetaBound b;
    b.cond_2ii = 3.0 * w <= 2.0 * (d - 1);
    if (w == 0) {
      b.value = 0.0;
      b.cond_2iii = true;
      return b;
    }
    double const root = std::sqrt(static_cast<double>(d - w - 1));
    double const denom = 1.0 - (w - 1) * alpha;
    b.cond_2iii = alpha * (w * root + w - 1) < 1.0;
    b.value = denom > 0.0 ? w * root * alpha * alpha / denom
                          : std::numeric_limits<double>::infinity();
    return b;
  }

  enum class CheckStatus { Holds, Fails, Unchecked };
  enum class BoundStatus { ProvenByBound, Violated, Inconclusive };

  inline char const* to_string(CheckStatus s) {
    switch (s) {
      case CheckStatus::Holds: return "Holds";
      case CheckStatus::Fails: return "Fails";
      case CheckStatus::Unchecked: return "Unchecked";
    }
    return "?";
  }

  inline char const* to_string(BoundStatus s) {
    switch (s) {
      case BoundStatus::ProvenByBound: return "ProvenByBound";
      case BoundStatus::Violated: return "Violated";
      case BoundStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
  }

  struct EquivalenceCertificate {
    double lambda = 0.0;
    int d = 0;
    int k = 0;
    double sigma1 = 0.0;
    double sigma_next = 0.0;
    // lambda - sigma_{k+1}
    double gap = 0.0;
    // sigma_1 - lambda
    double alpha = 0.0;
    bool chordal = true;
    // Treewidth of supp(Sigma^res), or of its chordal embedding when the
    // support is not chordal.
    int w = 0;
    bool cond_1i = false;
    CheckStatus cond_1ii = CheckStatus::Unchecked;
    BoundStatus cond_1iii = BoundStatus::Inconclusive;
    double bound_value = 0.0;
    bool cond_2ii = false;
    bool cond_2iii = false;
    // Largest entry of the instance's own complement, when computed.
    std::optional<double> complement_max;

    // All three conditions certified: GL and thresholding share a pattern.
    bool equivalent() const {
      return cond_1i && cond_1ii == CheckStatus::Holds &&
             cond_1iii == BoundStatus::ProvenByBound;
    }
  };

  struct EquivalenceOptions {
    // Largest component for which a dense completion is formed.
    int dense_limit = 2000;
  };

  namespace detail {

    struct ChordalComponent {
      IndexSet members;
      Permutation order;
      EliminationTree tree;
      SymSparseMatrix local; // permuted into elimination order
      bool chordal = true;
      std::size_t fill = 0;
    };

    // Local matrix of one component, ordered for elimination. Non-chordal
    // components are ordered on their MCS embedding.
    inline ChordalComponent prepare_component(SymSparseMatrix const& c, IndexSet const& members) {
      ChordalComponent cc;
      cc.members = members;
      auto sub = principal_submatrix(c, members);
      auto an = is_chordal(sub.pattern());
      cc.chordal = an.is_chordal;
      cc.order = an.is_chordal ? *an.peo : mcs_order(sub.pattern());
      cc.tree = symbolic_factor(sub.pattern(), cc.order);
      cc.fill = cc.tree.nnz() - sub.pattern().num_edges();
      cc.local = permute(sub, cc.order);
      return cc;
    }

    // Maps a local (permuted) label back to the global label.
    inline int global_label(ChordalComponent const& cc, int local) {
      return cc.members[cc.order.inverse(local) - 1];
    }

  } // namespace detail

  // Inverse-consistent complement of m: the max-det completion minus m.
  // Requires a chordal support; the result is dense in the worst case.
  inline SymSparseMatrix inverse_consistent_complement(SymSparseMatrix const& m) {
    auto an = is_chordal(m.pattern());
    if (!an.is_chordal) { throw NotChordal("inverse_consistent_complement: support is not chordal", -1); }
    auto const& q = *an.peo;
    auto completed = permute(complete_primal(permute(m, q)), q.inverse());
    std::vector<Entry> entries;
    for (int i = 1; i <= m.dim(); ++i) {
      for (int j = i + 1; j <= m.dim(); ++j) {
        if (m.pattern().has_edge(i, j)) { continue; }
        double const v = completed.at(i, j);
        if (v != 0.0) { entries.push_back({i, j, v}); }
      }
    }
    return SymSparseMatrix(std::vector<double>(static_cast<std::size_t>(m.dim()), 0.0), entries);
  }

  // Every supported entry of m and of (m + m^(c))^-1 is nonzero with
  // opposite sign. Dense evaluation.
  inline bool is_sign_consistent(SymSparseMatrix const& m) {
    auto n = inverse_consistent_complement(m);
    auto x = to_dense(m).to_block();
    for (auto const& e : n.entries()) {
      x(e.i - 1, e.j - 1) = e.value;
      x(e.j - 1, e.i - 1) = e.value;
    }
    auto const inv = dense::spd_inverse(x);
    for (auto const& e : m.entries()) {
      double const v = inv(e.i - 1, e.j - 1);
      if (!(std::abs(v) > 1e-10) || detail::sign(v) == detail::sign(e.value)) { return false; }
    }
    return true;
  }

  // Checks the three sufficient conditions for thresholding and the GL to
  // share a sparsity pattern:
  //   1-i   I + Sigma^res is positive definite;
  //   1-ii  I + Sigma^res is sign-consistent;
  //   1-iii beta(supp(Sigma^res), sigma_1 - lambda) <= lambda - sigma_{k+1},
  //         certified through the closed-form bound for chordal supports.
  // 1-iii is reported Violated only when the instance's own complement
  // already exceeds the gap; a failing bound alone is Inconclusive.
  inline EquivalenceCertificate check_equivalence(SymSparseMatrix const& sigma, double lambda,
                                                  EquivalenceOptions const& opt = {}) {
    auto const res = residue(sigma, lambda);
    auto const spec = spectrum(sigma, lambda);
    int const d = sigma.dim();

    EquivalenceCertificate cert;
    cert.lambda = lambda;
    cert.d = d;
    cert.k = spec.k;
    cert.sigma1 = spec.sigma1();
    cert.sigma_next = spec.sigma_next();
    cert.gap = lambda - cert.sigma_next;
    cert.alpha = cert.sigma1 - lambda;

    auto const m = res.identity_plus();
    auto const comps = components(m.pattern());
    std::vector<detail::ChordalComponent> prepared;
    for (auto const& members : comps) {
      if (members.size() > 1) { prepared.push_back(detail::prepare_component(m, members)); }
    }
    for (auto const& cc : prepared) {
      cert.chordal = cert.chordal && cc.chordal;
      cert.w = std::max(cert.w, treewidth(cc.tree));
    }

    cert.cond_1i = is_positive_definite(m);
    auto const bb = beta_bound(cert.w, std::max(d, 1), std::max(cert.alpha, 0.0));
    cert.bound_value = bb.value;
    cert.cond_2ii = bb.cond_2ii;
    cert.cond_2iii = bb.cond_2iii;

    if (cert.chordal) {
      // (M + M^(c))^-1 is the sparse dual solution, so sign-consistency is
      // read off its assembled factors.
      cert.cond_1ii = CheckStatus::Holds;
      try {
        for (auto const& cc : prepared) {
          auto s = solve_dual(cc.local, cc.tree).assemble();
          for (auto const& e : cc.local.entries()) {
            double const v = s.at(e.i, e.j);
            if (!(std::abs(v) > 1e-10) || detail::sign(v) == detail::sign(e.value)) {
              cert.cond_1ii = CheckStatus::Fails;
            }
          }
        }
      } catch (NotCompletable const&) {
        cert.cond_1ii = CheckStatus::Fails;
      }

      bool dense_ok = cert.cond_1i;
      for (auto const& cc : prepared) {
        dense_ok = dense_ok && static_cast<int>(cc.members.size()) <= opt.dense_limit;
      }
      if (dense_ok) {
        double cmax = 0.0;
        for (auto const& cc : prepared) {
          auto x = complete_primal(cc.local);
          for (int i = 1; i <= x.dim(); ++i) {
            for (int j = i + 1; j <= x.dim(); ++j) {
              if (!cc.local.pattern().has_edge(i, j)) { cmax = std::max(cmax, std::abs(x.at(i, j))); }
            }
          }
        }
        cert.complement_max = cmax;
      }
    }

    if (cert.chordal && bb.cond_2ii && bb.cond_2iii && bb.value <= cert.gap) {
      cert.cond_1iii = BoundStatus::ProvenByBound;
    } else if (cert.complement_max && *cert.complement_max > cert.gap) {
      cert.cond_1iii = BoundStatus::Violated;
    } else {
      cert.cond_1iii = BoundStatus::Inconclusive;
    }
    return cert;
  }

  inline EquivalenceCertificate check_equivalence(DenseSymMatrix const& sigma, double lambda,
                                                  EquivalenceOptions const& opt = {}) {
    return check_equivalence(to_sparse(sigma), lambda, opt);
  }

  struct KktReport {
    double tol = 0.0;
    // (S^-1)_ii vs Sigma_ii
    double diag = 0.0;
    // (S^-1)_ij vs Sigma_ij + lambda sign(S_ij) on supp(S)
    double support = 0.0;
    // distance of (S^-1)_ij outside [Sigma_ij - lambda, Sigma_ij + lambda] off supp(S)
    double offsupport = 0.0;

    bool passed() const { return diag <= tol && support <= tol && offsupport <= tol; }
  };

  // Worst violation of each class of the GL optimality conditions. Dense.
  inline KktReport kkt_check(SymSparseMatrix const& s, SymSparseMatrix const& sigma, double lambda,
                             double tol = 1e-8) {
    if (s.dim() != sigma.dim()) { throw DimensionMismatch("kkt_check: size mismatch"); }
    int const d = s.dim();
    auto const inv = dense::spd_inverse(to_dense(s).to_block());
    KktReport r;
    r.tol = tol;
    for (int i = 1; i <= d; ++i) {
      r.diag = std::max(r.diag, std::abs(inv(i - 1, i - 1) - sigma.diagonal()[i - 1]));
      for (int j = i + 1; j <= d; ++j) {
        double const w = inv(i - 1, j - 1);
        double const sij = s.at(i, j);
        double const sg = sigma.at(i, j);
        if (sij != 0.0) {
          r.support = std::max(r.support, std::abs(w - (sg + lambda * detail::sign(sij))));
        } else {
          r.offsupport = std::max({r.offsupport, (sg - lambda) - w, w - (sg + lambda)});
        }
      }
    }
    return r;
  }

  namespace detail {
    // ||S||_*: sum of |S_ij| over all i != j (both triangles).
    inline double offdiag_l1(SymSparseMatrix const& s) {
      double t = 0.0;
      for (double v : s.edge_values()) { t += 2.0 * std::abs(v); }
      return t;
    }
  } // namespace detail

  // -log det S + trace(Sigma S) + lambda ||S||_*
  inline double gl_objective(SymSparseMatrix const& s, SymSparseMatrix const& sigma, double lambda) {
    if (s.dim() != sigma.dim()) { throw DimensionMismatch("gl_objective: size mismatch"); }
    return -log_det(s) + detail::trace_product(s, sigma) + lambda * detail::offdiag_l1(s);
  }

  inline double gl_objective(DenseSymMatrix const& s, DenseSymMatrix const& sigma, double lambda) {
    if (s.dim() != sigma.dim()) { throw DimensionMismatch("gl_objective: size mismatch"); }
    int const d = s.dim();
    double tr = 0.0, l1 = 0.0;
    for (int i = 1; i <= d; ++i) {
      for (int j = 1; j <= d; ++j) {
        tr += sigma.at(i, j) * s.at(i, j);
        if (i != j) { l1 += std::abs(s.at(i, j)); }
      }
    }
    return -dense::spd_log_det(s.to_block()) + tr + lambda * l1;
  }

  enum class SolutionStatus { Exact, Approximate };

  inline char const* to_string(SolutionStatus s) {
    return s == SolutionStatus::Exact ? "Exact" : "Approximate";
  }

  struct ComponentSolution {
    IndexSet members;
    // Local perfect elimination ordering (or embedding order).
    Permutation order;
    CholeskyFactors factors;
    int w = 0;
    bool chordal = true;
    std::size_t fill = 0;
    double objective = 0.0;
    double time_ms = 0.0;
  };

  struct SolveOptions {
    // Solve non-chordal components on their MCS chordal embedding, with
    // the added positions constrained to zero, and mark the result
    // Approximate.
    bool force_embedding = false;
    bool certify = true;
    // Dense KKT check and complement bound only up to this dimension.
    int dense_limit = 2000;
    double kkt_tol = 1e-8;
  };

  struct GLSolution {
    double lambda = 0.0;
    int k = 0;
    // Components with at least two members; singletons solve to 1/Sigma_ii.
    std::vector<ComponentSolution> components;
    SymSparseMatrix s_opt;
    double objective = 0.0;
    std::optional<EquivalenceCertificate> certificate;
    std::optional<KktReport> kkt;
    SolutionStatus status = SolutionStatus::Exact;
    std::vector<std::string> warnings;
    bool chordal = true;
    int w = 0;
    // Wall time of factorization plus assembly, and of certification.
    double solve_ms = 0.0;
    double certificate_ms = 0.0;
  };

  // Solves the GL as the max-det completion of diag(Sigma) + Sigma^res,
  // independently on every connected component of supp(Sigma^res).
  inline GLSolution solve(SymSparseMatrix const& sigma, double lambda, SolveOptions const& opt = {}) {
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
      return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };
    if (!(lambda > 0.0)) { throw std::invalid_argument("solve: lambda must be > 0"); }

    auto const res = residue(sigma, lambda);
    auto const spec = spectrum(sigma, lambda);
    int const d = sigma.dim();

    GLSolution sol;
    sol.lambda = lambda;
    sol.k = spec.k;
    if (lambda < 0.5) {
      sol.warnings.push_back("lambda < 0.5: optimality rests on the KKT check only");
    }
    if (spec.has_duplicates) {
      sol.warnings.push_back("off-diagonal magnitudes are not distinct");
    }

    auto const c = res.with_diagonal(sigma.diagonal());
    auto const comps = components(c.pattern());

    auto const t_solve = clock::now();
    std::vector<double> sdiag(static_cast<std::size_t>(d), 0.0);
    std::vector<Entry> sentries;
    double logdet = 0.0;
    int comp_index = 0;
    for (auto const& members : comps) {
      if (members.size() == 1) {
        int const v = members[0];
        sdiag[v - 1] = 1.0 / c.diagonal()[v - 1];
        logdet += std::log(sdiag[v - 1]);
        ++comp_index;
        continue;
      }
      auto const t0 = clock::now();
      auto cc = detail::prepare_component(c, members);
      if (!cc.chordal && !opt.force_embedding) {
        throw NotChordal("component " + std::to_string(comp_index) +
                         " of the thresholded pattern is not chordal", comp_index);
      }
      DualOptions dopt;
      dopt.allow_fill = !cc.chordal;
      ComponentSolution cs;
      cs.factors = solve_dual(cc.local, cc.tree, dopt);
      auto local_s = cs.factors.assemble();
      for (int j = 1; j <= local_s.dim(); ++j) {
        sdiag[detail::global_label(cc, j) - 1] = local_s.diagonal()[j - 1];
      }
      for (auto const& e : local_s.entries()) {
        sentries.push_back({detail::global_label(cc, e.i), detail::global_label(cc, e.j), e.value});
      }
      cs.time_ms = ms_since(t0);

      auto sigma_local = permute(principal_submatrix(sigma, members), cc.order);
      cs.objective = -cs.factors.log_det() + detail::trace_product(local_s, sigma_local) +
                     lambda * detail::offdiag_l1(local_s);
      logdet += cs.factors.log_det();
      cs.members = members;
      cs.order = cc.order;
      cs.w = treewidth(cc.tree);
      cs.chordal = cc.chordal;
      cs.fill = cc.fill;
      sol.chordal = sol.chordal && cc.chordal;
      sol.w = std::max(sol.w, cs.w);
      if (!cc.chordal) { sol.status = SolutionStatus::Approximate; }
      sol.components.push_back(std::move(cs));
      ++comp_index;
    }
    sol.s_opt = SymSparseMatrix(std::move(sdiag), sentries);
    sol.solve_ms = ms_since(t_solve);

    sol.objective = -logdet + detail::trace_product(sol.s_opt, sigma) +
                    lambda * detail::offdiag_l1(sol.s_opt);

    if (opt.certify) {
      auto const t_cert = clock::now();
      sol.certificate = check_equivalence(sigma, lambda, {opt.dense_limit});
      sol.certificate_ms = ms_since(t_cert);
    }
    if (d <= opt.dense_limit) { sol.kkt = kkt_check(sol.s_opt, sigma, lambda, opt.kkt_tol); }
    return sol;
  }

  inline GLSolution solve(DenseSymMatrix const& sigma, double lambda, SolveOptions const& opt = {}) {
    return solve(to_sparse(sigma), lambda, opt);
  }

} // namespace cglasso
