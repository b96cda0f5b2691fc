// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace cglasso;
using namespace testing_support;

namespace {

  using clock_type = std::chrono::steady_clock;

  double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
  }

  struct Outcome {
    bool pass = false;
    std::string detail;
  };

  std::string fmt(char const* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
  }

  // 1. Example 1 golden values.
  Outcome example_golden() {
    auto m = example_path_matrix();
    auto const t0 = clock_type::now();
    auto n = inverse_consistent_complement(m);
    auto s = solve_dual(m, no_fill_tree(m.pattern())).assemble();
    double const ms = ms_since(t0);

    double err = 0.0;
    err = std::max(err, std::abs(n.at(1, 3) - (-0.12)));
    err = std::max(err, std::abs(n.at(1, 4) - (-0.024)));
    err = std::max(err, std::abs(n.at(2, 4) - (-0.08)));
    double const expect[4][4] = {
      {1 / 0.91, -0.3 / 0.91, 0, 0},
      {-0.3 / 0.91, 1 + 0.09 / 0.91 + 0.16 / 0.84, 0.4 / 0.84, 0},
      {0, 0.4 / 0.84, 1 + 0.16 / 0.84 + 0.04 / 0.96, -0.2 / 0.96},
      {0, 0, -0.2 / 0.96, 1 / 0.96},
    };
    for (int i = 1; i <= 4; ++i) {
      for (int j = 1; j <= 4; ++j) { err = std::max(err, std::abs(s.at(i, j) - expect[i - 1][j - 1])); }
    }
    bool const extra_zero = n.pattern().num_edges() == 3;
    return {err <= 1e-12 && ms < 1.0 && extra_zero, fmt("max error %.3g, %.3f ms", err, ms)};
  }

  // 2. Strong duality and the first-order condition on random chordal
  // instances.
  Outcome strong_duality() {
    std::mt19937_64 rng(20240601);
    auto const t0 = clock_type::now();
    double worst_dual = 0.0, worst_foc = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      int const d = std::uniform_int_distribution<int>(2, 50)(rng);
      int const w = std::uniform_int_distribution<int>(1, std::min(6, d - 1))(rng);
      auto e = random_chordal(d, w, rng);
      SymSparseMatrix c = trial % 2 == 0 ? random_on_pattern(e, 0.9 / (w + 1), rng) : SymSparseMatrix();
      if (trial % 2 == 1) {
        // Known dual solution, built on the PEO labelling then relabelled.
        auto q = *is_chordal(e).peo;
        auto kd = known_dual(permute(e, q), rng);
        c = permute(kd.c, q.inverse());
      }
      auto q = *is_chordal(c.pattern()).peo;
      auto cp = permute(c, q);
      auto tree = symbolic_factor(c.pattern(), q);
      auto f = solve_dual(cp, tree);
      auto x = to_eigen(complete_primal(cp));
      auto s = to_eigen(f.assemble());
      worst_dual = std::max(worst_dual, max_abs(x * s - Eigen::MatrixXd::Identity(d, d)));
      worst_foc = std::max(worst_foc, verify_foc(f, cp));
    }
    double const ms = ms_since(t0);
    return {worst_dual <= 1e-8 && worst_foc <= 1e-9 && ms < 10000.0,
            fmt("max |XS - I| %.3g, max FOC residual %.3g, %.0f ms", worst_dual, worst_foc, ms)};
  }

  // Source patterns of small treewidth for the generated families.
  SparsityPattern source_pattern(int d, std::mt19937_64& rng) {
    int const w = std::uniform_int_distribution<int>(1, 3)(rng);
    return random_chordal(d, w, rng);
  }

  // 3. KKT optimality on certified generated instances with lambda >= 0.5.
  Outcome kkt_optimality() {
    std::mt19937_64 rng(7);
    double const lambda = 0.51;
    int certified = 0, attempts = 0, kkt_fail = 0, support_fail = 0;
    double worst = 0.0;
    while (certified < 100 && attempts < 2000) {
      ++attempts;
      int const d = std::uniform_int_distribution<int>(10, 50)(rng);
      GenConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(attempts);
      cfg.normalize = false;
      cfg.edge_low = 0.52;
      cfg.edge_high = 0.55;
      auto gen = generate(source_pattern(d, rng), cfg);
      auto cert = check_equivalence(gen.sigma, lambda);
      if (cert.cond_1iii != BoundStatus::ProvenByBound) { continue; }
      ++certified;
      SolveOptions opt;
      opt.certify = false;
      auto sol = solve(gen.sigma, lambda, opt);
      auto rep = kkt_check(sol.s_opt, gen.sigma, lambda, 1e-8);
      worst = std::max({worst, rep.diag, rep.support, rep.offsupport});
      kkt_fail += !rep.passed();
      support_fail += !(sol.s_opt.pattern() == residue(gen.sigma, lambda).values.pattern());
    }
    return {certified == 100 && kkt_fail == 0 && support_fail == 0,
            fmt("%d certified of %d generated, worst KKT residual %.3g, %d KKT failures, %d support mismatches",
                certified, attempts, worst, kkt_fail, support_fail)};
  }

  // 4. Optimality gap against the dense reference solver.
  Outcome optimality_gap() {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    int unconverged = 0, instances = 0, rejected = 0;
    for (int trial = 0; instances < 20 && trial < 200; ++trial) {
      int const d = 20 + (30 * instances) / 19;
      GenConfig cfg;
      cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
      GenResult gen;
      try {
        gen = generate(random_graph(d, 2.0 / d, rng), cfg);
      } catch (std::runtime_error const&) {
        ++rejected;
        continue;
      }
      ++instances;
      double const lambda = gen.meta.recommended_lambda;
      SolveOptions opt;
      opt.certify = false;
      auto sol = solve(gen.sigma, lambda, opt);
      auto oracle = reference::dense_glasso(to_dense(gen.sigma), lambda);
      unconverged += !oracle.converged;
      worst = std::max(worst, std::abs(sol.objective - oracle.objective) / std::abs(oracle.objective));
    }
    return {instances == 20 && worst <= 1e-5 && unconverged == 0,
            fmt("worst relative gap %.3g over %d instances (d 20..50, %d patterns rejected by gen), "
                "%d oracle runs unconverged",
                worst, instances, rejected, unconverged)};
  }

  // 5. The closed-form bound dominates the measured complement.
  Outcome beta_bound_samples() {
    std::mt19937_64 rng(5);
    auto const t0 = clock_type::now();
    int samples = 0, exceed = 0, not_below_alpha = 0, draws = 0;
    double tightest = 0.0;
    while (samples < 1000 && draws < 20000) {
      ++draws;
      int const d = std::uniform_int_distribution<int>(4, 40)(rng);
      int const wmax = std::uniform_int_distribution<int>(1, 4)(rng);
      auto e = random_chordal(d, wmax, rng);
      if (e.num_edges() == 0) { continue; }
      int const w = treewidth(symbolic_factor(e, *is_chordal(e).peo));
      if (3 * w > 2 * (d - 1)) { continue; }
      double const amax = 1.0 / (w * std::sqrt(static_cast<double>(d - w - 1)) + w - 1);
      double const a = amax * std::uniform_real_distribution<double>(0.05, 0.999)(rng);
      // Three value families: all +a, random signs of magnitude a, uniform.
      int const family = draws % 3;
      std::vector<double> vals;
      std::uniform_real_distribution<double> u(-a, a);
      for (std::size_t k = 0; k < e.num_edges(); ++k) {
        double v = family == 0 ? a : family == 1 ? (rng() & 1 ? a : -a) : u(rng);
        vals.push_back(v == 0.0 ? a : v);
      }
      SymSparseMatrix m(e, std::vector<double>(d, 1.0), vals);
      if (!is_positive_definite(m)) { continue; }
      double const alpha = m.max_offdiag_abs();
      auto b = beta_bound(w, d, alpha);
      if (!b.cond_2ii || !b.cond_2iii) { continue; }
      ++samples;
      double const measured = inverse_consistent_complement(m).max_offdiag_abs();
      exceed += measured > b.value;
      not_below_alpha += !(b.value < alpha);
      tightest = std::max(tightest, measured / b.value);
    }
    double const ms = ms_since(t0);
    return {samples >= 1000 && exceed == 0 && not_below_alpha == 0 && ms < 60000.0,
            fmt("%d samples, %d exceed the bound, %d with bound >= alpha, max measured/bound %.3f, %.0f ms",
                samples, exceed, not_below_alpha, tightest, ms)};
  }

  // 6. solve_dual time grows linearly on a fixed-bandwidth family.
  Outcome linear_scaling() {
    int const bandwidth = 4;
    std::vector<int> const sizes{1000, 2000, 4000, 8000};
    struct Case {
      SymSparseMatrix c;
      EliminationTree tree;
      int batch;
      std::vector<double> times;
    };
    std::vector<Case> cases;
    for (int d : sizes) {
      auto e = banded_pattern(d, bandwidth);
      std::mt19937_64 rng(static_cast<std::uint64_t>(d));
      auto c = random_on_pattern(e, 0.9 / (2 * bandwidth), rng);
      auto tree = no_fill_tree(e);
      solve_dual(c, tree);
      // Batches of equal total work keep timer overhead comparable.
      cases.push_back({std::move(c), std::move(tree), sizes.back() / d, {}});
    }
    // Sizes are interleaved so that load drift on the machine hits all of
    // them alike.
    int const reps = 61;
    for (int r = 0; r < reps; ++r) {
      for (auto& cs : cases) {
        auto const t0 = clock_type::now();
        std::size_t sink = 0;
        for (int b = 0; b < cs.batch; ++b) { sink += solve_dual(cs.c, cs.tree).diag.size(); }
        cs.times.push_back(ms_since(t0) / cs.batch);
        if (sink == 0) { return {false, "empty factor"}; }
      }
    }
    std::vector<double> medians;
    for (auto& cs : cases) {
      std::ranges::nth_element(cs.times, cs.times.begin() + reps / 2);
      medians.push_back(cs.times[reps / 2]);
    }
    double worst = 0.0;
    std::string detail = "median ms";
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      detail += fmt(" d=%d:%.3f", sizes[k], medians[k]);
      if (k > 0) { worst = std::max(worst, medians[k] / medians[k - 1]); }
    }
    detail += fmt(", worst doubling ratio %.2f", worst);
    return {worst <= 2.5, detail};
  }

  // 7. Graph code against brute force.
  Outcome graph_oracles() {
    std::mt19937_64 rng(77);
    int mismatches = 0, chordal_seen = 0, width_mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      int const d = 1 + trial % 8;
      double const p = 0.15 + 0.7 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      auto e = random_graph(d, p, rng);
      auto an = is_chordal(e);
      mismatches += an.is_chordal != reference::brute_chordality(e);
      if (an.is_chordal) {
        ++chordal_seen;
        width_mismatches += treewidth(symbolic_factor(e, *an.peo)) != reference::brute_clique_number(e) - 1;
      }
    }
    for (int trial = 0; trial < 500; ++trial) {
      auto e = random_chordal(1 + trial % 8, 1 + trial % 5, rng);
      ++chordal_seen;
      width_mismatches += treewidth(symbolic_factor(e, *is_chordal(e).peo)) != reference::brute_clique_number(e) - 1;
    }
    return {mismatches == 0 && width_mismatches == 0,
            fmt("1000 graphs, %d chordality mismatches; %d chordal graphs, %d treewidth mismatches", mismatches,
                chordal_seen, width_mismatches)};
  }

  // 8. Determinism of generation and solving.
  Outcome determinism() {
    std::mt19937_64 rng(8);
    auto pattern = random_graph(40, 0.06, rng);
    GenConfig cfg;
    cfg.seed = 0xC0FFEE;
    std::stringstream a, b;
    auto ga = generate(pattern, cfg);
    mm::write_matrix(a, ga.sigma);
    mm::write_matrix(b, generate(pattern, cfg).sigma);
    bool const gen_same = a.str() == b.str();

    double const lambda = ga.meta.recommended_lambda;
    auto s1 = solve(ga.sigma, lambda);
    auto s2 = solve(ga.sigma, lambda);
    std::stringstream x, y;
    mm::write_matrix(x, s1.s_opt);
    mm::write_matrix(y, s2.s_opt);
    bool const solve_same = s1.s_opt == s2.s_opt && x.str() == y.str() &&
                            std::memcmp(&s1.objective, &s2.objective, sizeof(double)) == 0;
    return {gen_same && solve_same,
            fmt("gen bytes identical: %s (%zu bytes); solve bit-identical: %s", gen_same ? "yes" : "no",
                a.str().size(), solve_same ? "yes" : "no")};
  }

} // namespace

int main() {
  struct Criterion {
    char const* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> const criteria{
    {"1 example golden values", example_golden},
    {"2 strong duality", strong_duality},
    {"3 KKT optimality", kkt_optimality},
    {"4 optimality gap", optimality_gap},
    {"5 complement bound", beta_bound_samples},
    {"6 linear scaling", linear_scaling},
    {"7 graph oracles", graph_oracles},
    {"8 determinism", determinism},
  };
  int failed = 0;
  for (auto const& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (std::exception const& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
