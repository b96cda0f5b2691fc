// Command-line front end: generate, solve, check, bench.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <cglasso/cglasso.hpp>
#include <cglasso/report.hpp>

namespace fs = std::filesystem;
using namespace cglasso;
using report::json;

namespace {

  enum ExitCode { ok = 0, failure = 1, not_chordal = 2, not_completable = 3 };

  void write_json(json const& j, std::string const& path) {
    if (path.empty() || path == "-") {
      std::cout << j.dump(2) << '\n';
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw std::runtime_error("cannot write " + path); }
    out << j.dump(2) << '\n';
  }

  // ---------------------------------------------------------------------
  // gen

  struct GenArgs {
    std::string pattern;
    std::string output;
    std::uint64_t seed = 0;
    GenConfig cfg;
    bool no_normalize = false;
  };

  int run_gen(GenArgs a) {
    a.cfg.seed = a.seed;
    a.cfg.normalize = !a.no_normalize;
    auto result = generate(mm::load_pattern(a.pattern), a.cfg);
    mm::save_matrix(a.output, result.sigma);
    write_json(report::gen_meta(result.meta), a.output + ".json");
    return ok;
  }

  // ---------------------------------------------------------------------
  // solve

  struct SolveArgs {
    std::string input;
    std::string output;
    std::string report;
    double lambda = 0.0;
    bool force_embedding = false;
    bool oracle = false;
    bool no_certify = false;
    int dense_limit = 2000;
  };

  int run_solve(SolveArgs const& a) {
    auto sigma = mm::load_matrix(a.input);
    SolveOptions opt;
    opt.force_embedding = a.force_embedding;
    opt.certify = !a.no_certify;
    opt.dense_limit = a.dense_limit;
    auto sol = solve(sigma, a.lambda, opt);

    std::optional<report::OracleSummary> oracle;
    if (a.oracle) {
      auto o = reference::dense_glasso(to_dense(sigma), a.lambda);
      oracle = report::OracleSummary{o.objective,
                                     std::abs(sol.objective - o.objective) / std::abs(o.objective),
                                     o.iterations, o.converged};
    }
    if (!a.output.empty()) { mm::save_matrix(a.output, sol.s_opt); }
    write_json(report::solve(sol, oracle), a.report);
    return ok;
  }

  // ---------------------------------------------------------------------
  // check

  struct CheckArgs {
    std::string input;
    std::string report;
    double lambda = 0.0;
    int dense_limit = 2000;
  };

  int run_check(CheckArgs const& a) {
    auto cert = check_equivalence(mm::load_matrix(a.input), a.lambda, {a.dense_limit});
    write_json(report::certificate(cert), a.report);
    std::cerr << "d=" << cert.d << " gap=" << cert.gap << " alpha=" << cert.alpha
              << " w=" << cert.w << " bound=" << cert.bound_value
              << " status=" << report::certificate_status(cert) << '\n';
    return ok;
  }

  // ---------------------------------------------------------------------
  // bench

  struct BenchCase {
    std::string name;
    std::optional<fs::path> pattern;
    int band_d = 0;
    int band_width = 0;
    GenConfig cfg;
    std::optional<double> lambda;
  };

  std::vector<BenchCase> load_cases(fs::path const& path) {
    std::ifstream in(path);
    if (!in) { throw std::runtime_error("cannot open " + path.string()); }
    auto doc = nlohmann::json::parse(in);
    std::vector<BenchCase> cases;
    for (auto const& c : doc.at("cases")) {
      BenchCase bc;
      bc.name = c.at("name").get<std::string>();
      if (c.contains("pattern")) {
        fs::path p = c.at("pattern").get<std::string>();
        bc.pattern = p.is_relative() ? path.parent_path() / p : p;
      } else {
        bc.band_d = c.at("band").at("d").get<int>();
        bc.band_width = c.at("band").at("bandwidth").get<int>();
      }
      bc.cfg.seed = c.value("seed", std::uint64_t{0});
      bc.cfg.normalize = c.value("normalize", true);
      bc.cfg.edge_low = c.value("edge_low", bc.cfg.edge_low);
      bc.cfg.edge_high = c.value("edge_high", bc.cfg.edge_high);
      bc.cfg.noise_bound = c.value("noise", bc.cfg.noise_bound);
      if (c.contains("lambda")) { bc.lambda = c.at("lambda").get<double>(); }
      cases.push_back(std::move(bc));
    }
    return cases;
  }

  report::BenchRow run_case(BenchCase const& c, int oracle_limit) {
    report::BenchRow row;
    row.name = c.name;
    try {
      auto pattern = c.pattern ? mm::load_pattern(*c.pattern) : banded_pattern(c.band_d, c.band_width);
      auto gen = generate(pattern, c.cfg);
      row.d = gen.meta.d;
      row.lambda = c.lambda.value_or(gen.meta.recommended_lambda);
      SolveOptions opt;
      opt.dense_limit = oracle_limit;
      auto sol = solve(gen.sigma, row.lambda, opt);
      row.max_clique = sol.w + 1;
      row.solve_time_ms = sol.solve_ms;
      row.certificate_time_ms = sol.certificate_ms;
      row.certificate_status = report::certificate_status(*sol.certificate);
      if (row.d <= oracle_limit) {
        auto o = reference::dense_glasso(to_dense(gen.sigma), row.lambda);
        row.opt_gap = std::abs(sol.objective - o.objective) / std::abs(o.objective);
      }
    } catch (std::exception const& e) {
      row.error = e.what();
    }
    return row;
  }

  int thread_cap() {
    if (char const* env = std::getenv("CHORDAL_GLASSO_THREADS")) {
      int const n = std::atoi(env);
      if (n > 0) { return n; }
    }
    return 1;
  }

  void print_table(std::vector<report::BenchRow> const& rows, std::ostream& out) {
    out << std::left << std::setw(24) << "name" << std::right << std::setw(8) << "d"
        << std::setw(8) << "clique" << std::setw(14) << "solve_ms" << std::setw(16) << "certificate"
        << std::setw(12) << "opt_gap" << '\n';
    for (auto const& r : rows) {
      out << std::left << std::setw(24) << r.name << std::right << std::setw(8) << r.d
          << std::setw(8) << r.max_clique << std::setw(14) << std::fixed << std::setprecision(3)
          << r.solve_time_ms << std::setw(16) << (r.error ? "error" : r.certificate_status)
          << std::setw(12);
      if (r.opt_gap) {
        out << std::scientific << std::setprecision(2) << *r.opt_gap;
      } else {
        out << "-";
      }
      out << std::defaultfloat << '\n';
      if (r.error) { out << "  " << *r.error << '\n'; }
    }
  }

  struct BenchArgs {
    std::string cases;
    std::string report;
    int oracle_limit = 50;
  };

  int run_bench(BenchArgs const& a) {
    auto cases = load_cases(a.cases);
    std::vector<report::BenchRow> rows(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < cases.size(); i = next++) { rows[i] = run_case(cases[i], a.oracle_limit); }
    };
    int const n = std::min<int>(thread_cap(), static_cast<int>(std::max<std::size_t>(cases.size(), 1)));
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) { pool.emplace_back(worker); }
    worker();
    pool.clear();

    std::ranges::sort(rows, {}, &report::BenchRow::name);
    auto doc = report::bench(rows, a.oracle_limit);
    if (a.report.empty()) {
      print_table(rows, std::cout);
    } else {
      write_json(doc, a.report);
      print_table(rows, std::cout);
    }
    return ok;
  }

  // ---------------------------------------------------------------------
  // oracle (debugging aid)

  struct OracleArgs {
    std::string input;
    double lambda = 0.0;
    double tol = 1e-10;
  };

  int run_oracle(OracleArgs const& a) {
    auto r = reference::dense_glasso(to_dense(mm::load_matrix(a.input)), a.lambda, a.tol);
    json j;
    j["objective"] = report::real(r.objective);
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["final_step_norm"] = report::real(r.final_step_norm);
    std::cout << j.dump(2) << '\n';
    return ok;
  }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphical Lasso through chordal max-det completion"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a correlation matrix from a pattern");
  gen_cmd->add_option("--pattern", gen.pattern, "Matrix Market pattern")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--seed", gen.seed, "64-bit seed")->required();
  gen_cmd->add_option("--edge-low", gen.cfg.edge_low, "Smallest embedded-edge magnitude");
  gen_cmd->add_option("--edge-high", gen.cfg.edge_high, "Largest embedded-edge magnitude");
  gen_cmd->add_option("--noise", gen.cfg.noise_bound, "Noise magnitude bound");
  gen_cmd->add_option("--margin", gen.cfg.margin, "Diagonal dominance margin");
  gen_cmd->add_flag("--no-normalize", gen.no_normalize, "Keep a unit diagonal without rescaling");
  gen_cmd->add_option("-o,--output", gen.output, "Output matrix (sidecar: <output>.json)")->required();

  SolveArgs sv;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the Graphical Lasso");
  solve_cmd->add_option("--input", sv.input, "Correlation matrix")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--lambda", sv.lambda, "Regularization")->required();
  solve_cmd->add_flag("--force-embedding", sv.force_embedding, "Solve non-chordal components on a chordal embedding");
  solve_cmd->add_flag("--oracle", sv.oracle, "Compare against the dense reference solver");
  solve_cmd->add_flag("--no-certify", sv.no_certify, "Skip the equivalence certificate");
  solve_cmd->add_option("--dense-limit", sv.dense_limit, "Largest d for dense checks");
  solve_cmd->add_option("-o,--output", sv.output, "Solution matrix");
  solve_cmd->add_option("--report", sv.report, "JSON report (default stdout)");

  CheckArgs ck;
  auto* check_cmd = app.add_subcommand("check", "Certify thresholding/GL equivalence");
  check_cmd->add_option("--input", ck.input, "Correlation matrix")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--lambda", ck.lambda, "Regularization")->required();
  check_cmd->add_option("--dense-limit", ck.dense_limit, "Largest component for dense checks");
  check_cmd->add_option("--report", ck.report, "JSON certificate (default stdout)");

  BenchArgs bn;
  auto* bench_cmd = app.add_subcommand("bench", "Run a list of generated cases");
  bench_cmd->add_option("--cases", bn.cases, "Case list (JSON)")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--oracle-limit", bn.oracle_limit, "Largest d compared against the oracle");
  bench_cmd->add_option("--report", bn.report, "JSON report");

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Dense reference solver");
  oracle_cmd->group("");
  oracle_cmd->add_option("--input", orc.input)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--lambda", orc.lambda)->required();
  oracle_cmd->add_option("--tol", orc.tol);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) { return run_gen(gen); }
    if (*solve_cmd) { return run_solve(sv); }
    if (*check_cmd) { return run_check(ck); }
    if (*bench_cmd) { return run_bench(bn); }
    if (*oracle_cmd) { return run_oracle(orc); }
  } catch (NotChordal const& e) {
    std::cerr << "error: " << e.what() << " (use --force-embedding)\n";
    return not_chordal;
  } catch (NotCompletable const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return not_completable;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return failure;
}
