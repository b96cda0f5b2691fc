#pragma once

//
// ... Standard header files
//
#include <cmath>
#include <optional>
#include <string>

//
// ... Third-party header files
//
#include <json.hpp>

//
// ... cglasso header files
//
#include <cglasso/generate.hpp>
#include <cglasso/glasso.hpp>

// JSON documents emitted by the command-line tool. Every document carries
// "schema" and "schema_version"; the matching JSON Schemas live in
// docs/schemas. Non-finite reals are written as null.

namespace cglasso::report {

  using json = nlohmann::ordered_json;

  inline constexpr char const* schema_version = "1.0";

  inline json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

  inline json real(std::optional<double> v) { return v ? real(*v) : json(nullptr); }

  inline json header(char const* schema) {
    json j;
    j["schema"] = schema;
    j["schema_version"] = schema_version;
    return j;
  }

  // Finite-sample quantities behind the asymptotic sparsity regime.
  inline json diagnostics(EquivalenceCertificate const& c) {
    json j;
    j["d"] = c.d;
    j["gap"] = real(c.gap);
    j["alpha"] = real(c.alpha);
    j["w"] = c.w;
    j["bound"] = real(c.bound_value);
    j["bound_within_gap"] = c.bound_value <= c.gap;
    return j;
  }

  inline json certificate_body(EquivalenceCertificate const& c) {
    json j;
    j["lambda"] = real(c.lambda);
    j["d"] = c.d;
    j["k"] = c.k;
    j["sigma1"] = real(c.sigma1);
    j["sigma_next"] = real(c.sigma_next);
    j["gap"] = real(c.gap);
    j["alpha"] = real(c.alpha);
    j["chordal"] = c.chordal;
    j["w"] = c.w;
    j["cond_1i"] = c.cond_1i;
    j["cond_1ii"] = to_string(c.cond_1ii);
    j["cond_1iii"] = to_string(c.cond_1iii);
    j["bound_value"] = real(c.bound_value);
    j["cond_2ii"] = c.cond_2ii;
    j["cond_2iii"] = c.cond_2iii;
    j["complement_max"] = real(c.complement_max);
    j["equivalent"] = c.equivalent();
    j["diagnostics"] = diagnostics(c);
    return j;
  }

  inline json certificate(EquivalenceCertificate const& c) {
    json j = header("certificate");
    j.update(certificate_body(c));
    return j;
  }

  struct OracleSummary {
    double objective = 0.0;
    double gap = 0.0;
    int iterations = 0;
    bool converged = false;
  };

  inline json solve(GLSolution const& s, std::optional<OracleSummary> const& oracle = std::nullopt) {
    json j = header("solve");
    j["lambda"] = real(s.lambda);
    j["d"] = s.s_opt.dim();
    j["k"] = s.k;
    j["status"] = to_string(s.status);
    j["objective"] = real(s.objective);
    j["chordal"] = s.chordal;
    j["w"] = s.w;
    j["nnz_offdiag"] = s.s_opt.pattern().num_edges();
    j["solve_ms"] = real(s.solve_ms);
    j["certificate_ms"] = real(s.certificate_ms);
    json comps = json::array();
    for (auto const& c : s.components) {
      json cj;
      cj["size"] = c.members.size();
      cj["first_member"] = c.members.front();
      cj["w"] = c.w;
      cj["chordal"] = c.chordal;
      cj["fill"] = c.fill;
      cj["objective"] = real(c.objective);
      cj["time_ms"] = real(c.time_ms);
      comps.push_back(std::move(cj));
    }
    j["components"] = std::move(comps);
    if (s.kkt) {
      json k;
      k["tol"] = real(s.kkt->tol);
      k["diag"] = real(s.kkt->diag);
      k["support"] = real(s.kkt->support);
      k["offsupport"] = real(s.kkt->offsupport);
      k["passed"] = s.kkt->passed();
      j["kkt"] = std::move(k);
    } else {
      j["kkt"] = nullptr;
    }
    j["certificate"] = s.certificate ? certificate_body(*s.certificate) : json(nullptr);
    if (oracle) {
      json o;
      o["objective"] = real(oracle->objective);
      o["gap"] = real(oracle->gap);
      o["iterations"] = oracle->iterations;
      o["converged"] = oracle->converged;
      j["oracle"] = std::move(o);
    } else {
      j["oracle"] = nullptr;
    }
    j["warnings"] = s.warnings;
    return j;
  }

  inline json gen_meta(GenMeta const& m) {
    json j = header("gen");
    j["seed"] = m.seed;
    j["sub_seed"] = m.sub_seed;
    j["attempts"] = m.attempts;
    j["d"] = m.d;
    j["pattern_edges"] = m.pattern_edges;
    j["embedded_edges"] = m.embedded_edges;
    j["treewidth"] = m.treewidth;
    j["max_noise"] = real(m.max_noise);
    j["min_edge"] = real(m.min_edge);
    j["recommended_lambda"] = real(m.recommended_lambda);
    json c;
    c["edge_low"] = real(m.config.edge_low);
    c["edge_high"] = real(m.config.edge_high);
    c["noise_bound"] = real(m.config.noise_bound);
    c["normalize"] = m.config.normalize;
    c["margin"] = real(m.config.margin);
    j["config"] = std::move(c);
    return j;
  }

  struct BenchRow {
    std::string name;
    int d = 0;
    int max_clique = 0;
    double lambda = 0.0;
    double solve_time_ms = 0.0;
    double certificate_time_ms = 0.0;
    std::string certificate_status;
    std::optional<double> opt_gap;
    std::optional<std::string> error;
  };

  inline json bench(std::vector<BenchRow> const& rows, int oracle_limit) {
    json j = header("bench");
    j["oracle_limit"] = oracle_limit;
    json arr = json::array();
    for (auto const& r : rows) {
      json rj;
      rj["name"] = r.name;
      rj["d"] = r.d;
      rj["max_clique"] = r.max_clique;
      rj["lambda"] = real(r.lambda);
      rj["solve_time_ms"] = real(r.solve_time_ms);
      rj["certificate_time_ms"] = real(r.certificate_time_ms);
      rj["certificate_status"] = r.certificate_status;
      rj["opt_gap"] = real(r.opt_gap);
      rj["error"] = r.error ? json(*r.error) : json(nullptr);
      arr.push_back(std::move(rj));
    }
    j["cases"] = std::move(arr);
    return j;
  }

  // Single word summarizing a certificate for tables.
  inline std::string certificate_status(EquivalenceCertificate const& c) {
    if (c.equivalent()) { return "ProvenByBound"; }
    if (!c.cond_1i || c.cond_1ii == CheckStatus::Fails) { return "Fails"; }
    return to_string(c.cond_1iii);
  }

} // namespace cglasso::report
