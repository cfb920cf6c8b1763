#include "mssp/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mssp/causality/certify.hpp"
#include "mssp/causality/oracle.hpp"
#include "mssp/core/bellman.hpp"
#include "mssp/core/graph.hpp"
#include "mssp/io/result_file.hpp"
#include "mssp/solvers/solvers.hpp"

namespace mssp::cli {

namespace {

/// Loads and validates; prints the reason and returns nullopt on failure.
std::optional<AnyProblem> load_valid(const SourceOptions& source, std::ostream& err) {
  try {
    AnyProblem problem = load_source(source);
    if (const auto* p = std::get_if<MsspProblem>(&problem)) {
      const auto violations = validate_problem(*p);
      if (!violations.empty()) {
        for (const auto& v : violations) {
          err << "invalid: assumption " << v.assumption;
          if (v.node) err << " node " << *v.node;
          if (v.mode) err << " mode " << *v.mode;
          err << ": " << v.message << '\n';
        }
        return std::nullopt;
      }
    }
    return problem;
  } catch (const FormatError& e) {
    err << "parse error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

std::optional<ProblemCertificate> certify_any(const AnyProblem& problem, std::uint64_t seed) {
  const auto* p = std::get_if<MsspProblem>(&problem);
  if (!p) return std::nullopt;
  CertifyOptions options;
  options.seed = seed;
  return certify_problem(*p, options);
}

CertificateSummary summarize(const ProblemCertificate& c) {
  CertificateSummary s;
  s.verdict = std::string(to_string(c.verdict));
  s.delta = c.delta;
  for (const auto& m : c.modes) (m.certificate.certified() ? s.certified_modes : s.uncertified_modes)++;
  s.exit_modes = c.exit_modes;
  return s;
}

bool is_unknown(const std::optional<ProblemCertificate>& c) {
  return !c || c->verdict == ProblemVerdict::unknown;
}

bool acyclic(const BellmanModel& model) { return DependencyGraph(model).topological_order().has_value(); }

std::string pick_auto(const BellmanModel& model, const std::optional<ProblemCertificate>& cert) {
  if (cert && cert->verdict == ProblemVerdict::dial_ok && cert->delta > 0.0 && std::isfinite(cert->delta))
    return "dial";
  if (cert && cert->verdict != ProblemVerdict::unknown) return "dijkstra";
  if (acyclic(model)) return "sweep";
  return "vi";
}

struct Run {
  ValueSolution solution;
  double seconds = 0.0;
};

/// Throws std::invalid_argument for an unusable method and CycleError from
/// sweep.
Run run_method(const BellmanModel& model, const std::string& method, const SolveOptions& options,
               const std::optional<ProblemCertificate>& cert) {
  const auto start = std::chrono::steady_clock::now();
  Run run;
  if (method == "vi") {
    run.solution = value_iteration(model, {}, {options.tol, options.max_iter});
  } else if (method == "dijkstra") {
    run.solution = dijkstra_solve(model);
  } else if (method == "dial") {
    double width = 0.0;
    if (options.bucket_width) {
      width = *options.bucket_width;
    } else if (cert && cert->verdict == ProblemVerdict::dial_ok && std::isfinite(cert->delta)) {
      width = cert->delta;
    } else {
      throw std::invalid_argument(
          "dial needs --bucket-width or a certificate with a positive bucket width");
    }
    run.solution = dial_solve(model, width);
  } else if (method == "sweep") {
    run.solution = sweep_solve(model);
  } else {
    throw std::invalid_argument("unknown method '" + method + "' (vi, dijkstra, dial, sweep, auto)");
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

void emit_values_csv(const std::string& path, const AnyProblem& problem, std::span<const double> values) {
  std::ostringstream csv;
  const auto* p = std::get_if<MsspProblem>(&problem);
  const bool geometric = p && p->has_coordinates();
  const std::size_t dim = geometric ? p->coordinates(0).size() : 0;
  csv << "node";
  for (std::size_t k = 0; k < dim; ++k) csv << ",x" << k;
  csv << ",value\n";
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    csv << i;
    if (geometric)
      for (double x : p->coordinates(static_cast<NodeId>(i))) csv << ',' << format_double(x);
    csv << ',' << format_double(values[i]) << '\n';
  }
  write_text_file(path, csv.str());
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text_file(path, text);
}

std::string describe_cost(const CostModel& cost) {
  std::string s(to_string(cost.kind()));
  s += "/" + std::to_string(cost.arity());
  return s;
}

}  // namespace

int cmd_generate(const SourceOptions& source, const std::string& output, std::ostream& out,
                 std::ostream& err) {
  const auto problem = load_valid(source, err);
  if (!problem) return kInvalidInput;
  try {
    write_or_print(output, write_problem_text(*problem), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}

int cmd_solve(const SourceOptions& source, const SolveOptions& options, std::ostream& out,
              std::ostream& err) {
  const auto problem = load_valid(source, err);
  if (!problem) return kInvalidInput;
  const BellmanModel& model = as_model(*problem);
  const auto cert = certify_any(*problem, options.seed);
  if (options.require_certificate && is_unknown(cert)) {
    err << "certificate: unknown; refusing to solve (--require-certificate)\n";
    return kUncertified;
  }
  const std::string method = options.method == "auto" ? pick_auto(model, cert) : options.method;

  Run run;
  try {
    run = run_method(model, method, options, cert);
  } catch (const CycleError& e) {
    err << "sweep failed: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const FixedPointReport check = verify_fixed_point(model, run.solution.values, options.verify_tol);
  ResultFile result = result_from_solution(run.solution);
  if (options.timing) result.wall_time_seconds = run.seconds;
  if (cert) result.certificate = summarize(*cert);
  result.verification = VerificationSummary{check.pass, check.max_residual,
                                            check.infinite_inside_reachable.size()};
  if (options.method == "auto") result.notes.push_back("auto selected " + method);
  if (method == "vi" && !run.solution.diagnostics.converged)
    result.notes.push_back("value iteration is not finitely convergent here: stopped after " +
                           std::to_string(run.solution.diagnostics.iterations) +
                           " iterations with update size " +
                           format_double(run.solution.diagnostics.final_residual));
  if (!check.infinite_inside_reachable.empty())
    result.notes.push_back(std::to_string(check.infinite_inside_reachable.size()) +
                           " nodes that can reach the target were left at +inf");

  try {
    write_or_print(options.output, write_result_text(result), out);
    if (!options.emit_values.empty()) emit_values_csv(options.emit_values, *problem, run.solution.values);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  err << "method " << method;
  if (method == "dial") err << " (bucket width " << format_double(run.solution.diagnostics.bucket_width) << ")";
  err << ", verification " << (check.pass ? "PASS" : "FAIL") << " (residual "
      << format_double(check.max_residual) << ")\n";
  return check.pass ? kOk : kVerificationFailed;
}

int cmd_certify(const SourceOptions& source, std::uint64_t seed, bool json, std::ostream& out,
                std::ostream& err) {
  const auto problem = load_valid(source, err);
  if (!problem) return kInvalidInput;
  const auto* p = std::get_if<MsspProblem>(&*problem);
  if (!p) {
    err << "certification applies to multimode problems; this file is a tabulated SSP\n";
    if (json) out << to_json_text(Json{{"verdict", "unknown"}});
    else out << "verdict: unknown\n";
    return kUncertified;
  }
  CertifyOptions options;
  options.seed = seed;
  const ProblemCertificate cert = certify_problem(*p, options);

  // one row per distinct cost object
  struct Row {
    std::string cost;
    std::size_t count = 0;
    NodeId first_node = 0;
    std::size_t first_mode = 0;
    const ModeCertificate* c = nullptr;
  };
  std::vector<Row> rows;
  std::map<const void*, std::size_t> seen;
  for (const auto& m : cert.modes) {
    const CostModel& cost = p->mode(m.node, m.mode).cost;
    auto [it, fresh] = seen.try_emplace(cost.identity(), rows.size());
    if (fresh) rows.push_back({describe_cost(cost), 0, m.node, m.mode, &m.certificate});
    ++rows[it->second].count;
  }
  const CertificateSummary s = summarize(cert);

  if (json) {
    Json doc;
    doc["verdict"] = s.verdict;
    doc["delta"] = number_to_json(s.delta);
    doc["certified_modes"] = s.certified_modes;
    doc["uncertified_modes"] = s.uncertified_modes;
    doc["exit_modes"] = s.exit_modes;
    Json costs = Json::array();
    for (const Row& r : rows) {
      Json row{{"cost", r.cost},
               {"modes", r.count},
               {"first", Json{{"node", r.first_node}, {"mode", r.first_mode}}},
               {"verdict", std::string(to_string(r.c->verdict))},
               {"rigor", std::string(to_string(r.c->rigor))},
               {"delta", number_to_json(r.c->delta)}};
      if (!r.c->certified()) row["reason"] = r.c->reason;
      costs.push_back(std::move(row));
    }
    doc["costs"] = std::move(costs);
    out << to_json_text(doc);
  } else {
    out << "verdict: " << s.verdict << '\n';
    out << "delta: " << format_double(s.delta) << '\n';
    out << "modes: " << s.certified_modes << " certified, " << s.uncertified_modes
        << " uncertified, " << s.exit_modes << " exit\n\n";
    out << std::left << std::setw(24) << "cost" << std::setw(8) << "modes" << std::setw(24)
        << "verdict" << std::setw(12) << "rigor" << "delta / reason\n";
    for (const Row& r : rows) {
      out << std::left << std::setw(24) << r.cost << std::setw(8) << r.count << std::setw(24)
          << to_string(r.c->verdict) << std::setw(12) << to_string(r.c->rigor)
          << (r.c->certified() ? format_double(r.c->delta) : r.c->reason) << '\n';
    }
  }
  return cert.verdict == ProblemVerdict::unknown ? kUncertified : kOk;
}

int cmd_compare(const SourceOptions& source, const CompareOptions& options, std::ostream& out,
                std::ostream& err) {
  const auto problem = load_valid(source, err);
  if (!problem) return kInvalidInput;
  const BellmanModel& model = as_model(*problem);
  const auto cert = certify_any(*problem, options.solve.seed);

  std::vector<std::string> names;
  std::vector<Run> runs;
  for (const std::string& requested : options.methods) {
    const std::string method = requested == "auto" ? pick_auto(model, cert) : requested;
    try {
      runs.push_back(run_method(model, method, options.solve, cert));
      names.push_back(method);
    } catch (const CycleError& e) {
      out << method << ": failed (" << e.what() << ")\n";
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  out << std::left << std::setw(10) << "method" << std::setw(14) << "seconds" << "iterations\n";
  for (std::size_t a = 0; a < runs.size(); ++a) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.6f", runs[a].seconds);
    out << std::left << std::setw(10) << names[a] << std::setw(14) << secs
        << runs[a].solution.diagnostics.iterations << '\n';
  }
  out << '\n' << std::left << std::setw(22) << "pair" << std::setw(26) << "max |dU|" << "status\n";
  bool mismatch = false;
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      double gap = 0.0;
      const auto& u = runs[a].solution.values;
      const auto& v = runs[b].solution.values;
      for (std::size_t i = 0; i < u.size(); ++i) gap = std::max(gap, value_gap(u[i], v[i]));
      const bool ok = gap <= options.threshold;
      mismatch = mismatch || !ok;
      out << std::left << std::setw(22) << (names[a] + " vs " + names[b]) << std::setw(26)
          << format_double(gap) << (ok ? "ok" : "MISMATCH") << '\n';
    }
  }
  return mismatch || runs.size() != options.methods.size() ? kVerificationFailed : kOk;
}

int cmd_oracle(const SourceOptions& source, const OracleOptions& options, std::ostream& out,
               std::ostream& err) {
  std::vector<std::pair<std::string, CostModel>> costs;
  if (!options.cost.empty()) {
    try {
      costs.emplace_back(options.cost, named_cost(options.cost, options.arity, source.c));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  } else {
    const auto problem = load_valid(source, err);
    if (!problem) return kInvalidInput;
    const auto* p = std::get_if<MsspProblem>(&*problem);
    if (!p) {
      err << "the oracle applies to multimode problems\n";
      return kInvalidInput;
    }
    std::map<const void*, bool> seen;
    for (std::size_t i = 0; i < p->node_count(); ++i) {
      for (std::size_t g = 0; g < p->modes(static_cast<NodeId>(i)).size(); ++g) {
        const Mode& m = p->mode(static_cast<NodeId>(i), g);
        if (m.successors.size() == 1 && m.successors[0] == p->target()) continue;
        if (!seen.emplace(m.cost.identity(), true).second) continue;
        costs.emplace_back("node " + std::to_string(i) + " mode " + std::to_string(g), m.cost);
      }
    }
  }
  bool violated = false;
  for (const auto& [name, cost] : costs) {
    const auto v = oracle_mode_causality(cost, options.delta, options.samples, options.w_max, options.seed);
    if (!v) {
      out << name << ": none (" << options.samples << " samples, delta "
          << format_double(options.delta) << ")\n";
      continue;
    }
    violated = true;
    out << name << ": VIOLATION at j=" << v->j << " V=" << format_double(v->value) << " W=[";
    for (std::size_t k = 0; k < v->w.size(); ++k) out << (k ? ", " : "") << format_double(v->w[k]);
    out << "] xi=[";
    for (std::size_t k = 0; k < v->xi.size(); ++k) out << (k ? ", " : "") << format_double(v->xi[k]);
    out << "]\n";
  }
  return violated ? kVerificationFailed : kOk;
}

int cmd_verify(const SourceOptions& source, const std::string& result_path, double tol,
               std::ostream& out, std::ostream& err) {
  const auto problem = load_valid(source, err);
  if (!problem) return kInvalidInput;
  ResultFile result;
  try {
    result = read_result_text(read_text_file(result_path));
  } catch (const FormatError& e) {
    err << "parse error: " << result_path << ": " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  const BellmanModel& model = as_model(*problem);
  if (result.values.size() != model.node_count() + 1) {
    err << "result has " << result.values.size() << " values, problem needs "
        << model.node_count() + 1 << '\n';
    return kInvalidInput;
  }
  const FixedPointReport r = verify_fixed_point(model, result.values, tol);
  out << "verification " << (r.pass ? "PASS" : "FAIL") << ": max residual "
      << format_double(r.max_residual);
  if (r.worst_node) out << " at node " << *r.worst_node;
  out << ", " << r.infinite_inside_reachable.size() << " reachable nodes at +inf\n";
  return r.pass ? kOk : kVerificationFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multimode stochastic shortest path solver and causality certifier", "mssp"};
  app.require_subcommand(1);

  SourceOptions source;
  auto add_source = [&](CLI::App* sub) {
    sub->add_option("problem", source.problem_path, "Problem file");
    sub->add_option("--generate", source.generate,
                    "Generator name[:args]: symmetric-pair, fork, auxiliary, circular, heads-run, "
                    "run-race, multitask, distraction");
    sub->add_option("--cost", source.cost, "Generator cost: linear, euclidean, concave, cubic");
    sub->add_option("--C", source.c, "Cost constant for generators");
    sub->add_option("--eikonal-grid", source.eikonal_grid, "Unit-square grid with N nodes per side");
    sub->add_option("--mesh", source.mesh_path, "Mesh file");
    sub->add_option("--stencil", source.stencil, "four or eight")->check(CLI::IsMember({"four", "eight"}));
    sub->add_option("--f", source.f, "Speed");
    sub->add_option("--eccentricity", source.eccentricity, "Elliptic speed eccentricity");
    sub->add_option("--angle", source.angle, "Elliptic speed major-axis angle");
  };

  SolveOptions solve;
  auto add_solve = [&](CLI::App* sub) {
    sub->add_option("--tol", solve.tol, "Value iteration tolerance");
    sub->add_option("--max-iter", solve.max_iter, "Value iteration iteration cap");
    sub->add_option("--bucket-width", solve.bucket_width, "Dial bucket width");
    sub->add_option("--seed", solve.seed, "Seed for sampled certification");
    sub->add_option("--verify-tol", solve.verify_tol, "Fixed-point residual tolerance");
  };

  std::string output;
  auto* gen = app.add_subcommand("generate", "Write a problem file");
  add_source(gen);
  gen->add_option("-o,--output", output, "Output path (default stdout)");

  auto* sol = app.add_subcommand("solve", "Solve and verify");
  add_source(sol);
  add_solve(sol);
  sol->add_option("--method", solve.method, "vi, dijkstra, dial, sweep or auto")
      ->check(CLI::IsMember({"vi", "dijkstra", "dial", "sweep", "auto"}));
  sol->add_option("-o,--output", solve.output, "Result path (default stdout)");
  sol->add_option("--emit-values", solve.emit_values, "CSV of node, coordinates, value");
  sol->add_flag("--require-certificate", solve.require_certificate, "Exit 4 if certification is unknown");
  sol->add_flag("--timing", solve.timing, "Record wall time in the result");

  bool json = false;
  auto* cer = app.add_subcommand("certify", "Certify causality");
  add_source(cer);
  cer->add_option("--seed", solve.seed, "Sampling seed");
  cer->add_flag("--json", json, "Machine-readable output");

  CompareOptions compare;
  std::string methods = "vi,dijkstra";
  auto* cmp = app.add_subcommand("compare", "Run several methods and diff their values");
  add_source(cmp);
  add_solve(cmp);
  cmp->add_option("--methods", methods, "Comma-separated methods");
  cmp->add_option("--threshold", compare.threshold, "Largest acceptable max |dU|");

  OracleOptions oracle;
  auto* ora = app.add_subcommand("oracle", "Brute-force causality oracle");
  add_source(ora);
  ora->add_option("--delta", oracle.delta, "Requested delta");
  ora->add_option("--samples", oracle.samples, "Random W samples");
  ora->add_option("--w-max", oracle.w_max, "W range [0, w-max]");
  ora->add_option("--seed", oracle.seed, "Sampling seed");
  ora->add_option("--named-cost", oracle.cost, "Oracle one named cost instead of a problem");
  ora->add_option("--arity", oracle.arity, "Arity for --named-cost");

  std::string result_path;
  auto* ver = app.add_subcommand("verify", "Check a result file against a problem");
  add_source(ver);
  ver->add_option("--result", result_path, "Result file")->required();
  ver->add_option("--tol", solve.verify_tol, "Fixed-point residual tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsage;
  }

  if (gen->parsed()) return cmd_generate(source, output, out, err);
  if (sol->parsed()) return cmd_solve(source, solve, out, err);
  if (cer->parsed()) return cmd_certify(source, solve.seed, json, out, err);
  if (cmp->parsed()) {
    compare.methods.clear();
    std::stringstream ss(methods);
    std::string m;
    while (std::getline(ss, m, ',')) compare.methods.push_back(m);
    compare.solve = solve;
    return cmd_compare(source, compare, out, err);
  }
  if (ora->parsed()) return cmd_oracle(source, oracle, out, err);
  return cmd_verify(source, result_path, solve.verify_tol, out, err);
}

}  // namespace mssp::cli
