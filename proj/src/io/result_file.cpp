#include "mssp/io/result_file.hpp"

namespace mssp {

namespace {

const Json& field(const Json& obj, const char* key, const std::string& pointer) {
  if (!obj.is_object()) throw FormatError(pointer + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(pointer + ": missing field '" + key + "'");
  return *it;
}

std::size_t count(const Json& v, const std::string& pointer) {
  if (!v.is_number_unsigned()) throw FormatError(pointer + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

bool flag(const Json& v, const std::string& pointer) {
  if (!v.is_boolean()) throw FormatError(pointer + ": expected a boolean");
  return v.get<bool>();
}

std::string text(const Json& v, const std::string& pointer) {
  if (!v.is_string()) throw FormatError(pointer + ": expected a string");
  return v.get<std::string>();
}

}  // namespace

ResultFile result_from_solution(const ValueSolution& solution) {
  ResultFile r;
  const SolverDiagnostics& d = solution.diagnostics;
  r.method = d.method;
  r.values = solution.values;
  r.policy = solution.policy;
  r.iterations = d.iterations;
  r.final_residual = d.final_residual;
  r.converged = d.converged;
  if (d.method == "dial") {
    r.bucket_width = d.bucket_width;
    r.late_updates = d.late_updates;
  }
  return r;
}

Json result_to_json(const ResultFile& r) {
  Json doc;
  doc["format"] = "mssp-result";
  doc["version"] = 1;
  Json solver;
  solver["method"] = r.method;
  solver["iterations"] = r.iterations;
  solver["final_residual"] = number_to_json(r.final_residual);
  solver["converged"] = r.converged;
  if (r.bucket_width) {
    solver["bucket_width"] = number_to_json(*r.bucket_width);
    solver["late_updates"] = r.late_updates;
  }
  if (r.wall_time_seconds) solver["wall_time_seconds"] = number_to_json(*r.wall_time_seconds);
  doc["solver"] = std::move(solver);
  if (r.verification) {
    doc["verification"] = Json{{"pass", r.verification->pass},
                               {"max_residual", number_to_json(r.verification->max_residual)},
                               {"infinite_inside_reachable", r.verification->infinite_inside_reachable}};
  }
  if (r.certificate) {
    doc["certificate"] = Json{{"verdict", r.certificate->verdict},
                              {"delta", number_to_json(r.certificate->delta)},
                              {"certified_modes", r.certificate->certified_modes},
                              {"uncertified_modes", r.certificate->uncertified_modes},
                              {"exit_modes", r.certificate->exit_modes}};
  }
  if (!r.notes.empty()) doc["notes"] = r.notes;
  Json values = Json::array();
  for (double v : r.values) values.push_back(number_to_json(v));
  doc["values"] = std::move(values);
  Json policy = Json::array();
  for (const auto& c : r.policy) {
    if (!c) {
      policy.push_back(nullptr);
      continue;
    }
    Json xi = Json::array();
    for (double x : c->xi) xi.push_back(number_to_json(x));
    policy.push_back(Json{{"mode", c->mode_index}, {"xi", std::move(xi)}});
  }
  doc["policy"] = std::move(policy);
  return doc;
}

ResultFile result_from_json(const Json& doc) {
  if (field(doc, "format", "") != "mssp-result") throw FormatError("/format: expected \"mssp-result\"");
  if (field(doc, "version", "") != 1) throw FormatError("/version: unsupported version");
  ResultFile r;
  const Json& solver = field(doc, "solver", "");
  r.method = text(field(solver, "method", "/solver"), "/solver/method");
  r.iterations = count(field(solver, "iterations", "/solver"), "/solver/iterations");
  r.final_residual = number_from_json(field(solver, "final_residual", "/solver"), "/solver/final_residual");
  r.converged = flag(field(solver, "converged", "/solver"), "/solver/converged");
  if (solver.contains("bucket_width")) {
    r.bucket_width = number_from_json(solver["bucket_width"], "/solver/bucket_width");
    r.late_updates = count(field(solver, "late_updates", "/solver"), "/solver/late_updates");
  }
  if (solver.contains("wall_time_seconds"))
    r.wall_time_seconds = number_from_json(solver["wall_time_seconds"], "/solver/wall_time_seconds");
  if (auto it = doc.find("verification"); it != doc.end()) {
    VerificationSummary v;
    v.pass = flag(field(*it, "pass", "/verification"), "/verification/pass");
    v.max_residual = number_from_json(field(*it, "max_residual", "/verification"), "/verification/max_residual");
    v.infinite_inside_reachable = count(field(*it, "infinite_inside_reachable", "/verification"),
                                        "/verification/infinite_inside_reachable");
    r.verification = v;
  }
  if (auto it = doc.find("certificate"); it != doc.end()) {
    CertificateSummary c;
    c.verdict = text(field(*it, "verdict", "/certificate"), "/certificate/verdict");
    c.delta = number_from_json(field(*it, "delta", "/certificate"), "/certificate/delta");
    c.certified_modes = count(field(*it, "certified_modes", "/certificate"), "/certificate/certified_modes");
    c.uncertified_modes = count(field(*it, "uncertified_modes", "/certificate"), "/certificate/uncertified_modes");
    c.exit_modes = count(field(*it, "exit_modes", "/certificate"), "/certificate/exit_modes");
    r.certificate = c;
  }
  if (auto it = doc.find("notes"); it != doc.end()) {
    if (!it->is_array()) throw FormatError("/notes: expected an array");
    for (std::size_t k = 0; k < it->size(); ++k)
      r.notes.push_back(text((*it)[k], "/notes/" + std::to_string(k)));
  }
  const Json& values = field(doc, "values", "");
  if (!values.is_array()) throw FormatError("/values: expected an array");
  for (std::size_t k = 0; k < values.size(); ++k)
    r.values.push_back(number_from_json(values[k], "/values/" + std::to_string(k)));
  const Json& policy = field(doc, "policy", "");
  if (!policy.is_array()) throw FormatError("/policy: expected an array");
  for (std::size_t k = 0; k < policy.size(); ++k) {
    const std::string p = "/policy/" + std::to_string(k);
    if (policy[k].is_null()) {
      r.policy.emplace_back();
      continue;
    }
    Control c;
    c.mode_index = count(field(policy[k], "mode", p), p + "/mode");
    const Json& xi = field(policy[k], "xi", p);
    if (!xi.is_array()) throw FormatError(p + "/xi: expected an array");
    for (std::size_t j = 0; j < xi.size(); ++j)
      c.xi.push_back(number_from_json(xi[j], p + "/xi/" + std::to_string(j)));
    r.policy.emplace_back(std::move(c));
  }
  return r;
}

std::string write_result_text(const ResultFile& result) { return to_json_text(result_to_json(result)); }

ResultFile read_result_text(std::string_view text) { return result_from_json(parse_json_text(text)); }

}  // namespace mssp
