#include <algorithm>
#include <string>

#include "mssp/core/bellman.hpp"
#include "mssp/solvers/solvers.hpp"

namespace mssp {

namespace {

std::string describe_cycle(const std::vector<NodeId>& cycle) {
  std::string s = "dependency graph has a cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) s += " -> ";
    s += std::to_string(cycle[i]);
  }
  return s;
}

}  // namespace

CycleError::CycleError(std::vector<NodeId> witness)
    : std::runtime_error(describe_cycle(witness)), witness_(std::move(witness)) {}

ValueSolution sweep_solve(const BellmanModel& model) {
  const DependencyGraph graph(model);
  auto order = graph.topological_order();
  if (!order) throw CycleError(graph.find_cycle());

  const std::size_t m = model.node_count();
  ValueSolution sol;
  sol.diagnostics.method = "sweep";
  sol.values.assign(m + 1, kInf);
  sol.values[m] = 0.0;
  sol.policy.assign(m + 1, std::nullopt);
  for (NodeId x : *order) {
    if (x == model.target()) continue;
    auto [v, c] = bellman_update(model, x, sol.values);
    sol.values[x] = v;
    sol.policy[x] = std::move(c);
  }
  sol.diagnostics.accept_order = std::move(*order);
  sol.diagnostics.iterations = 1;
  return sol;
}

FixedPointReport verify_fixed_point(const BellmanModel& model, std::span<const double> u,
                                    double tol) {
  const std::size_t m = model.node_count();
  if (u.size() != m + 1) throw std::invalid_argument("value vector must have M+1 entries");
  const BellmanResult tu = apply_bellman(model, u);
  const std::vector<bool> reachable = reachable_set(model);
  FixedPointReport report;
  for (NodeId i = 0; i < m; ++i) {
    if (std::isinf(u[i])) {
      if (reachable[i]) report.infinite_inside_reachable.push_back(i);
      continue;
    }
    const double gap = value_gap(tu.values[i], u[i]);
    if (!report.worst_node || gap > report.max_residual) {
      report.max_residual = gap;
      report.worst_node = i;
    }
  }
  report.pass = report.max_residual <= tol && report.infinite_inside_reachable.empty();
  return report;
}

}  // namespace mssp
