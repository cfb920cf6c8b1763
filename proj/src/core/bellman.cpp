#include "mssp/core/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mssp/core/graph.hpp"

namespace mssp {

std::pair<double, std::optional<Control>> bellman_update(const BellmanModel& model, NodeId node,
                                                         std::span<const double> w) {
  double best = kInf;
  std::optional<Control> control;
  std::vector<double> local;
  for (std::size_t g = 0; g < model.group_count(node); ++g) {
    const auto succ = model.successors(node, g);
    local.resize(succ.size());
    for (std::size_t j = 0; j < succ.size(); ++j) local[j] = w[succ[j]];
    GroupMin r = model.minimize_group(node, g, local);
    if (r.value < best) {
      best = r.value;
      control = Control{g, std::move(r.xi)};
    }
  }
  return {best, std::move(control)};
}

BellmanResult apply_bellman(const BellmanModel& model, std::span<const double> w) {
  const std::size_t m = model.node_count();
  if (w.size() != m + 1) throw std::invalid_argument("value vector must have M+1 entries");
  std::vector<double> w_fixed(w.begin(), w.end());
  w_fixed[m] = 0.0;
  BellmanResult out;
  out.values.assign(m + 1, 0.0);
  out.policy.assign(m + 1, std::nullopt);
  for (NodeId i = 0; i < m; ++i) {
    auto [v, c] = bellman_update(model, i, w_fixed);
    out.values[i] = v;
    out.policy[i] = std::move(c);
  }
  return out;
}

double bellman_residual(const BellmanModel& model, std::span<const double> w) {
  const BellmanResult tw = apply_bellman(model, w);
  double r = 0.0;
  for (std::size_t i = 0; i < model.node_count(); ++i) r = std::max(r, value_gap(tw.values[i], w[i]));
  return r;
}

ValueSolution value_iteration(const BellmanModel& model, std::vector<double> w0,
                              const ValueIterationOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("value iteration tolerance must be > 0");
  const std::size_t m = model.node_count();
  if (w0.empty()) w0.assign(m + 1, 0.0);
  if (w0.size() != m + 1) throw std::invalid_argument("initial guess must have M+1 entries");
  w0[m] = 0.0;
  // Outside X_c the value is +inf; seeding it keeps the iteration bounded.
  const std::vector<bool> reachable = reachable_set(model);
  for (std::size_t i = 0; i < m; ++i)
    if (!reachable[i]) w0[i] = kInf;

  ValueSolution sol;
  sol.diagnostics.method = "vi";
  sol.diagnostics.converged = false;
  std::vector<double> w = std::move(w0);
  for (std::size_t k = 1; k <= options.max_iter; ++k) {
    BellmanResult next = apply_bellman(model, w);
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i) r = std::max(r, value_gap(next.values[i], w[i]));
    sol.diagnostics.residual_history.push_back(r);
    sol.diagnostics.iterations = k;
    sol.diagnostics.final_residual = r;
    w = std::move(next.values);
    sol.policy = std::move(next.policy);
    if (r <= options.tol) {
      sol.diagnostics.converged = true;
      break;
    }
  }
  sol.values = std::move(w);
  if (sol.policy.empty()) sol.policy.assign(m + 1, std::nullopt);
  return sol;
}

double sampled_cost_minimum(const CostModel& cost, std::size_t divisions,
                            std::size_t random_samples, std::uint64_t seed) {
  const std::size_t n = cost.arity();
  double lo = kInf;
  auto visit = [&](std::span<const double> xi) {
    const double v = cost.value(xi);
    lo = std::min(lo, std::isnan(v) ? -kInf : v);
  };
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    visit(e);
    e[j] = 0.0;
  }
  if (n <= 5) {
    for_each_simplex_grid_point(n, n <= 3 ? divisions : std::max<std::size_t>(divisions / 4, 2),
                                visit);
  } else {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> xi(n);
    for (std::size_t s = 0; s < random_samples; ++s) {
      double total = 0.0;
      for (double& x : xi) total += (x = expo(rng));
      for (double& x : xi) x /= total;
      visit(xi);
    }
  }
  return lo;
}

double homogeneity_defect(const CostModel& cost, double degree, std::size_t samples,
                          std::uint64_t seed) {
  const std::size_t n = cost.arity();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::vector<double> xi(n), scaled(n);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double total = 0.0;
    for (double& x : xi) total += (x = expo(rng));
    for (double& x : xi) x /= total;
    const double a = scale(rng);
    for (std::size_t j = 0; j < n; ++j) scaled[j] = a * xi[j];
    const double lhs = cost.value(scaled);
    const double rhs = std::pow(a, degree) * cost.value(xi);
    const double denom = std::max(std::fabs(lhs), 1e-300);
    worst = std::max(worst, std::fabs(lhs - rhs) / denom);
  }
  return worst;
}

std::vector<Violation> validate_problem(const MsspProblem& problem,
                                        const ValidationOptions& options) {
  std::vector<Violation> out;
  const std::size_t m = problem.node_count();
  const NodeId t = problem.target();
  auto report = [&](std::optional<NodeId> node, std::optional<std::size_t> mode,
                    std::string assumption, std::string message) {
    out.push_back({node, mode, std::move(assumption), std::move(message)});
  };

  for (NodeId i = 0; i < m; ++i) {
    const auto& modes = problem.modes(i);
    if (modes.empty()) report(i, std::nullopt, "1", "node has no modes");
    std::size_t outdegree = 0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const Mode& md = modes[k];
      outdegree += md.successors.size();
      std::set<NodeId> seen;
      for (NodeId s : md.successors) {
        if (s == i) report(i, k, "2", "mode references its owner node");
        if (!seen.insert(s).second)
          report(i, k, "2", "duplicate successor " + std::to_string(s));
      }
      if (md.cost.arity() != md.successors.size())
        report(i, k, "3", "cost arity differs from mode size");

      const bool exit_only = std::all_of(md.successors.begin(), md.successors.end(),
                                         [&](NodeId s) { return s == t; });
      const double lo =
          sampled_cost_minimum(md.cost, options.positivity_divisions, options.random_samples,
                               options.seed + i);
      if (std::isnan(lo) || lo == -kInf || std::isinf(lo)) {
        report(i, k, "6", "cost is not finite on the simplex");
      } else if (exit_only ? lo < 0.0 : lo <= 0.0) {
        std::ostringstream msg;
        msg << "sampled cost minimum " << lo << (exit_only ? " < 0" : " <= 0");
        report(i, k, "6", msg.str());
      }
      if (auto d = md.cost.homogeneity_degree()) {
        const double defect = homogeneity_defect(md.cost, *d, 100, options.seed + i);
        if (defect > options.homogeneity_tolerance) {
          std::ostringstream msg;
          msg << "declared homogeneity degree " << *d << " fails by relative " << defect;
          report(i, k, "homogeneity", msg.str());
        }
      }
    }
    if (auto kappa = problem.kappa(); kappa && outdegree > *kappa)
      report(i, std::nullopt, "7",
             "stochastic outdegree " + std::to_string(outdegree) + " exceeds kappa " +
                 std::to_string(*kappa));
  }
  return out;
}

MonteCarloEstimate evaluate_policy_monte_carlo(const BellmanModel& model,
                                               std::span<const std::optional<Control>> policy,
                                               NodeId start, std::size_t trials,
                                               std::uint64_t seed, std::size_t step_cap) {
  const NodeId t = model.target();
  if (policy.size() < model.node_count())
    throw std::invalid_argument("policy must cover every non-target node");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MonteCarloEstimate est;
  est.trials = trials;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t r = 0; r < trials; ++r) {
    NodeId x = start;
    double total = 0.0;
    std::size_t steps = 0;
    while (x != t) {
      if (steps++ >= step_cap || !policy[x]) {
        est.improper = true;
        break;
      }
      const Control& c = *policy[x];
      total += model.control_cost(x, c.mode_index, c.xi);
      const auto succ = model.successors(x, c.mode_index);
      double u = unit(rng);
      std::size_t j = 0;
      while (j + 1 < succ.size() && u >= c.xi[j]) u -= c.xi[j++];
      x = succ[j];
    }
    if (est.improper) break;
    sum += total;
    sum_sq += total * total;
  }
  if (est.improper) {
    est.mean = kInf;
    est.standard_error = kInf;
    return est;
  }
  const double n = static_cast<double>(trials);
  est.mean = sum / n;
  const double var = trials > 1 ? std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1)) : 0.0;
  est.standard_error = std::sqrt(var / n);
  return est;
}

}  // namespace mssp
