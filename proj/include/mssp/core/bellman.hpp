#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mssp/core/problem.hpp"
#include "mssp/core/types.hpp"

namespace mssp {

struct BellmanResult {
  std::vector<double> values;                  // size M+1
  std::vector<std::optional<Control>> policy;  // size M+1
};

/// The minimum over the node's groups with the given successor values; ties
/// go to the first group in declared order.
std::pair<double, std::optional<Control>> bellman_update(const BellmanModel& model, NodeId node,
                                                         std::span<const double> w);

/// One application of T. `w` has M+1 entries; w[M] is ignored and the
/// output target entry is 0.
BellmanResult apply_bellman(const BellmanModel& model, std::span<const double> w);

struct ValueIterationOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
};

/// Jacobi iteration W ← T W from w0 (size M+1, or empty for all zeros).
/// Stops when ‖W_{k+1} - W_k‖∞ ≤ tol; otherwise flags converged = false.
ValueSolution value_iteration(const BellmanModel& model, std::vector<double> w0,
                              const ValueIterationOptions& options = {});

/// ‖T W - W‖∞ with ∞ - ∞ = 0.
double bellman_residual(const BellmanModel& model, std::span<const double> w);

struct Violation {
  std::optional<NodeId> node;
  std::optional<std::size_t> mode;
  std::string assumption;
  std::string message;
};

struct ValidationOptions {
  std::size_t positivity_divisions = 32;
  std::size_t random_samples = 200;
  double homogeneity_tolerance = 1e-9;
  std::uint64_t seed = 1;
};

/// Structural and sampled checks of the MSSP assumptions. Modes whose only
/// successor is the target are allowed a zero cost (exit penalties).
std::vector<Violation> validate_problem(const MsspProblem& problem,
                                        const ValidationOptions& options = {});

/// Sampled positivity: returns the smallest value found on the simplex grid
/// plus vertices (and random points for n ≥ 6).
double sampled_cost_minimum(const CostModel& cost, std::size_t divisions,
                            std::size_t random_samples, std::uint64_t seed);

/// Largest |C(aξ) - a^d C(ξ)| / |C(aξ)| over random samples.
double homogeneity_defect(const CostModel& cost, double degree, std::size_t samples,
                          std::uint64_t seed);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
  bool improper = false;  // some rollout hit the step cap; mean is then +inf
};

MonteCarloEstimate evaluate_policy_monte_carlo(const BellmanModel& model,
                                               std::span<const std::optional<Control>> policy,
                                               NodeId start, std::size_t trials,
                                               std::uint64_t seed,
                                               std::size_t step_cap = 1000000);

}  // namespace mssp
