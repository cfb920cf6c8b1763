#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mssp/core/discrete.hpp"
#include "mssp/core/problem.hpp"

namespace mssp {

/// 3 + 2ξ₁ - ξ₁⁴ - ξ₂², concave; vertex costs 4 and 2.
CostModel concave_toll_cost();
/// sqrt(ξ₁² + ξ₂²), homogeneous of degree one.
CostModel euclidean_toll_cost();
/// 4 + (ξ₁ - 1/2)³; projected Hessian 3(ξ₁ - 1/2).
CostModel cubic_toll_cost();

struct SymmetricPair {
  DiscreteSsp ssp;
  std::vector<double> expected;  // (2C, 2C, 0)
};

/// Two nodes with one control each: pay C, then move to the other node or
/// to t with probability 1/2 each. Value iteration never terminates exactly
/// and label-setting leaves both labels at +inf.
SymmetricPair make_symmetric_pair(double c);

/// Nodes x₁, x₂, x₃ (ids 0, 1, 2): x₁ and x₃ exit with costs c1t, c3t;
/// x₂ has the single mode (x₁, x₃).
MsspProblem make_fork(double c1t, double c3t, const CostModel& cost);

/// Single-mode problem for one mode: x (id 0) has mode (z₁, …, zₙ) with the
/// given cost and each zⱼ (id j) exits with cost wⱼ ≥ 0.
MsspProblem make_auxiliary(const CostModel& cost, std::span<const double> w);

/// Ring of m ≥ 3 nodes; node i has modes (prev, next) with `cost` and {t}
/// with exit_costs[i].
MsspProblem make_circular_list(std::size_t m, std::vector<double> exit_costs,
                               const CostModel& cost);

struct HeadsRunGame {
  MsspProblem problem;         // x₀ … x_{K-1}, target x_K
  SelfLoopCollapse first_link;  // the collapsed self-loop at x₀
};

/// Pay C(p) per toss of a (p, 1-p) coin until K heads in a row. Node i has
/// mode (x_{i+1}, x₀); the self-loop at x₀ is collapsed to a deterministic
/// step of cost min C(p)/p.
HeadsRunGame make_heads_run_game(std::size_t k, const CostModel& cost);

struct ChainCollapse {
  std::vector<double> values;  // U(x₀) … U(x_K) = 0
  std::vector<double> link_costs;
  std::vector<double> probabilities;
};

/// Solves the heads-run game by K one-dimensional minimizations:
/// C_{i,i+1} = min_p [C(p) + (1-p)A_i]/p with A_i = U(x₀) - U(x_i).
ChainCollapse chain_collapse(std::size_t k, const CostModel& cost);

/// Stop after k_heads heads or k_tails tails in a row. Ids: x₀ = 0, the heads
/// run 1 … k_heads-1, the tails run next; target last.
MsspProblem make_run_race_game(std::size_t k_heads, std::size_t k_tails, const CostModel& cost);

/// Lattice x_{i,j} (i < K_A, j < K_B) with mode (x_{i+1,j}, x_{i,j+1});
/// the rim x_{K_A,j}, x_{i,K_B} exits deterministically at exit_cost.
/// Ids: x_{i,j} = i·K_B + j, then the K_B nodes x_{K_A,j}, then the K_A
/// nodes x_{i,K_B}; target last.
MsspProblem make_multitask(std::size_t k_a, std::size_t k_b, const CostModel& cost,
                           double exit_cost = 1e-6);

/// As make_multitask, with a third successor x_{0,0} (distraction) in every
/// lattice mode; at x_{0,0} itself the cost is restricted to the ξ_D = 0 face.
MsspProblem make_multitask_distraction(std::size_t k_a, std::size_t k_b, const CostModel& cost,
                                       double exit_cost = 1e-6);

}  // namespace mssp
