#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mssp/core/cost_model.hpp"
#include "mssp/simplex/simplex_opt.hpp"

namespace mssp {

struct CausalityViolation {
  std::vector<double> w;
  std::vector<double> xi;  // the offending (near-)minimizer
  std::size_t j = 0;
  double value = 0.0;  // V
};

/// Checks one W: reports the first near-minimizer ξ with ξⱼ > 1e-9 and
/// V ≤ Wⱼ + δ - 1e-9.
std::optional<CausalityViolation> check_causality_at(const CostModel& cost,
                                                     std::span<const double> w, double delta,
                                                     SimplexOptions options = {});

/// Brute-force test of absolute δ-causality: structured corners (zero,
/// one-hot, all equal) followed by `samples` uniform draws from [0, w_max]ⁿ.
std::optional<CausalityViolation> oracle_mode_causality(const CostModel& cost, double delta,
                                                        std::size_t samples, double w_max,
                                                        std::uint64_t seed,
                                                        SimplexOptions options = {});

struct NecessityWitness {
  std::vector<double> xi_bar;
  std::size_t j = 0;
  double margin = 0.0;   // ∂ⱼC(ξ̄) - (d-1)C(ξ̄)
  std::vector<double> w;  // Wᵢ = K - ∂ᵢC(ξ̄), K = 1 + maxᵢ ∂ᵢC(ξ̄)
};

/// Scans the simplex grid for the interior point and index where the
/// homogeneous-cost margin is smallest; returns the explicit W that makes
/// ξ̄ the minimizer when the margin does not exceed delta.
std::optional<NecessityWitness> necessity_witness(const CostModel& cost, double delta,
                                                  std::size_t divisions = 128);

}  // namespace mssp
