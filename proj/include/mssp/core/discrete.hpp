#pragma once

#include "mssp/core/cost_model.hpp"
#include "mssp/core/problem.hpp"

namespace mssp {

/// Removes p_ii from every control: C ← C/(1-p_ii), p_ij ← p_ij/(1-p_ii).
/// Throws std::domain_error on p_ii = 1 at a non-target node.
DiscreteSsp eliminate_self_transitions(const DiscreteSsp& ssp);

struct SelfLoopCollapse {
  double cost = 0.0;         // min over p ∈ (0,1] of [C(p) + (1-p)·carried] / p
  double probability = 1.0;  // the minimizing p
};

/// For a two-successor cost whose second successor is the owner itself,
/// with ξ = (p, 1-p). `carried` is an extra cost paid on the self-transition
/// branch (zero for a plain self-loop).
SelfLoopCollapse collapse_self_loop(const CostModel& cost, double carried = 0.0,
                                    double resolution = 1e-5);

}  // namespace mssp
