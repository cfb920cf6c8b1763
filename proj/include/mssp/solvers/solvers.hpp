#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mssp/core/graph.hpp"
#include "mssp/core/problem.hpp"
#include "mssp/core/types.hpp"

namespace mssp {

/// Which controls a label-setting update may use once a successor becomes
/// permanent.
enum class Gating {
  /// Any control whose support lies in the permanent set: the mode is
  /// minimized with +inf in place of every tentative successor.
  facet,
  /// Only modes whose successors are all permanent.
  full_mode,
};

struct LabelSettingOptions {
  Gating gating = Gating::facet;
};

/// Dijkstra-like method: binary heap with lazy deletion, ties to the lowest id.
/// Nodes never accepted keep +inf.
ValueSolution dijkstra_solve(const BellmanModel& model, const LabelSettingOptions& options = {});

/// Dial-like method with buckets of width delta > 0; a whole bucket is
/// accepted at once. diagnostics.late_updates counts label improvements that
/// land in an already accepted bucket (zero on delta-causal problems).
ValueSolution dial_solve(const BellmanModel& model, double delta,
                         const LabelSettingOptions& options = {});

class CycleError : public std::runtime_error {
 public:
  CycleError(std::vector<NodeId> witness);
  const std::vector<NodeId>& witness() const { return witness_; }

 private:
  std::vector<NodeId> witness_;
};

/// One update per node in topological order; throws CycleError if the union
/// dependency graph is cyclic.
ValueSolution sweep_solve(const BellmanModel& model);

struct FixedPointReport {
  bool pass = false;
  double max_residual = 0.0;
  std::optional<NodeId> worst_node;
  /// Nodes of X_c that carry +inf.
  std::vector<NodeId> infinite_inside_reachable;
};

/// One application of T: pass iff ‖TU - U‖∞ over finite entries is at most
/// tol and no +inf sits inside X_c.
FixedPointReport verify_fixed_point(const BellmanModel& model, std::span<const double> u,
                                    double tol);

}  // namespace mssp
