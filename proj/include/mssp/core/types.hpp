#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mssp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Index of a node. Non-target nodes are 0..M-1; the target is M.
using NodeId = std::uint32_t;

/// Tolerance on the barycentric sum of a control.
inline constexpr double kSimplexSumTolerance = 1e-12;

/// A control: a mode (or tabulated control, for discrete problems) plus the
/// probability vector over that mode's successors.
struct Control {
  std::size_t mode_index = 0;
  std::vector<double> xi;

  bool operator==(const Control&) const = default;
};

struct SolverDiagnostics {
  std::string method;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  bool converged = true;
  std::vector<double> residual_history;
  std::vector<NodeId> accept_order;
  // Dial only.
  double bucket_width = 0.0;
  std::size_t late_updates = 0;
  std::size_t buckets_processed = 0;
};

struct ValueSolution {
  std::vector<double> values;                 // size M+1, values.back() == 0
  std::vector<std::optional<Control>> policy;  // size M+1, target has none
  SolverDiagnostics diagnostics;
};

/// ∞ - ∞ is treated as 0 so that unreachable entries compare equal.
inline double value_gap(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) return 0.0;
  return std::fabs(a - b);
}

}  // namespace mssp
