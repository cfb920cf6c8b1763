#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mssp/core/cost_model.hpp"

namespace mssp {

struct SimplexOptions {
  std::size_t divisions_two = 256;    // grid points per unit for n = 2
  std::size_t divisions_three = 64;   // n = 3
  std::size_t divisions_higher = 16;  // n >= 4
  double polish_tolerance = 1e-10;
  /// Near-minimizer slack is near_slack * (1 + |V|).
  double near_slack = 1e-7;
  bool collect_near_minimizers = false;
  /// Skip closed forms and the concave shortcut; always scan and polish.
  bool force_numeric = false;
};

struct ModeMinResult {
  double value = 0.0;
  std::vector<double> xi;  // empty when value is +inf
  std::vector<std::vector<double>> near_minimizers;
};

/// C(ξ) + Σ ξ_j W_j with 0·∞ = 0.
double mode_objective(const CostModel& cost, std::span<const double> w, std::span<const double> xi);

/// min over ξ ∈ Ξₙ of C(ξ) + ξᵀW. Entries W_j = +∞ pin ξ_j to zero.
ModeMinResult minimize_mode(const CostModel& cost, std::span<const double> w,
                            const SimplexOptions& options = {});

/// minⱼ C(eⱼ) + Wⱼ. Throws std::logic_error unless the cost is declared concave.
ModeMinResult vertex_shortcut(const CostModel& cost, std::span<const double> w);

/// Plain scan of the barycentric grid with `divisions` steps per coordinate.
/// Ties go to the lexicographically smallest grid point.
ModeMinResult grid_scan(const CostModel& cost, std::span<const double> w, std::size_t divisions);

/// Indices with ξ_j > tol.
std::vector<std::size_t> support(std::span<const double> xi, double tol = 1e-12);

/// Euclidean projection onto Ξₙ.
void project_to_simplex(std::span<double> x);

/// Calls f(ξ) for every point of the grid {k/divisions} ∩ Ξₙ, in lexicographic
/// order of (k₁, …, kₙ₋₁) with ξₙ taking the remainder.
template <class F>
void for_each_simplex_grid_point(std::size_t n, std::size_t divisions, F&& f) {
  std::vector<std::size_t> k(n, 0);
  std::vector<double> xi(n, 0.0);
  const double step = 1.0 / static_cast<double>(divisions);
  if (n == 1) {
    xi[0] = 1.0;
    f(std::span<const double>(xi));
    return;
  }
  // k[0..n-2] enumerate, k[n-1] = divisions - Σ.
  std::size_t used = 0;
  while (true) {
    xi[n - 1] = static_cast<double>(divisions - used) * step;
    for (std::size_t j = 0; j + 1 < n; ++j) xi[j] = static_cast<double>(k[j]) * step;
    f(std::span<const double>(xi));
    // advance odometer from the last free coordinate
    std::size_t j = n - 1;
    while (j > 0) {
      --j;
      if (used < divisions) {
        ++k[j];
        ++used;
        break;
      }
      used -= k[j];
      k[j] = 0;
      if (j == 0) return;
    }
  }
}

}  // namespace mssp
