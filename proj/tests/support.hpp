#pragma once

// Shared test helpers: independent finite-difference and grid oracles that do
// not go through the library's own minimizers.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "mssp/core/cost_model.hpp"

namespace mssp::test {

inline std::vector<double> random_simplex_point(std::size_t n, std::mt19937_64& rng,
                                                double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> xi(n);
  double s = 0.0;
  for (double& x : xi) s += (x = e(rng));
  for (double& x : xi) x = floor + (1.0 - floor * static_cast<double>(n)) * x / s;
  return xi;
}

/// Central differences of C along every coordinate axis of ℝⁿ.
inline std::vector<double> fd_gradient(const CostModel& c, std::span<const double> xi, double h = 1e-6) {
  std::vector<double> g(xi.size());
  std::vector<double> p(xi.begin(), xi.end());
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double x0 = p[j];
    p[j] = x0 + h;
    const double up = c.value(p);
    p[j] = x0 - h;
    const double down = c.value(p);
    p[j] = x0;
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Central differences of the analytic gradient; row-major n×n.
inline std::vector<double> fd_hessian(const CostModel& c, std::span<const double> xi, double h = 1e-6) {
  const std::size_t n = xi.size();
  std::vector<double> hess(n * n), up(n), down(n);
  std::vector<double> p(xi.begin(), xi.end());
  for (std::size_t k = 0; k < n; ++k) {
    const double x0 = p[k];
    p[k] = x0 + h;
    c.gradient(p, up);
    p[k] = x0 - h;
    c.gradient(p, down);
    p[k] = x0;
    for (std::size_t j = 0; j < n; ++j) hess[j * n + k] = (up[j] - down[j]) / (2.0 * h);
  }
  return hess;
}

/// Brute-force minimum of C(ξ) + ξᵀW over ξ = (t, 1-t), t on a uniform grid.
inline std::pair<double, double> grid_min_pair(const std::function<double(double)>& f,
                                               std::size_t steps = 100000) {
  double best = INFINITY, arg = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    const double v = f(t);
    if (v < best) {
      best = v;
      arg = t;
    }
  }
  return {best, arg};
}

/// Brute-force minimum over a simplex lattice with `divisions` steps.
inline double grid_min_simplex(const CostModel& c, std::span<const double> w, std::size_t divisions) {
  const std::size_t n = w.size();
  std::vector<std::size_t> k(n, 0);
  std::vector<double> xi(n);
  double best = INFINITY;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t left) {
    if (j + 1 == n) {
      k[j] = left;
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        xi[i] = static_cast<double>(k[i]) / static_cast<double>(divisions);
        if (xi[i] > 0.0) obj += xi[i] * w[i];
      }
      best = std::min(best, obj + c.value(xi));
      return;
    }
    for (std::size_t a = 0; a <= left; ++a) {
      k[j] = a;
      rec(j + 1, left - a);
    }
  };
  rec(0, divisions);
  return best;
}

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace mssp::test
