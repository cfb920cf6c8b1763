#include "mssp/causality/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mssp/core/types.hpp"

namespace mssp {

std::optional<CausalityViolation> check_causality_at(const CostModel& cost,
                                                     std::span<const double> w, double delta,
                                                     SimplexOptions options) {
  options.collect_near_minimizers = true;
  const ModeMinResult r = minimize_mode(cost, w, options);
  if (std::isinf(r.value)) return std::nullopt;
  for (const auto& xi : r.near_minimizers) {
    for (std::size_t j = 0; j < xi.size(); ++j) {
      if (xi[j] > 1e-9 && r.value <= w[j] + delta - 1e-9)
        return CausalityViolation{std::vector<double>(w.begin(), w.end()), xi, j, r.value};
    }
  }
  return std::nullopt;
}

std::optional<CausalityViolation> oracle_mode_causality(const CostModel& cost, double delta,
                                                        std::size_t samples, double w_max,
                                                        std::uint64_t seed,
                                                        SimplexOptions options) {
  if (samples < 1) throw std::invalid_argument("oracle needs at least one sample");
  if (!(w_max > 0.0)) throw std::invalid_argument("oracle needs w_max > 0");
  const std::size_t n = cost.arity();
  std::vector<double> w(n, 0.0);

  if (auto v = check_causality_at(cost, w, delta, options)) return v;
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(w.begin(), w.end(), 0.0);
    w[k] = w_max;
    if (auto v = check_causality_at(cost, w, delta, options)) return v;
  }
  std::fill(w.begin(), w.end(), 0.5 * w_max);
  if (auto v = check_causality_at(cost, w, delta, options)) return v;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, w_max);
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& x : w) x = unit(rng);
    if (auto v = check_causality_at(cost, w, delta, options)) return v;
  }
  return std::nullopt;
}

std::optional<NecessityWitness> necessity_witness(const CostModel& cost, double delta,
                                                  std::size_t divisions) {
  const auto degree = cost.homogeneity_degree();
  if (!degree || !cost.has_gradient())
    throw std::invalid_argument("metadata required: homogeneity degree and gradient");
  const std::size_t n = cost.arity();
  std::vector<double> g(n);
  std::optional<NecessityWitness> best;
  for_each_simplex_grid_point(n, divisions, [&](std::span<const double> xi) {
    // interior points only: Ξ*(W) = {ξ̄} needs the stationarity conditions
    // to hold with equality in every coordinate
    if (std::any_of(xi.begin(), xi.end(), [](double x) { return x <= 0.0; })) return;
    cost.gradient(xi, g);
    const double c = cost.value(xi);
    for (std::size_t j = 0; j < n; ++j) {
      const double margin = g[j] - (*degree - 1.0) * c;
      if (!best || margin < best->margin)
        best = NecessityWitness{std::vector<double>(xi.begin(), xi.end()), j, margin, {}};
    }
  });
  if (!best || best->margin > delta) return std::nullopt;
  cost.gradient(best->xi_bar, g);
  const double k = 1.0 + *std::max_element(g.begin(), g.end());
  best->w.resize(n);
  for (std::size_t i = 0; i < n; ++i) best->w[i] = k - g[i];
  return best;
}

}  // namespace mssp
