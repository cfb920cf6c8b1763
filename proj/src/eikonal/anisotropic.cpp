#include <cmath>
#include <variant>

#include "mssp/eikonal/eikonal.hpp"
#include "mssp/simplex/simplex_opt.hpp"

namespace mssp {

AnisotropicReport check_anisotropic_causality(const MsspProblem& problem, double delta,
                                              std::size_t divisions) {
  AnisotropicReport report;
  report.worst_margin = kInf;
  for (NodeId x = 0; x < problem.node_count(); ++x) {
    const auto& modes = problem.modes(x);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const auto* sl = std::get_if<SemiLagrangianCost>(&modes[m].cost.params());
      if (!sl) {
        ++report.skipped_modes;
        continue;
      }
      const std::size_t d = sl->dimension;
      const std::size_t n = sl->edges.size() / d;
      std::vector<double> y(d), a(d), grad_a(d);
      for_each_simplex_grid_point(n, divisions, [&](std::span<const double> xi) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < d; ++k) y[k] += xi[j] * sl->edges[j * d + k];
        double tau = 0.0;
        for (double v : y) tau += v * v;
        tau = std::sqrt(tau);
        if (tau <= 0.0) return;
        for (std::size_t k = 0; k < d; ++k) a[k] = y[k] / tau;

        // f(a) = s·sqrt(aᵀAa); ∇_a f = s·Aa / sqrt(aᵀAa)
        double q = 1.0;
        if (!sl->metric.empty()) {
          q = 0.0;
          for (std::size_t r = 0; r < d; ++r) {
            grad_a[r] = 0.0;
            for (std::size_t k = 0; k < d; ++k) grad_a[r] += sl->metric[r * d + k] * a[k];
            q += a[r] * grad_a[r];
          }
          for (double& g : grad_a) g *= sl->speed / std::sqrt(q);
        } else {
          std::fill(grad_a.begin(), grad_a.end(), 0.0);
        }
        const double f = sl->speed * std::sqrt(q);

        for (std::size_t j = 0; j < n; ++j) {
          if (xi[j] <= 0.0) continue;
          const double* e = &sl->edges[j * d];
          double dtau = 0.0;
          for (std::size_t k = 0; k < d; ++k) dtau += e[k] * a[k];
          // ∂a/∂ξⱼ = (I - aaᵀ)eⱼ / τ
          double df = 0.0;
          for (std::size_t k = 0; k < d; ++k) df += grad_a[k] * (e[k] - dtau * a[k]) / tau;
          const double margin = f * (dtau - delta * f) / tau - df;
          ++report.samples;
          if (margin < report.worst_margin) {
            report.worst_margin = margin;
            if (margin <= 0.0) {
              report.pass = false;
              report.witness =
                  AnisotropicWitness{x, m, std::vector<double>(xi.begin(), xi.end()), j};
            }
          }
        }
      });
    }
  }
  if (report.samples == 0) report.worst_margin = 0.0;
  return report;
}

}  // namespace mssp
