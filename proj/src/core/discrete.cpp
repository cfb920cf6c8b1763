#include "mssp/core/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mssp {

DiscreteSsp eliminate_self_transitions(const DiscreteSsp& ssp) {
  DiscreteSsp out(ssp.node_count());
  for (NodeId i = 0; i < ssp.node_count(); ++i) {
    for (const DiscreteControl& c : ssp.controls(i)) {
      double p_self = 0.0;
      for (std::size_t j = 0; j < c.successors.size(); ++j)
        if (c.successors[j] == i) p_self += c.probabilities[j];
      if (p_self == 0.0) {
        out.add_control(i, c);
        continue;
      }
      if (p_self >= 1.0)
        throw std::domain_error("absorbing non-target state " + std::to_string(i));
      DiscreteControl d;
      d.cost = c.cost / (1.0 - p_self);
      for (std::size_t j = 0; j < c.successors.size(); ++j) {
        if (c.successors[j] == i) continue;
        d.successors.push_back(c.successors[j]);
        d.probabilities.push_back(c.probabilities[j] / (1.0 - p_self));
      }
      out.add_control(i, std::move(d));
    }
  }
  return out;
}

SelfLoopCollapse collapse_self_loop(const CostModel& cost, double carried, double resolution) {
  if (cost.arity() != 2) throw std::invalid_argument("self-loop collapse needs a two-successor cost");
  if (!(resolution > 0.0 && resolution < 1.0))
    throw std::invalid_argument("resolution must lie in (0, 1)");
  std::vector<double> xi(2);
  auto g = [&](double p) {
    xi[0] = p;
    xi[1] = 1.0 - p;
    return (cost.value(xi) + (1.0 - p) * carried) / p;
  };

  const auto steps = static_cast<std::size_t>(std::ceil(1.0 / resolution));
  const double h = 1.0 / static_cast<double>(steps);
  SelfLoopCollapse best{g(1.0), 1.0};
  std::size_t best_k = steps;
  for (std::size_t k = steps; k >= 1; --k) {
    const double p = static_cast<double>(k) * h;
    const double v = g(p);
    if (v < best.cost) {
      best = {v, p};
      best_k = k;
    }
  }

  // golden refinement inside the neighbouring cells
  double a = std::max(h * 1e-3, static_cast<double>(best_k - 1) * h);
  double b = std::min(1.0, static_cast<double>(best_k + 1) * h);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > 1e-13) {
    if (gc <= gd) {
      b = d, d = c, gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c, c = d, gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  const double p = gc <= gd ? c : d;
  const double v = std::min(gc, gd);
  if (v < best.cost) best = {v, p};
  return best;
}

}  // namespace mssp
