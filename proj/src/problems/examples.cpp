#include "mssp/problems/examples.hpp"

#include <stdexcept>
#include <string>

#include "mssp/simplex/simplex_opt.hpp"

namespace mssp {

CostModel concave_toll_cost() {
  return CostModel::polynomial(
      2, {{3.0, {0, 0}}, {2.0, {1, 0}}, {-1.0, {4, 0}}, {-1.0, {0, 2}}}, /*concave=*/true);
}

CostModel euclidean_toll_cost() { return CostModel::euclidean(2); }

CostModel cubic_toll_cost() {
  // 4 + (ξ₁ - 1/2)³ expanded
  return CostModel::polynomial(2, {{3.875, {0, 0}}, {0.75, {1, 0}}, {-1.5, {2, 0}}, {1.0, {3, 0}}});
}

SymmetricPair make_symmetric_pair(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("cost must be positive");
  DiscreteSsp ssp(2);
  ssp.add_control(0, {c, {1, 2}, {0.5, 0.5}});
  ssp.add_control(1, {c, {0, 2}, {0.5, 0.5}});
  return {std::move(ssp), {2.0 * c, 2.0 * c, 0.0}};
}

MsspProblem make_fork(double c1t, double c3t, const CostModel& cost) {
  MsspProblem p(3);
  p.add_mode(0, {3}, CostModel::linear({c1t}));
  p.add_mode(1, {0, 2}, cost);
  p.add_mode(2, {3}, CostModel::linear({c3t}));
  p.set_label(0, "x1");
  p.set_label(1, "x2");
  p.set_label(2, "x3");
  p.set_label(3, "t");
  return p;
}

MsspProblem make_auxiliary(const CostModel& cost, std::span<const double> w) {
  const std::size_t n = cost.arity();
  if (w.size() != n) throw std::invalid_argument("need one exit cost per successor");
  MsspProblem p(n + 1);
  const auto t = static_cast<NodeId>(n + 1);
  std::vector<NodeId> succ;
  for (std::size_t j = 1; j <= n; ++j) succ.push_back(static_cast<NodeId>(j));
  p.add_mode(0, succ, cost);
  for (std::size_t j = 1; j <= n; ++j) {
    if (!(w[j - 1] >= 0.0)) throw std::invalid_argument("exit costs must be nonnegative");
    p.add_mode(static_cast<NodeId>(j), {t}, CostModel::linear({w[j - 1]}));
  }
  return p;
}

MsspProblem make_circular_list(std::size_t m, std::vector<double> exit_costs,
                               const CostModel& cost) {
  if (m < 3) throw std::invalid_argument("circular list needs at least three nodes");
  if (exit_costs.size() != m) throw std::invalid_argument("need one exit cost per node");
  MsspProblem p(m);
  const auto t = static_cast<NodeId>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto prev = static_cast<NodeId>((i + m - 1) % m);
    const auto next = static_cast<NodeId>((i + 1) % m);
    p.add_mode(static_cast<NodeId>(i), {prev, next}, cost);
    p.add_mode(static_cast<NodeId>(i), {t}, CostModel::linear({exit_costs[i]}));
    p.set_label(static_cast<NodeId>(i), "x" + std::to_string(i + 1));
  }
  p.set_label(t, "t");
  p.set_kappa(3);
  return p;
}

HeadsRunGame make_heads_run_game(std::size_t k, const CostModel& cost) {
  if (k < 1) throw std::invalid_argument("need at least one head");
  MsspProblem p(k);
  const SelfLoopCollapse first = collapse_self_loop(cost);
  p.add_mode(0, {static_cast<NodeId>(1)}, CostModel::linear({first.cost}));
  for (std::size_t i = 1; i < k; ++i)
    p.add_mode(static_cast<NodeId>(i), {static_cast<NodeId>(i + 1), 0}, cost);
  for (std::size_t i = 0; i <= k; ++i)
    p.set_label(static_cast<NodeId>(i), i == k ? "t" : "x" + std::to_string(i));
  return {std::move(p), first};
}

ChainCollapse chain_collapse(std::size_t k, const CostModel& cost) {
  ChainCollapse out;
  double carried = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const SelfLoopCollapse link = collapse_self_loop(cost, carried);
    out.link_costs.push_back(link.cost);
    out.probabilities.push_back(link.probability);
    carried += link.cost;
  }
  out.values.assign(k + 1, 0.0);
  for (std::size_t i = k; i-- > 0;) out.values[i] = out.values[i + 1] + out.link_costs[i];
  return out;
}

MsspProblem make_run_race_game(std::size_t k_heads, std::size_t k_tails, const CostModel& cost) {
  if (k_heads < 1 || k_tails < 1) throw std::invalid_argument("run lengths must be at least 1");
  if (cost.arity() != 2) throw std::invalid_argument("coin cost must have two outcomes");
  const std::size_t m = k_heads + k_tails - 1;
  const auto t = static_cast<NodeId>(m);
  MsspProblem p(m);
  auto heads = [&](std::size_t i) -> NodeId {
    if (i == 0) return 0;
    return i == k_heads ? t : static_cast<NodeId>(i);
  };
  auto tails = [&](std::size_t i) -> NodeId {
    if (i == 0) return 0;
    return i == k_tails ? t : static_cast<NodeId>(k_heads - 1 + i);
  };
  auto add = [&](NodeId node, NodeId on_heads, NodeId on_tails) {
    if (on_heads == on_tails) {
      // both outcomes end the game: only the cheapest coin matters
      const std::vector<double> zero{0.0, 0.0};
      p.add_mode(node, {on_heads}, CostModel::linear({minimize_mode(cost, zero).value}));
    } else {
      p.add_mode(node, {on_heads, on_tails}, cost);
    }
  };
  add(0, heads(1), tails(1));
  p.set_label(0, "x0");
  for (std::size_t i = 1; i < k_heads; ++i) {
    add(heads(i), heads(i + 1), tails(1));
    p.set_label(heads(i), "h" + std::to_string(i));
  }
  for (std::size_t i = 1; i < k_tails; ++i) {
    add(tails(i), heads(1), tails(i + 1));
    p.set_label(tails(i), "t" + std::to_string(i));
  }
  p.set_label(t, "t");
  return p;
}

namespace {

MsspProblem multitask_impl(std::size_t k_a, std::size_t k_b, const CostModel& cost,
                           double exit_cost, bool distraction) {
  if (k_a < 1 || k_b < 1) throw std::invalid_argument("milestone counts must be at least 1");
  if (!(exit_cost >= 0.0)) throw std::invalid_argument("exit cost must be nonnegative");
  const std::size_t lattice = k_a * k_b;
  const std::size_t m = lattice + k_a + k_b;
  const auto t = static_cast<NodeId>(m);
  MsspProblem p(m);
  auto id = [&](std::size_t i, std::size_t j) -> NodeId {
    if (i == k_a) return static_cast<NodeId>(lattice + j);
    if (j == k_b) return static_cast<NodeId>(lattice + k_b + i);
    return static_cast<NodeId>(i * k_b + j);
  };
  const CostModel origin_cost = distraction ? CostModel::facet(cost, {0, 1}) : cost;
  for (std::size_t i = 0; i < k_a; ++i) {
    for (std::size_t j = 0; j < k_b; ++j) {
      const NodeId x = id(i, j);
      if (distraction && x != id(0, 0)) {
        p.add_mode(x, {id(i + 1, j), id(i, j + 1), id(0, 0)}, cost);
      } else {
        p.add_mode(x, {id(i + 1, j), id(i, j + 1)}, origin_cost);
      }
      p.set_label(x, "x" + std::to_string(i) + "," + std::to_string(j));
    }
  }
  const CostModel exit = CostModel::linear({exit_cost});
  for (std::size_t j = 0; j < k_b; ++j) {
    p.add_mode(id(k_a, j), {t}, exit);
    p.set_label(id(k_a, j), "x" + std::to_string(k_a) + "," + std::to_string(j));
  }
  for (std::size_t i = 0; i < k_a; ++i) {
    p.add_mode(id(i, k_b), {t}, exit);
    p.set_label(id(i, k_b), "x" + std::to_string(i) + "," + std::to_string(k_b));
  }
  p.set_label(t, "t");
  return p;
}

}  // namespace

MsspProblem make_multitask(std::size_t k_a, std::size_t k_b, const CostModel& cost,
                           double exit_cost) {
  if (cost.arity() != 2) throw std::invalid_argument("multitask cost must be over two activities");
  return multitask_impl(k_a, k_b, cost, exit_cost, false);
}

MsspProblem make_multitask_distraction(std::size_t k_a, std::size_t k_b, const CostModel& cost,
                                       double exit_cost) {
  if (cost.arity() != 3) throw std::invalid_argument("distraction cost must be over three outcomes");
  return multitask_impl(k_a, k_b, cost, exit_cost, true);
}

}  // namespace mssp
