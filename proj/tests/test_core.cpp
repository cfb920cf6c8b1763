#include <doctest.h>

#include <cmath>
#include <random>

#include "mssp/core/bellman.hpp"
#include "mssp/core/discrete.hpp"
#include "mssp/core/graph.hpp"
#include "mssp/problems/examples.hpp"
#include "mssp/solvers/solvers.hpp"
#include "support.hpp"

using namespace mssp;
using doctest::Approx;

namespace {

// x₂ → x₁ → t with unit costs; ids x₁ = 0, x₂ = 1.
MsspProblem unit_chain() {
  MsspProblem p(2);
  p.add_mode(0, {2}, CostModel::linear({1.0}));
  p.add_mode(1, {0}, CostModel::linear({1.0}));
  return p;
}

bool has_assumption(const std::vector<Violation>& v, const std::string& a) {
  for (const auto& x : v)
    if (x.assumption == a) return true;
  return false;
}

}  // namespace

TEST_CASE("T on the symmetric pair") {
  const auto pair = make_symmetric_pair(1.0);
  const std::vector<double> fixed{2.0, 2.0, 0.0};
  const auto r = apply_bellman(pair.ssp, fixed);
  CHECK(r.values[0] == Approx(2.0).epsilon(1e-15));
  CHECK(r.values[1] == Approx(2.0).epsilon(1e-15));
  CHECK(r.values[2] == 0.0);

  const std::vector<double> zero(3, 0.0);
  const auto z = apply_bellman(pair.ssp, zero);
  CHECK(z.values == std::vector<double>{1.0, 1.0, 0.0});
}

TEST_CASE("T on a deterministic chain") {
  const MsspProblem p = unit_chain();
  auto once = apply_bellman(p, std::vector<double>(3, 0.0));
  CHECK(once.values == std::vector<double>{1.0, 1.0, 0.0});
  auto twice = apply_bellman(p, once.values);
  CHECK(twice.values == std::vector<double>{1.0, 2.0, 0.0});
}

TEST_CASE("T rejects a value vector of the wrong size") {
  const MsspProblem p = unit_chain();
  CHECK_THROWS_AS(apply_bellman(p, std::vector<double>(2, 0.0)), std::invalid_argument);
}

TEST_CASE("T ignores infinite successors with zero weight") {
  MsspProblem p(2);
  p.add_mode(0, {1, 2}, CostModel::linear({1.0, 4.0}));
  p.add_mode(1, {2}, CostModel::linear({1.0}));
  const std::vector<double> w{0.0, INFINITY, 0.0};
  const auto r = apply_bellman(p, w);
  CHECK(r.values[0] == Approx(4.0));
  REQUIRE(r.policy[0]);
  CHECK(r.policy[0]->xi[0] == 0.0);
}

TEST_CASE("value iteration on the symmetric pair halves the residual") {
  const auto pair = make_symmetric_pair(1.0);
  ValueIterationOptions opt;
  opt.tol = 1e-10;
  const auto s = value_iteration(pair.ssp, {}, opt);
  CHECK(s.diagnostics.converged);
  REQUIRE(s.diagnostics.residual_history.size() >= 20);
  // W_k = 2 - 2^{1-k}, so ‖W_k - W_{k-1}‖ = 2^{1-k}
  for (int k = 1; k <= 20; ++k)
    CHECK(s.diagnostics.residual_history[static_cast<std::size_t>(k - 1)] ==
          doctest::Approx(std::ldexp(1.0, 1 - k)).epsilon(1e-12));
  CHECK(std::fabs(s.values[0] - 2.0) <= 1e-9);
  CHECK(std::fabs(s.values[1] - 2.0) <= 1e-9);
}

TEST_CASE("value iteration started at the solution stops at once") {
  const auto pair = make_symmetric_pair(3.0);
  const auto s = value_iteration(pair.ssp, {6.0, 6.0, 0.0});
  CHECK(s.diagnostics.iterations == 1);
  CHECK(s.diagnostics.final_residual == 0.0);
  CHECK(s.diagnostics.converged);
}

TEST_CASE("value iteration reports non-convergence at the iteration cap") {
  const auto pair = make_symmetric_pair(1.0);
  ValueIterationOptions opt;
  opt.max_iter = 5;
  const auto s = value_iteration(pair.ssp, {}, opt);
  CHECK_FALSE(s.diagnostics.converged);
  CHECK(s.diagnostics.iterations == 5);
  CHECK(s.diagnostics.final_residual == Approx(std::ldexp(1.0, -4)));
}

TEST_CASE("value iteration fixed point satisfies the residual bound") {
  const MsspProblem p = make_circular_list(6, std::vector<double>(6, 1.0), euclidean_toll_cost());
  ValueIterationOptions opt;
  opt.tol = 1e-10;
  const auto s = value_iteration(p, {}, opt);
  CHECK(bellman_residual(p, s.values) <= 2.0 * opt.tol);
  for (std::size_t i = 0; i < 6; ++i) CHECK(s.values[i] == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validation accepts well-formed problems") {
  // the symmetric pair written as a two-successor mode with a fixed cost
  MsspProblem p(2);
  p.add_mode(0, {1, 2}, CostModel::linear({1.0, 1.0}));
  p.add_mode(1, {0, 2}, CostModel::linear({1.0, 1.0}));
  CHECK(validate_problem(p).empty());
}

TEST_CASE("validation names the failed assumption") {
  SUBCASE("duplicate successor") {
    MsspProblem p(2);
    p.add_mode(0, {1, 1}, CostModel::linear({1.0, 1.0}));
    p.add_mode(1, {2}, CostModel::linear({1.0}));
    const auto v = validate_problem(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].assumption == "2");
    CHECK(v[0].node == NodeId{0});
    CHECK(v[0].mode == std::size_t{0});
  }
  SUBCASE("mode references its owner") {
    MsspProblem p(1);
    p.add_mode(0, {0, 1}, CostModel::linear({1.0, 1.0}));
    CHECK(has_assumption(validate_problem(p), "2"));
  }
  SUBCASE("node without modes") {
    MsspProblem p(2);
    p.add_mode(0, {2}, CostModel::linear({1.0}));
    CHECK(has_assumption(validate_problem(p), "1"));
  }
  SUBCASE("nonpositive cost") {
    MsspProblem p(2);
    p.add_mode(0, {1, 2}, CostModel::linear({1.0, -0.5}));
    p.add_mode(1, {2}, CostModel::linear({1.0}));
    const auto v = validate_problem(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].assumption == "6");
  }
  SUBCASE("zero exit penalty is allowed") {
    MsspProblem p(1);
    p.add_mode(0, {1}, CostModel::linear({0.0}));
    CHECK(validate_problem(p).empty());
  }
  SUBCASE("stochastic outdegree above kappa") {
    MsspProblem p = make_circular_list(4, std::vector<double>(4, 1.0), euclidean_toll_cost());
    p.set_kappa(2);
    CHECK(has_assumption(validate_problem(p), "7"));
  }
  SUBCASE("wrong homogeneity declaration") {
    CustomCost c;
    c.arity = 2;
    c.name = "square-plus-one";
    c.value = [](std::span<const double> x) { return 1.0 + x[0] * x[0] + x[1] * x[1]; };
    MsspProblem p(2);
    p.add_mode(0, {1, 2}, CostModel::custom(c, 2.0));
    p.add_mode(1, {2}, CostModel::linear({1.0}));
    CHECK(has_assumption(validate_problem(p), "homogeneity"));
  }
}

TEST_CASE("self-transition elimination") {
  DiscreteSsp s(2);
  s.add_control(0, {1.0, {0, 2}, {0.5, 0.5}});
  s.add_control(1, {2.0, {0, 2}, {0.25, 0.75}});
  const DiscreteSsp t = eliminate_self_transitions(s);
  const auto& c0 = t.controls(0)[0];
  CHECK(c0.cost == Approx(2.0));
  for (std::size_t k = 0; k < c0.successors.size(); ++k) {
    if (c0.successors[k] == 2) CHECK(c0.probabilities[k] == Approx(1.0));
    if (c0.successors[k] == 0) CHECK(c0.probabilities[k] == 0.0);
  }
  // no self-transition: unchanged
  const auto& c1 = t.controls(1)[0];
  CHECK(c1.cost == 2.0);
  CHECK(c1.probabilities == std::vector<double>{0.25, 0.75});

  DiscreteSsp absorbing(1);
  absorbing.add_control(0, {1.0, {0}, {1.0}});
  CHECK_THROWS_AS(eliminate_self_transitions(absorbing), std::domain_error);
}

TEST_CASE("self-loop collapse") {
  SUBCASE("constant cost") {
    const auto r = collapse_self_loop(CostModel::linear({1.0, 1.0}));
    CHECK(r.cost == Approx(1.0).epsilon(1e-10));
    CHECK(r.probability == Approx(1.0));
  }
  SUBCASE("p^2 + 1") {
    const auto c = CostModel::polynomial(2, {{1.0, {2, 0}}, {1.0, {0, 0}}});
    const auto r = collapse_self_loop(c);
    CHECK(r.cost == Approx(2.0).epsilon(1e-10));
    CHECK(r.probability == Approx(1.0));
  }
  SUBCASE("euclidean") {
    const auto r = collapse_self_loop(euclidean_toll_cost());
    CHECK(r.cost == Approx(1.0).epsilon(1e-10));
    CHECK(r.probability == Approx(1.0));
  }
  SUBCASE("p^2 + 0.1 has an interior minimizer") {
    const auto c = CostModel::polynomial(2, {{1.0, {2, 0}}, {0.1, {0, 0}}});
    const auto r = collapse_self_loop(c);
    const auto [oracle, arg] = test::grid_min_pair(
        [](double p) { return p > 0 ? (p * p + 0.1) / p : INFINITY; }, 1000000);
    CHECK(r.cost == Approx(2.0 * std::sqrt(0.1)).epsilon(1e-9));
    CHECK(r.cost <= oracle + 1e-12);
    CHECK(r.probability == Approx(std::sqrt(0.1)).epsilon(1e-4));
    CHECK(arg == Approx(std::sqrt(0.1)).epsilon(1e-4));
  }
}

TEST_CASE("Monte Carlo policy evaluation") {
  SUBCASE("symmetric pair") {
    const auto pair = make_symmetric_pair(1.0);
    const auto sol = value_iteration(pair.ssp, {});
    const auto est = evaluate_policy_monte_carlo(pair.ssp, sol.policy, 0, 100000, 11);
    CHECK_FALSE(est.improper);
    CHECK(std::fabs(est.mean - 2.0) <= 3.0 * est.standard_error);
  }
  SUBCASE("deterministic chain") {
    const MsspProblem p = unit_chain();
    const auto sol = value_iteration(p, {});
    const auto est = evaluate_policy_monte_carlo(p, sol.policy, 1, 100, 3);
    CHECK(est.mean == 2.0);
    CHECK(est.standard_error == 0.0);
  }
  SUBCASE("improper policy") {
    const MsspProblem p = make_circular_list(4, std::vector<double>(4, 1.0), euclidean_toll_cost());
    std::vector<std::optional<Control>> policy(5);
    for (std::size_t i = 0; i < 4; ++i) policy[i] = Control{0, {0.5, 0.5}};
    const auto est = evaluate_policy_monte_carlo(p, policy, 0, 2, 5, 10000);
    CHECK(est.improper);
    CHECK(std::isinf(est.mean));
  }
}

TEST_CASE("dependency graph") {
  const MsspProblem ring = make_circular_list(5, std::vector<double>(5, 1.0), euclidean_toll_cost());
  DependencyGraph g(ring);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(0, 4));
  CHECK(g.has_edge(0, 5));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.successors(5).empty());
  CHECK_FALSE(g.topological_order());
  const auto cycle = g.find_cycle();
  REQUIRE(cycle.size() >= 3);
  CHECK(cycle.front() == cycle.back());
  for (std::size_t k = 0; k + 1 < cycle.size(); ++k) CHECK(g.has_edge(cycle[k], cycle[k + 1]));

  const MsspProblem chain = unit_chain();
  const auto order = DependencyGraph(chain).topological_order();
  REQUIRE(order);
  CHECK(*order == std::vector<NodeId>{2, 0, 1});
}

TEST_CASE("reachable set") {
  SUBCASE("isolated pair never reaches the target") {
    MsspProblem p(3);
    p.add_mode(0, {3}, CostModel::linear({1.0}));
    p.add_mode(1, {2}, CostModel::linear({1.0}));
    p.add_mode(2, {1}, CostModel::linear({1.0}));
    const auto xc = reachable_set(p);
    CHECK(xc == std::vector<bool>{true, false, false, true});
    for (const auto& s : {value_iteration(p, {}), dijkstra_solve(p)}) {
      CHECK(s.values[0] == 1.0);
      CHECK(std::isinf(s.values[1]));
      CHECK(std::isinf(s.values[2]));
    }
  }
  SUBCASE("ring with exits") {
    const MsspProblem ring = make_circular_list(4, std::vector<double>(4, 1.0), euclidean_toll_cost());
    const auto xc = reachable_set(ring);
    CHECK(std::all_of(xc.begin(), xc.end(), [](bool b) { return b; }));
  }
  SUBCASE("symmetric pair") {
    const auto xc = reachable_set(make_symmetric_pair(1.0).ssp);
    CHECK(xc == std::vector<bool>{true, true, true});
  }
  SUBCASE("tabulated control that can never reach the target") {
    DiscreteSsp s(2);
    s.add_control(0, {1.0, {1}, {1.0}});
    s.add_control(1, {1.0, {0}, {1.0}});
    CHECK(reachable_set(s) == std::vector<bool>{false, false, true});
  }
}

TEST_CASE("cost families: analytic gradients match finite differences") {
  const std::vector<CostModel> costs{
      CostModel::linear({3.0, 5.0, 1.0}),
      CostModel::weighted_euclidean(0.7, {1.0, 2.0, 0.5}),
      CostModel::euclidean_offset(0.3, 1.0, {0.0, 1.0}),
      concave_toll_cost(),
      cubic_toll_cost(),
      CostModel::semi_lagrangian(2, {1.0, 0.0, 0.5, 0.8}, 1.3),
      CostModel::semi_lagrangian(2, {1.0, 0.0, 0.0, 1.0}, 1.0, {2.0, 0.5, 0.5, 1.0}),
      CostModel::semi_lagrangian(3, {1, 0, 0, 0, 1, 0, 0.2, 0.3, 1}, 2.0),
      CostModel::homogenized(cubic_toll_cost()),
      CostModel::facet(CostModel::weighted_euclidean(1.0, {1.0, 3.0, 2.0}), {0, 2}),
  };
  std::mt19937_64 rng(42);
  for (const auto& c : costs) {
    CAPTURE(to_string(c.kind()));
    REQUIRE(c.has_gradient());
    for (int s = 0; s < 50; ++s) {
      const auto xi = test::random_simplex_point(c.arity(), rng, 0.02);
      std::vector<double> g(c.arity());
      c.gradient(xi, g);
      const auto fd = test::fd_gradient(c, xi);
      for (std::size_t j = 0; j < g.size(); ++j)
        CHECK(std::fabs(g[j] - fd[j]) <= 1e-5 * std::max(1.0, std::fabs(fd[j])));
    }
    if (!c.has_hessian()) continue;
    for (int s = 0; s < 20; ++s) {
      const auto xi = test::random_simplex_point(c.arity(), rng, 0.02);
      std::vector<double> h(c.arity() * c.arity());
      c.hessian(xi, h);
      const auto fd = test::fd_hessian(c, xi);
      for (std::size_t k = 0; k < h.size(); ++k)
        CHECK(std::fabs(h[k] - fd[k]) <= 1e-4 * std::max(1.0, std::fabs(fd[k])));
    }
  }
}

TEST_CASE("declared homogeneity degrees hold on samples") {
  const std::vector<CostModel> costs{
      CostModel::linear({3.0, 5.0}),
      euclidean_toll_cost(),
      CostModel::euclidean_offset(0.5, 1.0, {0.0, 1.0}),
      CostModel::semi_lagrangian(2, {1.0, 0.0, 0.0, 1.0}, 1.0, {2.0, 0.5, 0.5, 1.0}),
      CostModel::homogenized(concave_toll_cost()),
      CostModel::polynomial(2, {{1.0, {2, 0}}, {2.0, {1, 1}}}),
  };
  for (const auto& c : costs) {
    REQUIRE(c.homogeneity_degree());
    CHECK(homogeneity_defect(c, *c.homogeneity_degree(), 100, 9) <= 1e-9);
  }
  CHECK(CostModel::polynomial(2, {{1.0, {2, 0}}, {2.0, {1, 1}}}).homogeneity_degree() == 2.0);
  CHECK_FALSE(concave_toll_cost().homogeneity_degree());
}

TEST_CASE("worked cost values") {
  const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0}, mid{0.5, 0.5};
  CHECK(concave_toll_cost().value(e1) == Approx(4.0));
  CHECK(concave_toll_cost().value(e2) == Approx(2.0));
  CHECK(cubic_toll_cost().value(e1) == Approx(4.125));
  CHECK(cubic_toll_cost().value(e2) == Approx(3.875));
  CHECK(cubic_toll_cost().value(mid) == Approx(4.0));
  CHECK(euclidean_toll_cost().value(mid) == Approx(std::sqrt(0.5)));
}
