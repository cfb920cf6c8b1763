#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "mssp/core/bellman.hpp"
#include "mssp/eikonal/eikonal.hpp"
#include "mssp/problems/examples.hpp"
#include "mssp/solvers/solvers.hpp"
#include "support.hpp"

using namespace mssp;
using doctest::Approx;

namespace {

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, value_gap(a[i], b[i]));
  return g;
}

ValueSolution tight_vi(const BellmanModel& m) {
  ValueIterationOptions opt;
  opt.tol = 1e-13;
  return value_iteration(m, {}, opt);
}

}  // namespace

TEST_CASE("dijkstra leaves the symmetric pair at +inf") {
  const auto pair = make_symmetric_pair(1.0);
  const auto s = dijkstra_solve(pair.ssp);
  CHECK(std::isinf(s.values[0]));
  CHECK(std::isinf(s.values[1]));
  CHECK(s.values[2] == 0.0);
  const auto report = verify_fixed_point(pair.ssp, s.values, 1e-8);
  CHECK_FALSE(report.pass);
  CHECK(report.infinite_inside_reachable == std::vector<NodeId>{0, 1});
}

TEST_CASE("dijkstra on the fork") {
  const MsspProblem p = make_fork(1.0, 1.0, euclidean_toll_cost());
  const auto s = dijkstra_solve(p);
  // oracle: 1-D scan of sqrt(t² + (1-t)²) + t + (1-t)
  const auto [oracle, arg] = test::grid_min_pair(
      [](double t) { return std::sqrt(t * t + (1 - t) * (1 - t)) + 1.0; });
  CHECK(s.values[1] == Approx(oracle).epsilon(1e-9));
  CHECK(s.values[1] == Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const auto& order = s.diagnostics.accept_order;
  REQUIRE(order.size() == 4);
  CHECK(order[0] == 3);
  CHECK(((order[1] == 0 && order[2] == 2) || (order[1] == 2 && order[2] == 0)));
  CHECK(order[3] == 1);
  CHECK(arg == Approx(0.5).epsilon(1e-4));

  const auto sweep = sweep_solve(p);
  CHECK(max_gap(sweep.values, s.values) <= 1e-12);
}

TEST_CASE("dijkstra on the ring with unit exits") {
  const MsspProblem p = make_circular_list(4, std::vector<double>(4, 1.0), euclidean_toll_cost());
  const auto s = dijkstra_solve(p);
  const auto vi = tight_vi(p);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.values[i] == Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(vi.values[i] - s.values[i]) <= 1e-12);
  }
}

TEST_CASE("dijkstra accept order is non-decreasing in value") {
  const MsspProblem p = make_circular_list(8, {0.1, 10, 10, 10, 3, 10, 10, 10}, euclidean_toll_cost());
  const auto s = dijkstra_solve(p);
  const auto& order = s.diagnostics.accept_order;
  for (std::size_t k = 1; k < order.size(); ++k) CHECK(s.values[order[k - 1]] <= s.values[order[k]]);
  CHECK(max_gap(s.values, tight_vi(p).values) <= 1e-8);
}

TEST_CASE("dial on a deterministic graph equals a textbook dijkstra") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> cost(0.5, 3.0);
  std::uniform_int_distribution<int> pick(0, 39);
  const std::size_t m = 40;
  MsspProblem p(m);
  std::vector<std::vector<std::pair<NodeId, double>>> rev(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (int e = 0; e < 3; ++e) {
      NodeId to = static_cast<NodeId>(pick(rng));
      if (e == 0 && i % 5 == 0) to = static_cast<NodeId>(m);
      if (to == i) continue;
      const double c = cost(rng);
      p.add_mode(static_cast<NodeId>(i), {to}, CostModel::linear({c}));
      rev[to].push_back({static_cast<NodeId>(i), c});
    }
    if (p.modes(static_cast<NodeId>(i)).empty()) {
      p.add_mode(static_cast<NodeId>(i), {static_cast<NodeId>(m)}, CostModel::linear({5.0}));
      rev[m].push_back({static_cast<NodeId>(i), 5.0});
    }
  }
  // reference: plain Dijkstra on the reversed graph
  std::vector<double> d(m + 1, INFINITY);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
  d[m] = 0.0;
  q.push({0.0, static_cast<NodeId>(m)});
  while (!q.empty()) {
    auto [dv, v] = q.top();
    q.pop();
    if (dv > d[v]) continue;
    for (auto [u, c] : rev[v])
      if (dv + c < d[u]) q.push({d[u] = dv + c, u});
  }
  const auto dial = dial_solve(p, 0.5);
  const auto dij = dijkstra_solve(p);
  CHECK(dial.values == d);
  CHECK(dij.values == d);
  CHECK(dial.diagnostics.late_updates == 0);
}

TEST_CASE("dial rejects nonpositive widths") {
  const MsspProblem p = make_fork(1.0, 2.0, CostModel::linear({1.0, 1.0}));
  CHECK_THROWS_WITH_AS(dial_solve(p, 0.0), doctest::Contains("use dijkstra_solve"), std::invalid_argument);
  CHECK_THROWS_AS(dial_solve(p, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(dial_solve(p, 1e-300), std::overflow_error);
}

TEST_CASE("dial with a certified width matches dijkstra on grids") {
  GridSpec grid;
  grid.nodes_per_side = 21;
  grid.spacing = 1.0 / 20.0;
  grid.stencil = Stencil::eight;
  const MsspProblem p = build_grid_mssp(grid, SpeedModel::constant(1.0));
  const double delta = grid.spacing / std::sqrt(2.0);
  const auto dial = dial_solve(p, delta);
  const auto dij = dijkstra_solve(p);
  CHECK(max_gap(dial.values, dij.values) <= 1e-12);
  CHECK(dial.diagnostics.late_updates == 0);
  CHECK(dial.diagnostics.bucket_width == delta);
}

TEST_CASE("dial with an oversized width records late updates") {
  // x₁ exits at 1; x₂ steps to x₁ for 0.1 or exits at 10, so U(x₂) - U(x₁) = 0.1 < 0.5
  MsspProblem p(2);
  p.add_mode(0, {2}, CostModel::linear({1.0}));
  p.add_mode(1, {0}, CostModel::linear({0.1}));
  p.add_mode(1, {2}, CostModel::linear({10.0}));
  const auto dial = dial_solve(p, 0.5);
  CHECK(dial.diagnostics.late_updates > 0);
  CHECK(dial_solve(p, 0.09).diagnostics.late_updates == 0);
}

TEST_CASE("sweep on explicitly causal problems") {
  const MsspProblem p = make_multitask(3, 2, CostModel::linear({1.0, 2.0}));
  const auto s = sweep_solve(p);
  const auto vi = tight_vi(p);
  CHECK(max_gap(s.values, vi.values) <= 1e-10);
  CHECK(verify_fixed_point(p, s.values, 1e-12).pass);
}

TEST_CASE("sweep names a cycle on the ring") {
  const MsspProblem p = make_circular_list(5, std::vector<double>(5, 1.0), euclidean_toll_cost());
  try {
    sweep_solve(p);
    FAIL("expected a cycle");
  } catch (const CycleError& e) {
    const auto& w = e.witness();
    REQUIRE(w.size() >= 3);
    CHECK(w.front() == w.back());
    CHECK(std::string(e.what()).find("->") != std::string::npos);
  }
}

TEST_CASE("full-mode gating fixes labels too early where facet gating does not") {
  // point source in the centre of a 5x5 grid with an expensive outer ring:
  // each quadrant next to the source also contains a corner node that is
  // only resolved through that very quadrant
  GridSpec grid;
  grid.nodes_per_side = 5;
  grid.spacing = 1.0;
  grid.boundary_mask.assign(25, false);
  // outer ring boundary, plus the centre as a point source
  for (std::size_t id = 0; id < 25; ++id) {
    const std::size_t i = id % 5, j = id / 5;
    grid.boundary_mask[id] = i == 0 || j == 0 || i == 4 || j == 4 || id == 12;
  }
  const MsspProblem p = build_grid_mssp(grid, SpeedModel::constant(1.0), [](std::span<const double> x) {
    return (x[0] == 2.0 && x[1] == 2.0) ? 0.0 : 100.0;
  });
  LabelSettingOptions full;
  full.gating = Gating::full_mode;
  const auto stalled = dijkstra_solve(p, full);
  const auto facet = dijkstra_solve(p);
  CHECK(facet.values[7] == Approx(1.0));
  CHECK(facet.values[6] == Approx(1.0 + 1.0 / std::sqrt(2.0)));
  CHECK(stalled.values[6] > 50.0);
  CHECK(verify_fixed_point(p, facet.values, 1e-10).pass);
  CHECK_FALSE(verify_fixed_point(p, stalled.values, 1e-10).pass);
}

TEST_CASE("verify_fixed_point on value iteration output") {
  const auto pair = make_symmetric_pair(1.0);
  const auto s = value_iteration(pair.ssp, {});
  CHECK(verify_fixed_point(pair.ssp, s.values, 2e-10).pass);
  const auto bad = std::vector<double>{1.5, 2.0, 0.0};
  const auto r = verify_fixed_point(pair.ssp, bad, 1e-8);
  CHECK_FALSE(r.pass);
  // T(1.5, 2, 0) = (2, 1.75, 0)
  CHECK(r.worst_node == NodeId{0});
  CHECK(r.max_residual == Approx(0.5));
}

TEST_CASE("nodes outside the reachable set stay infinite in every solver") {
  MsspProblem p(4);
  p.add_mode(0, {4}, CostModel::linear({1.0}));
  p.add_mode(1, {0}, CostModel::linear({1.0}));
  p.add_mode(2, {3}, CostModel::linear({1.0}));
  p.add_mode(3, {2}, CostModel::linear({1.0}));
  for (const auto& s : {value_iteration(p, {}), dijkstra_solve(p), dial_solve(p, 0.5)}) {
    CHECK(s.values[1] == 2.0);
    CHECK(std::isinf(s.values[2]));
    CHECK(std::isinf(s.values[3]));
  }
  CHECK(verify_fixed_point(p, dijkstra_solve(p).values, 1e-12).pass);
}
