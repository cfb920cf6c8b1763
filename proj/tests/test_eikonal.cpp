#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mssp/causality/certify.hpp"
#include "mssp/core/bellman.hpp"
#include "mssp/eikonal/eikonal.hpp"
#include "mssp/simplex/simplex_opt.hpp"
#include "mssp/solvers/solvers.hpp"
#include "support.hpp"

using namespace mssp;
using doctest::Approx;

namespace {

GridSpec unit_grid(std::size_t n, Stencil s) {
  GridSpec g;
  g.nodes_per_side = n;
  g.spacing = 1.0 / static_cast<double>(n - 1);
  g.stencil = s;
  return g;
}

// [-1, 1]² with the centre node as a point source and exact data on the ring
double point_source_error(std::size_t n, Stencil s) {
  GridSpec g;
  g.nodes_per_side = n;
  g.spacing = 2.0 / static_cast<double>(n - 1);
  g.origin = {-1.0, -1.0};
  g.stencil = s;
  g.boundary_mask.assign(n * n, false);
  const std::size_t centre = (n / 2) * n + n / 2;
  for (std::size_t id = 0; id < n * n; ++id) {
    const std::size_t i = id % n, j = id / n;
    g.boundary_mask[id] = i == 0 || j == 0 || i + 1 == n || j + 1 == n || id == centre;
  }
  const auto p = build_grid_mssp(g, SpeedModel::constant(1.0),
                                 [](std::span<const double> x) { return std::hypot(x[0], x[1]); });
  const auto u = dijkstra_solve(p).values;
  double err = 0.0;
  for (std::size_t id = 0; id < n * n; ++id) {
    const auto x = g.position(id);
    err = std::max(err, std::fabs(u[id] - std::hypot(x[0], x[1])));
  }
  return err;
}

}  // namespace

TEST_CASE("four-stencil centre value") {
  GridSpec g = unit_grid(3, Stencil::four);
  g.spacing = 1.0;
  const auto p = build_grid_mssp(g, SpeedModel::constant(1.0));
  CHECK(p.modes(4).size() == 4);
  CHECK(dijkstra_solve(p).values[4] == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("eight-stencil triangle costs at the vertices") {
  const double h = 0.25, f = 2.0;
  GridSpec g = unit_grid(3, Stencil::eight);
  g.spacing = h;
  const auto p = build_grid_mssp(g, SpeedModel::constant(f));
  REQUIRE(p.modes(4).size() == 8);
  const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
  for (const auto& m : p.modes(4)) {
    CHECK(m.cost.value(e1) == Approx(h / f).epsilon(1e-14));
    CHECK(m.cost.value(e2) == Approx(h * std::sqrt(2.0) / f).epsilon(1e-14));
  }
}

TEST_CASE("right-isosceles triangle reproduces the quadrant formula") {
  const double h = 0.1, f = 1.5;
  const auto tri = CostModel::semi_lagrangian(2, {h, 0.0, 0.0, h}, f);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (int s = 0; s < 200; ++s) {
    const std::vector<double> w{u(rng), u(rng)};
    CHECK(minimize_mode(tri, w).value == Approx(isotropic_quadrant_update(w[0], w[1], h, f)).epsilon(1e-10));
  }
}

TEST_CASE("semi-Lagrangian gradient matches differences") {
  std::mt19937_64 rng(10);
  const std::vector<CostModel> costs{
      CostModel::semi_lagrangian(2, {0.1, 0.0, 0.05, 0.08}, 1.3),
      CostModel::semi_lagrangian(2, {0.1, 0.0, 0.0, 0.1}, 1.0, {4.0, 1.0, 1.0, 2.0}),
      CostModel::semi_lagrangian(3, {1, 0, 0, 0, 1, 0, 0.2, 0.2, 1}, 0.7)};
  for (const auto& c : costs) {
    std::vector<double> g(c.arity());
    for (int s = 0; s < 50; ++s) {
      const auto xi = test::random_simplex_point(c.arity(), rng, 0.01);
      c.gradient(xi, g);
      const auto fd = test::fd_gradient(c, xi);
      for (std::size_t k = 0; k < g.size(); ++k) CHECK(test::rel_err(g[k], fd[k]) <= 1e-5);
    }
  }
}

TEST_CASE("stencil angles") {
  CHECK(max_stencil_angle(Stencil::eight) == Approx(std::numbers::pi / 4));
  CHECK(max_stencil_angle(Stencil::four) == Approx(std::numbers::pi / 2));
  const std::vector<double> centre{0.0, 0.0};
  const auto mesh = make_equilateral_disc_mesh(1.0, 0.2, centre);
  CHECK(max_stencil_angle(mesh) == Approx(std::numbers::pi / 3));
  CHECK(mesh.min_edge_length() == Approx(0.2));
}

TEST_CASE("bucket width from stencil geometry") {
  const auto a = dial_bucket_width(1.0, std::numbers::pi / 4, 1.0);
  CHECK(a.delta == Approx(1.0 / std::sqrt(2.0)));
  CHECK(a.upper_bound == 1.0);
  CHECK(dial_bucket_width(1.0, std::numbers::pi / 2, 1.0).delta == 0.0);
  CHECK(dial_bucket_width(0.5, 0.0, 2.0).delta == Approx(0.25));
}

TEST_CASE("quadrant update") {
  CHECK(isotropic_quadrant_update(0.0, 0.0, 1.0, 1.0) == Approx(1.0 / std::sqrt(2.0)));
  CHECK(isotropic_quadrant_update(0.0, 1.0, 1.0, 1.0) == Approx(1.0));
  CHECK(isotropic_quadrant_update(0.0, INFINITY, 0.5, 2.0) == 0.25);
  CHECK(std::isinf(isotropic_quadrant_update(INFINITY, INFINITY, 1.0, 1.0)));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0), hs(0.01, 1.0), fs(0.5, 3.0);
  for (int s = 0; s < 10000; ++s) {
    const double h = hs(rng), f = fs(rng);
    const std::vector<double> w{u(rng), u(rng)};
    const double closed = isotropic_quadrant_update(w[0], w[1], h, f);
    const double numeric = minimize_mode(CostModel::weighted_euclidean(h / f, {1.0, 1.0}), w).value;
    REQUIRE(std::fabs(closed - numeric) <= 1e-10);
  }
}

TEST_CASE("anisotropic criterion") {
  const double h = 0.1;
  const std::vector<double> centre{0.0, 0.0};
  const auto disc = make_equilateral_disc_mesh(0.5, h, centre);
  const auto mesh = build_mesh_mssp(disc, SpeedModel::constant(1.0));
  const double delta = dial_bucket_width(h, std::numbers::pi / 3, 1.0).delta;
  const auto iso = check_anisotropic_causality(mesh, 0.99 * delta);
  CHECK(iso.pass);
  CHECK(iso.samples > 0);
  // only the linear exit modes of the rim are skipped
  CHECK(iso.skipped_modes == disc.boundary.size());

  GridSpec eight = unit_grid(11, Stencil::eight);
  CHECK(check_anisotropic_causality(build_grid_mssp(eight, SpeedModel::elliptic(1.0, 1.05, 0.0)), 0.0).pass);

  const auto four = build_grid_mssp(unit_grid(11, Stencil::four), SpeedModel::elliptic(1.0, 5.0, 0.0));
  const auto bad = check_anisotropic_causality(four, 0.0);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.witness);
  CHECK(bad.witness->xi.size() == 2);
  CHECK(bad.witness->xi[bad.witness->j] > 0.0);
  CHECK(bad.worst_margin < 0.0);

  // isotropic grids have no semi-Lagrangian modes to sample
  CHECK(check_anisotropic_causality(build_grid_mssp(eight, SpeedModel::constant(1.0)), 0.0).skipped_modes > 0);
}

TEST_CASE("acute mesh certificate and dial width") {
  const double h = 0.05;
  const std::vector<double> centre{0.0, 0.0};
  const auto p = build_mesh_mssp(make_equilateral_disc_mesh(1.0, h, centre), SpeedModel::constant(2.0));
  const auto cert = certify_problem(p);
  CHECK(cert.verdict == ProblemVerdict::dial_ok);
  CHECK(cert.delta >= h / 4.0 - 1e-6);
  const auto dial = dial_solve(p, h / 4.0);
  const auto dij = dijkstra_solve(p);
  double gap = 0.0;
  for (std::size_t i = 0; i < p.node_count(); ++i) gap = std::max(gap, value_gap(dial.values[i], dij.values[i]));
  CHECK(gap <= 1e-12);
  CHECK(dial.diagnostics.late_updates == 0);
}

TEST_CASE("point-source error does not grow under refinement") {
  for (Stencil s : {Stencil::four, Stencil::eight}) {
    const double e1 = point_source_error(21, s), e2 = point_source_error(41, s), e3 = point_source_error(81, s);
    CHECK(e2 <= e1);
    CHECK(e3 <= e2);
  }
}

TEST_CASE("maximum principle on random boundary data") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 15;
  GridSpec g = unit_grid(n, Stencil::four);
  std::vector<double> q(n * n, 0.0);
  for (double& v : q) v = u(rng);
  auto qf = [&](std::span<const double> x) {
    const auto i = static_cast<std::size_t>(std::lround(x[0] / g.spacing));
    const auto j = static_cast<std::size_t>(std::lround(x[1] / g.spacing));
    return q[j * n + i];
  };
  const auto p = build_grid_mssp(g, SpeedModel::constant(1.0), qf);
  const auto v = dijkstra_solve(p).values;
  double qmin = INFINITY;
  for (std::size_t id = 0; id < n * n; ++id)
    if (g.is_boundary(id)) qmin = std::min(qmin, q[id]);
  auto corner = [&](std::size_t id) { return (id % n == 0 || id % n == n - 1) && (id / n == 0 || id / n == n - 1); };
  for (std::size_t id = 0; id < n * n; ++id) {
    CHECK(v[id] >= qmin - 1e-12);
    if (g.is_boundary(id)) {
      CHECK(v[id] == q[id]);
      continue;
    }
    // an axis-aligned staircase to any non-corner boundary node is admissible
    double up = INFINITY;
    for (std::size_t b = 0; b < n * n; ++b) {
      if (!g.is_boundary(b) || corner(b)) continue;
      const double l1 = (std::fabs(double(id % n) - double(b % n)) + std::fabs(double(id / n) - double(b / n))) *
                        g.spacing;
      up = std::min(up, q[b] + l1);
    }
    CHECK(v[id] <= up + 1e-12);
  }
}

TEST_CASE("three-dimensional simplex stencil") {
  MeshSpec mesh;
  mesh.dimension = 3;
  mesh.vertices = {0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1};
  for (std::size_t a : {1u, 2u})
    for (std::size_t b : {3u, 4u})
      for (std::size_t c : {5u, 6u}) mesh.simplices.insert(mesh.simplices.end(), {0, a, b, c});
  mesh.boundary = {1, 2, 3, 4, 5, 6};
  const auto p = build_mesh_mssp(mesh, SpeedModel::constant(1.0));
  CHECK(p.modes(0).size() == 8);
  const auto s = dijkstra_solve(p);
  CHECK(s.values[0] == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(verify_fixed_point(p, value_iteration(p, {}).values, 1e-9).pass);
}

TEST_CASE("mesh text round trip") {
  const std::vector<double> centre{0.5, -0.5};
  const auto mesh = make_equilateral_disc_mesh(0.4, 0.1, centre);
  std::stringstream buf;
  write_mesh(buf, mesh);
  const auto back = read_mesh(buf);
  CHECK(back.dimension == mesh.dimension);
  CHECK(back.simplices == mesh.simplices);
  CHECK(back.boundary == mesh.boundary);
  REQUIRE(back.vertices.size() == mesh.vertices.size());
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) CHECK(back.vertices[k] == mesh.vertices[k]);
}

TEST_CASE("grid construction errors") {
  GridSpec g = unit_grid(5, Stencil::four);
  g.boundary_mask.assign(25, false);
  CHECK_THROWS_AS(build_grid_mssp(g, SpeedModel::constant(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(SpeedModel::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SpeedModel::elliptic(1.0, 0.5, 0.0), std::invalid_argument);
  GridSpec neg = unit_grid(5, Stencil::four);
  CHECK_THROWS_AS(build_grid_mssp(neg, SpeedModel::constant(1.0), [](std::span<const double>) { return -1.0; }),
                  std::invalid_argument);
}

TEST_CASE("equilateral disc converges at first order to the distance to the rim") {
  const std::vector<double> centre{0.0, 0.0};
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto mesh = make_equilateral_disc_mesh(1.0, h, centre);
    const auto u = dijkstra_solve(build_mesh_mssp(mesh, SpeedModel::constant(1.0))).values;
    double e = 0.0;
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      const auto x = mesh.vertex(v);
      e = std::max(e, std::fabs(u[v] - (1.0 - std::hypot(x[0], x[1]))));
    }
    err.push_back(e);
  }
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double ratio = err[k - 1] / err[k];
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);
  }
}
