#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "mssp/eikonal/eikonal.hpp"

namespace mssp {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

void check_simplex(const MeshSpec& mesh, std::size_t s) {
  const std::size_t d = mesh.dimension;
  const std::size_t* ids = &mesh.simplices[s * (d + 1)];
  Eigen::MatrixXd edges(d, d);
  const auto base = mesh.vertex(ids[0]);
  for (std::size_t c = 0; c < d; ++c) {
    const auto v = mesh.vertex(ids[c + 1]);
    for (std::size_t r = 0; r < d; ++r)
      edges(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r] - base[r];
  }
  double scale = 1.0;
  for (std::size_t c = 0; c < d; ++c) scale *= edges.col(static_cast<Eigen::Index>(c)).norm();
  if (!(std::fabs(edges.determinant()) > 1e-12 * scale))
    throw std::invalid_argument("degenerate simplex " + std::to_string(s));
}

}  // namespace

double MeshSpec::min_edge_length() const {
  double h = kInf;
  const std::size_t k = dimension + 1;
  for (std::size_t s = 0; s < simplex_count(); ++s)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        h = std::min(h, distance(vertex(simplices[s * k + a]), vertex(simplices[s * k + b])));
  return h;
}

MsspProblem build_mesh_mssp(const MeshSpec& mesh, const SpeedModel& speed,
                            const BoundaryPenalty& q) {
  const std::size_t d = mesh.dimension;
  if (d < 1 || mesh.vertices.size() % d != 0) throw std::invalid_argument("malformed vertex array");
  if (mesh.simplices.size() % (d + 1) != 0) throw std::invalid_argument("malformed simplex array");
  if (mesh.boundary.empty()) throw std::invalid_argument("mesh has no boundary vertices");
  if (!speed.isotropic() && speed.metric().size() != d * d)
    throw std::invalid_argument("speed metric dimension differs from the mesh");

  const std::size_t nv = mesh.vertex_count();
  std::vector<std::vector<std::size_t>> fan(nv);
  for (std::size_t s = 0; s < mesh.simplex_count(); ++s) {
    check_simplex(mesh, s);
    for (std::size_t a = 0; a <= d; ++a) {
      const std::size_t v = mesh.simplices[s * (d + 1) + a];
      if (v >= nv) throw std::invalid_argument("simplex references a missing vertex");
      fan[v].push_back(s);
    }
  }

  std::vector<std::optional<double>> exit_cost(nv);
  for (std::size_t b = 0; b < mesh.boundary.size(); ++b) {
    const std::size_t v = mesh.boundary[b];
    if (v >= nv) throw std::invalid_argument("boundary references a missing vertex");
    double value = q ? q(mesh.vertex(v))
                     : (b < mesh.boundary_values.size() ? mesh.boundary_values[b] : 0.0);
    if (!(value >= 0.0)) throw std::invalid_argument("boundary penalty must be nonnegative");
    exit_cost[v] = value;
  }

  MsspProblem problem(nv);
  const auto t = static_cast<NodeId>(nv);
  std::size_t kappa = 1;
  for (std::size_t v = 0; v < nv; ++v) {
    const auto x = mesh.vertex(v);
    problem.set_coordinates(static_cast<NodeId>(v), std::vector<double>(x.begin(), x.end()));
    if (exit_cost[v]) {
      problem.add_mode(static_cast<NodeId>(v), {t}, CostModel::linear({*exit_cost[v]}));
      continue;
    }
    if (fan[v].empty())
      throw std::invalid_argument("interior vertex " + std::to_string(v) + " has an empty fan");
    const double f = speed.scale(x);
    if (!(f >= speed.f1() && f <= speed.f2()))
      throw std::invalid_argument("sampled speed lies outside the declared [F1, F2]");
    for (std::size_t s : fan[v]) {
      std::vector<NodeId> succ;
      std::vector<double> edges;
      for (std::size_t a = 0; a <= d; ++a) {
        const std::size_t z = mesh.simplices[s * (d + 1) + a];
        if (z == v) continue;
        succ.push_back(static_cast<NodeId>(z));
        const auto p = mesh.vertex(z);
        for (std::size_t k = 0; k < d; ++k) edges.push_back(p[k] - x[k]);
      }
      problem.add_mode(static_cast<NodeId>(v), std::move(succ),
                       CostModel::semi_lagrangian(d, std::move(edges), f, speed.metric()));
    }
    kappa = std::max(kappa, fan[v].size() * d);
  }
  problem.set_kappa(kappa);
  return problem;
}

MeshSpec make_equilateral_disc_mesh(double radius, double h, std::span<const double> center) {
  if (!(radius > 0.0 && h > 0.0)) throw std::invalid_argument("disc mesh needs radius, h > 0");
  if (center.size() != 2) throw std::invalid_argument("disc mesh center must be 2-D");
  const double s3 = std::sqrt(3.0) / 2.0;
  const long jmax = static_cast<long>(std::ceil(radius / (h * s3))) + 1;
  const long imax = static_cast<long>(std::ceil(radius / h)) + jmax + 1;

  std::map<std::pair<long, long>, std::size_t> index;
  MeshSpec mesh;
  mesh.dimension = 2;
  auto pos = [&](long i, long j) {
    return std::array<double, 2>{center[0] + h * (static_cast<double>(i) + 0.5 * static_cast<double>(j)),
                                 center[1] + h * s3 * static_cast<double>(j)};
  };
  auto inside = [&](long i, long j) {
    const auto p = pos(i, j);
    return std::hypot(p[0] - center[0], p[1] - center[1]) <= radius + 1e-9 * h;
  };
  auto id = [&](long i, long j) {
    auto [it, fresh] = index.try_emplace({i, j}, mesh.vertex_count());
    if (fresh) {
      const auto p = pos(i, j);
      mesh.vertices.push_back(p[0]);
      mesh.vertices.push_back(p[1]);
    }
    return it->second;
  };

  for (long j = -jmax; j <= jmax; ++j) {
    for (long i = -imax; i <= imax; ++i) {
      if (inside(i, j) && inside(i + 1, j) && inside(i, j + 1)) {
        const std::size_t a = id(i, j), b = id(i + 1, j), c = id(i, j + 1);
        mesh.simplices.insert(mesh.simplices.end(), {a, b, c});
      }
      if (inside(i + 1, j) && inside(i + 1, j + 1) && inside(i, j + 1)) {
        const std::size_t a = id(i + 1, j), b = id(i + 1, j + 1), c = id(i, j + 1);
        mesh.simplices.insert(mesh.simplices.end(), {a, b, c});
      }
    }
  }
  std::vector<std::size_t> incidence(mesh.vertex_count(), 0);
  for (std::size_t v : mesh.simplices) ++incidence[v];
  for (std::size_t v = 0; v < incidence.size(); ++v) {
    if (incidence[v] < 6) {
      mesh.boundary.push_back(v);
      mesh.boundary_values.push_back(0.0);
    }
  }
  return mesh;
}

MeshSpec read_mesh(std::istream& in) {
  std::string word_v, word_s, word_b;
  std::size_t nv = 0, ns = 0, nb = 0;
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("mesh: missing header");
  {
    std::istringstream hs(header);
    if (!(hs >> word_v >> nv >> word_s >> ns >> word_b >> nb) || word_v != "vertices" ||
        word_s != "simplices" || word_b != "boundary")
      throw std::runtime_error("mesh: header must read 'vertices V simplices S boundary B'");
  }
  MeshSpec mesh;
  std::string line;
  std::size_t line_no = 1;
  auto next_line = [&](const char* what) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return;
    }
    throw std::runtime_error(std::string("mesh: unexpected end of file while reading ") + what);
  };
  auto fail = [&](const char* what) {
    throw std::runtime_error("mesh line " + std::to_string(line_no) + ": " + what);
  };
  for (std::size_t v = 0; v < nv; ++v) {
    next_line("vertices");
    std::istringstream ls(line);
    std::vector<double> coords;
    double c;
    while (ls >> c) coords.push_back(c);
    if (v == 0) mesh.dimension = coords.size();
    if (coords.empty() || coords.size() != mesh.dimension) fail("bad vertex coordinates");
    mesh.vertices.insert(mesh.vertices.end(), coords.begin(), coords.end());
  }
  for (std::size_t s = 0; s < ns; ++s) {
    next_line("simplices");
    std::istringstream ls(line);
    std::size_t id;
    std::size_t count = 0;
    while (ls >> id) {
      mesh.simplices.push_back(id);
      ++count;
    }
    if (count != mesh.dimension + 1) fail("simplex needs dimension+1 vertex ids");
  }
  for (std::size_t b = 0; b < nb; ++b) {
    next_line("boundary");
    std::istringstream ls(line);
    std::size_t id;
    double q;
    if (!(ls >> id >> q)) fail("boundary line needs 'index q'");
    mesh.boundary.push_back(id);
    mesh.boundary_values.push_back(q);
  }
  return mesh;
}

void write_mesh(std::ostream& out, const MeshSpec& mesh) {
  out << "vertices " << mesh.vertex_count() << " simplices " << mesh.simplex_count()
      << " boundary " << mesh.boundary.size() << '\n';
  out.precision(17);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const auto p = mesh.vertex(v);
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? " " : "") << p[k];
    out << '\n';
  }
  const std::size_t k = mesh.dimension + 1;
  for (std::size_t s = 0; s < mesh.simplex_count(); ++s) {
    for (std::size_t a = 0; a < k; ++a) out << (a ? " " : "") << mesh.simplices[s * k + a];
    out << '\n';
  }
  for (std::size_t b = 0; b < mesh.boundary.size(); ++b)
    out << mesh.boundary[b] << ' '
        << (b < mesh.boundary_values.size() ? mesh.boundary_values[b] : 0.0) << '\n';
}

double max_stencil_angle(const MeshSpec& mesh) {
  const std::size_t d = mesh.dimension;
  std::vector<bool> boundary(mesh.vertex_count(), false);
  for (std::size_t v : mesh.boundary) boundary[v] = true;
  double best = 0.0;
  std::vector<double> edges;
  for (std::size_t s = 0; s < mesh.simplex_count(); ++s) {
    for (std::size_t a = 0; a <= d; ++a) {
      const std::size_t v = mesh.simplices[s * (d + 1) + a];
      if (boundary[v]) continue;
      edges.clear();
      const auto x = mesh.vertex(v);
      for (std::size_t b = 0; b <= d; ++b) {
        if (b == a) continue;
        const auto z = mesh.vertex(mesh.simplices[s * (d + 1) + b]);
        for (std::size_t k = 0; k < d; ++k) edges.push_back(z[k] - x[k]);
      }
      best = std::max(best, max_pairwise_angle(edges, d));
    }
  }
  return best;
}

}  // namespace mssp
