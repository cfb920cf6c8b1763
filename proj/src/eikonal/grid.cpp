#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "mssp/eikonal/eikonal.hpp"

namespace mssp {

namespace {

// Neighbour offsets (di, dj) in mode order, axis neighbour first.
constexpr std::array<std::array<int, 4>, 4> kFourModes{{
    {1, 0, 0, 1},    // (+x, +y)
    {0, 1, -1, 0},   // (+y, -x)
    {-1, 0, 0, -1},  // (-x, -y)
    {0, -1, 1, 0},   // (-y, +x)
}};

constexpr std::array<std::array<int, 4>, 8> kEightModes{{
    {1, 0, 1, 1},
    {0, 1, 1, 1},
    {0, 1, -1, 1},
    {-1, 0, -1, 1},
    {-1, 0, -1, -1},
    {0, -1, -1, -1},
    {0, -1, 1, -1},
    {1, 0, 1, -1},
}};

}  // namespace

std::string_view to_string(Stencil s) { return s == Stencil::four ? "four" : "eight"; }

std::optional<Stencil> stencil_from_string(std::string_view name) {
  if (name == "four") return Stencil::four;
  if (name == "eight") return Stencil::eight;
  return std::nullopt;
}

std::vector<double> GridSpec::position(std::size_t id) const {
  const std::size_t i = id % nodes_per_side;
  const std::size_t j = id / nodes_per_side;
  return {origin[0] + spacing * static_cast<double>(i), origin[1] + spacing * static_cast<double>(j)};
}

bool GridSpec::is_boundary(std::size_t id) const {
  if (!boundary_mask.empty()) return boundary_mask[id];
  const std::size_t i = id % nodes_per_side;
  const std::size_t j = id / nodes_per_side;
  return i == 0 || j == 0 || i + 1 == nodes_per_side || j + 1 == nodes_per_side;
}

SpeedModel SpeedModel::constant(double f) {
  if (!(f > 0.0)) throw std::invalid_argument("speed must be positive");
  SpeedModel s;
  s.scale_ = [f](std::span<const double>) { return f; };
  s.f1_ = s.f2_ = f;
  return s;
}

SpeedModel SpeedModel::field(std::function<double(std::span<const double>)> scale, double f1,
                             double f2) {
  if (!(f1 > 0.0 && f1 <= f2)) throw std::invalid_argument("speed bounds need 0 < F1 <= F2");
  SpeedModel s;
  s.scale_ = std::move(scale);
  s.f1_ = f1;
  s.f2_ = f2;
  return s;
}

SpeedModel SpeedModel::elliptic(double base, double eccentricity, double angle) {
  if (!(base > 0.0 && eccentricity >= 1.0))
    throw std::invalid_argument("elliptic speed needs base > 0 and eccentricity >= 1");
  SpeedModel s = constant(base);
  const double c = std::cos(angle), sn = std::sin(angle);
  const double e2 = eccentricity * eccentricity;
  // A = R diag(e², 1) Rᵀ
  s.metric_ = {e2 * c * c + sn * sn, (e2 - 1.0) * c * sn, (e2 - 1.0) * c * sn, e2 * sn * sn + c * c};
  s.f2_ = base * eccentricity;
  return s;
}

double SpeedModel::value(std::span<const double> x, std::span<const double> a) const {
  const double s = scale_(x);
  if (metric_.empty()) return s;
  const std::size_t d = a.size();
  double q = 0.0, norm2 = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    norm2 += a[r] * a[r];
    for (std::size_t k = 0; k < d; ++k) q += a[r] * metric_[r * d + k] * a[k];
  }
  return s * std::sqrt(q / norm2);
}

MsspProblem build_grid_mssp(const GridSpec& grid, const SpeedModel& speed,
                            const BoundaryPenalty& q) {
  const std::size_t n = grid.nodes_per_side;
  const double h = grid.spacing;
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (n < 2) throw std::invalid_argument("grid needs at least two nodes per side");
  if (grid.origin.size() != 2) throw std::invalid_argument("grids are two-dimensional");
  if (!grid.boundary_mask.empty() && grid.boundary_mask.size() != grid.node_count())
    throw std::invalid_argument("boundary mask size differs from node count");
  if (!speed.isotropic() && speed.metric().size() != 4)
    throw std::invalid_argument("grid speed metric must be 2x2");

  MsspProblem problem(grid.node_count());
  const auto t = static_cast<NodeId>(grid.node_count());
  std::size_t boundary_count = 0;

  // Costs depend only on the local speed (and the mode for anisotropic
  // speeds), so equal speeds share one cost object.
  std::map<std::pair<double, std::size_t>, CostModel> costs;
  auto cost_for = [&](double f, std::size_t mode, const std::array<int, 4>& off) -> const CostModel& {
    const std::size_t key_mode = speed.isotropic() ? 0 : mode;
    auto it = costs.find({f, key_mode});
    if (it != costs.end()) return it->second;
    CostModel c = [&] {
      if (!speed.isotropic()) {
        std::vector<double> edges{h * off[0], h * off[1], h * off[2], h * off[3]};
        return CostModel::semi_lagrangian(2, std::move(edges), f, speed.metric());
      }
      if (grid.stencil == Stencil::four) return CostModel::weighted_euclidean(h / f, {1.0, 1.0});
      return CostModel::euclidean_offset(h / f, 1.0, {0.0, 1.0});
    }();
    return costs.emplace(std::make_pair(f, key_mode), std::move(c)).first->second;
  };

  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const std::vector<double> x = grid.position(id);
    problem.set_coordinates(static_cast<NodeId>(id), x);
    if (grid.is_boundary(id)) {
      ++boundary_count;
      const double qv = q ? q(x) : 0.0;
      if (!(qv >= 0.0)) throw std::invalid_argument("boundary penalty must be nonnegative");
      problem.add_mode(static_cast<NodeId>(id), {t}, CostModel::linear({qv}));
      continue;
    }
    const auto i = static_cast<long>(id % n);
    const auto j = static_cast<long>(id / n);
    const double f = speed.scale(x);
    if (!(f >= speed.f1() && f <= speed.f2()))
      throw std::invalid_argument("sampled speed lies outside the declared [F1, F2]");
    auto node_at = [&](int di, int dj) -> NodeId {
      const long a = i + di, b = j + dj;
      if (a < 0 || b < 0 || a >= static_cast<long>(n) || b >= static_cast<long>(n))
        throw std::invalid_argument("interior node " + std::to_string(id) +
                                    " touches the domain exterior without a boundary flag");
      return static_cast<NodeId>(static_cast<std::size_t>(b) * n + static_cast<std::size_t>(a));
    };
    auto add = [&](std::size_t mode, const std::array<int, 4>& off) {
      problem.add_mode(static_cast<NodeId>(id), {node_at(off[0], off[1]), node_at(off[2], off[3])},
                       cost_for(f, mode, off));
    };
    if (grid.stencil == Stencil::four) {
      for (std::size_t m = 0; m < kFourModes.size(); ++m) add(m, kFourModes[m]);
    } else {
      for (std::size_t m = 0; m < kEightModes.size(); ++m) add(m, kEightModes[m]);
    }
  }
  if (boundary_count == 0) throw std::invalid_argument("grid has no boundary nodes");
  problem.set_kappa(grid.stencil == Stencil::four ? 8 : 16);
  return problem;
}

double max_pairwise_angle(std::span<const double> edges, std::size_t dimension) {
  const std::size_t count = edges.size() / dimension;
  double best = 0.0;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t k = 0; k < dimension; ++k) {
        const double u = edges[a * dimension + k], v = edges[b * dimension + k];
        dot += u * v;
        na += u * u;
        nb += v * v;
      }
      best = std::max(best, std::acos(std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0)));
    }
  }
  return best;
}

double max_stencil_angle(Stencil stencil) {
  double best = 0.0;
  auto scan = [&](const auto& modes) {
    for (const auto& off : modes) {
      const double e[4] = {double(off[0]), double(off[1]), double(off[2]), double(off[3])};
      best = std::max(best, max_pairwise_angle(e, 2));
    }
  };
  if (stencil == Stencil::four) scan(kFourModes);
  else scan(kEightModes);
  return best;
}

BucketWidth dial_bucket_width(double h, double beta, double f2) {
  if (!(h > 0.0 && f2 > 0.0)) throw std::invalid_argument("bucket width needs h > 0 and F2 > 0");
  BucketWidth out;
  out.upper_bound = h / f2;
  // cos β ≤ 0 from π/2 on; also guards the rounding of cos(π/2)
  out.delta = beta < std::numbers::pi / 2 - 1e-12 ? h * std::cos(beta) / f2 : 0.0;
  return out;
}

}  // namespace mssp
