#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mssp/core/problem.hpp"

namespace mssp {

enum class Stencil { four, eight };

std::string_view to_string(Stencil s);
std::optional<Stencil> stencil_from_string(std::string_view name);

/// Uniform square 2-D grid with N×N nodes; node (i, j) sits at
/// origin + h·(i, j) and has id j·N + i.
struct GridSpec {
  std::size_t nodes_per_side = 0;
  double spacing = 0.0;
  std::vector<double> origin{0.0, 0.0};
  Stencil stencil = Stencil::four;
  /// Size N² if given; empty means the outer ring.
  std::vector<bool> boundary_mask;

  std::size_t node_count() const { return nodes_per_side * nodes_per_side; }
  std::vector<double> position(std::size_t id) const;
  bool is_boundary(std::size_t id) const;
};

/// f(x, a) = s(x)·sqrt(aᵀAa) with a constant symmetric positive definite A
/// (empty: identity, the isotropic case). Declared bounds F₁ ≤ f ≤ F₂.
class SpeedModel {
 public:
  static SpeedModel constant(double f);
  static SpeedModel field(std::function<double(std::span<const double>)> s, double f1, double f2);
  /// s·‖Da‖ with D = R(angle)·diag(eccentricity, 1)·R(angle)ᵀ; F₁ = s, F₂ = s·eccentricity.
  static SpeedModel elliptic(double base, double eccentricity, double angle);

  bool isotropic() const { return metric_.empty(); }
  double scale(std::span<const double> x) const { return scale_(x); }
  /// Row-major d×d, empty when isotropic.
  const std::vector<double>& metric() const { return metric_; }
  double value(std::span<const double> x, std::span<const double> a) const;
  double f1() const { return f1_; }
  double f2() const { return f2_; }

 private:
  std::function<double(std::span<const double>)> scale_;
  std::vector<double> metric_;
  double f1_ = 1.0;
  double f2_ = 1.0;
};

using BoundaryPenalty = std::function<double(std::span<const double>)>;

/// Boundary nodes get one exit mode {t} with cost q(x); interior nodes get the
/// four quadrant or eight triangle modes of the stencil.
MsspProblem build_grid_mssp(const GridSpec& grid, const SpeedModel& speed,
                            const BoundaryPenalty& q = {});

struct MeshSpec {
  std::size_t dimension = 2;
  std::vector<double> vertices;           // dimension entries per vertex
  std::vector<std::size_t> simplices;     // dimension+1 vertex ids per simplex
  std::vector<std::size_t> boundary;      // boundary vertex ids
  std::vector<double> boundary_values;    // q per boundary vertex, same order

  std::size_t vertex_count() const { return vertices.size() / dimension; }
  std::size_t simplex_count() const { return simplices.size() / (dimension + 1); }
  std::span<const double> vertex(std::size_t v) const {
    return {vertices.data() + v * dimension, dimension};
  }
  double min_edge_length() const;
};

/// One mode per incident simplex; cost τ(ξ)/f(x, a_ξ) with τ = ‖Σ ξⱼ(zⱼ - x)‖.
/// If q is given it overrides boundary_values.
MsspProblem build_mesh_mssp(const MeshSpec& mesh, const SpeedModel& speed,
                            const BoundaryPenalty& q = {});

/// Equilateral triangulation (side h) of the lattice points within `radius`
/// of `center`; vertices with an incomplete hexagonal fan are boundary.
MeshSpec make_equilateral_disc_mesh(double radius, double h, std::span<const double> center);

MeshSpec read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const MeshSpec& mesh);

/// Largest angle between two edge vectors of one stencil mode.
double max_stencil_angle(const MeshSpec& mesh);
double max_stencil_angle(Stencil stencil);
double max_pairwise_angle(std::span<const double> edges, std::size_t dimension);

struct BucketWidth {
  double delta = 0.0;        // h cos β / F₂, or 0 if β ≥ π/2
  double upper_bound = 0.0;  // h / F₂
};
BucketWidth dial_bucket_width(double h, double beta, double f2);

/// min over ξ ∈ Ξ₂ of (h/f)·sqrt(ξ₁² + ξ₂²) + ξ₁W₁ + ξ₂W₂.
double isotropic_quadrant_update(double w1, double w2, double h, double f);

struct AnisotropicWitness {
  NodeId node = 0;
  std::size_t mode = 0;
  std::vector<double> xi;
  std::size_t j = 0;
};

struct AnisotropicReport {
  bool pass = true;
  double worst_margin = 0.0;  // min over samples of rhs - lhs
  std::optional<AnisotropicWitness> witness;
  std::size_t samples = 0;
  std::size_t skipped_modes = 0;  // modes whose cost is not semi-Lagrangian
};

/// Samples ∂f/∂ξⱼ < f·(∂τ/∂ξⱼ - δf)/τ over every semi-Lagrangian mode and
/// simplex grid point with ξⱼ > 0. ∂f/∂ξⱼ uses the chain rule through a_ξ.
AnisotropicReport check_anisotropic_causality(const MsspProblem& problem, double delta,
                                              std::size_t divisions = 64);

}  // namespace mssp
