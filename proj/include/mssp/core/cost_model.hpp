#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mssp {

enum class CostKind {
  linear,
  weighted_euclidean,
  euclidean_offset,
  polynomial,
  semi_lagrangian,
  homogenized,
  facet,
  custom,
};

std::string_view to_string(CostKind kind);
std::optional<CostKind> cost_kind_from_string(std::string_view name);

class CostModel;

/// C(ξ) = Σ c_j ξ_j.
struct LinearCost {
  std::vector<double> coefficients;
};

/// C(ξ) = s · sqrt(Σ w_j ξ_j²).
struct WeightedEuclideanCost {
  double scale = 1.0;
  std::vector<double> weights;
};

/// C(ξ) = s · sqrt(a (Σ ξ_j)² + Σ w_j ξ_j²).
/// The eight-neighbour grid cost is s = h/f, a = 1, w = (0, 1).
struct EuclideanOffsetCost {
  double scale = 1.0;
  double offset = 1.0;
  std::vector<double> weights;
};

struct PolynomialTerm {
  double coefficient = 0.0;
  std::vector<int> exponents;
};

/// C(ξ) = Σ_k c_k Π_j ξ_j^{e_kj}.
struct PolynomialCost {
  std::size_t arity = 0;
  std::vector<PolynomialTerm> terms;
};

/// Travel time along a straight segment to a stencil facet:
///   y = Σ ξ_j e_j,  C(ξ) = |y| / f(a),  a = y/|y|,  f(a) = speed · sqrt(aᵀ A a).
/// `edges` holds the n edge vectors e_j = z_j - x back to back (dim each);
/// an empty `metric` means A = I.
struct SemiLagrangianCost {
  std::size_t dimension = 0;
  std::vector<double> edges;
  double speed = 1.0;
  std::vector<double> metric;
};

/// C̃(ξ) = |ξ|₁ · C(ξ/|ξ|₁). Same values on the simplex, homogeneous of degree 1.
struct HomogenizedCost {
  std::shared_ptr<const CostModel> base;
};

/// Restriction of a cost to the face spanned by the `kept` coordinates; the
/// remaining coordinates of the base are pinned to zero.
struct FacetCost {
  std::shared_ptr<const CostModel> base;
  std::vector<std::size_t> kept;
};

struct CustomCost {
  std::size_t arity = 0;
  std::string name;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::function<void(std::span<const double>, std::span<double>)> hessian;
};

using CostParams = std::variant<LinearCost, WeightedEuclideanCost, EuclideanOffsetCost,
                                PolynomialCost, SemiLagrangianCost, HomogenizedCost,
                                FacetCost, CustomCost>;

/// Per-mode transition cost C(ξ) over the simplex Ξₙ.
///
/// Immutable and cheap to copy: copies share the same parameter block, so
/// `identity()` can be used to cache per-cost work (certificates, for one).
class CostModel {
 public:
  static CostModel linear(std::vector<double> coefficients);
  static CostModel weighted_euclidean(double scale, std::vector<double> weights);
  static CostModel euclidean(std::size_t arity, double scale = 1.0);
  static CostModel euclidean_offset(double scale, double offset, std::vector<double> weights);
  static CostModel polynomial(std::size_t arity, std::vector<PolynomialTerm> terms,
                              bool concave = false);
  static CostModel semi_lagrangian(std::size_t dimension, std::vector<double> edges,
                                   double speed, std::vector<double> metric = {});
  static CostModel homogenized(const CostModel& base);
  static CostModel facet(const CostModel& base, std::vector<std::size_t> kept);
  /// `degree` and `concave` are metadata the caller vouches for.
  static CostModel custom(CustomCost cost, std::optional<double> degree = std::nullopt,
                          bool concave = false);

  CostKind kind() const;
  std::size_t arity() const;
  const CostParams& params() const;

  double value(std::span<const double> xi) const;
  double operator()(std::span<const double> xi) const { return value(xi); }

  bool has_gradient() const;
  void gradient(std::span<const double> xi, std::span<double> out) const;
  bool has_hessian() const;
  /// Row-major n×n.
  void hessian(std::span<const double> xi, std::span<double> out) const;

  /// Declared (or structurally known) absolute homogeneity degree.
  std::optional<double> homogeneity_degree() const;
  /// Linear costs are concave by structure; polynomial and custom costs carry
  /// a caller declaration that certifiers still verify by sampling.
  bool declared_concave() const;
  /// True for the closed-form isotropic quadrant: two equal weights.
  bool is_isotropic_pair() const;

  const void* identity() const { return impl_.get(); }

 private:
  struct Impl;
  explicit CostModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace mssp
