#include "mssp/core/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mssp {

struct CostModel::Impl {
  CostParams params;
  std::size_t arity = 0;
  std::optional<double> degree;
  bool concave = false;
};

namespace {

constexpr std::string_view kKindNames[] = {
    "linear",          "weighted-euclidean", "euclidean-offset", "polynomial",
    "semi-lagrangian", "homogenized",        "facet",            "custom",
};

double sum(std::span<const double> xi) { return std::accumulate(xi.begin(), xi.end(), 0.0); }

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// ---- linear ----------------------------------------------------------------

double eval(const LinearCost& c, std::span<const double> xi) {
  double v = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) v += c.coefficients[j] * xi[j];
  return v;
}

// ---- weighted euclidean ----------------------------------------------------

double eval(const WeightedEuclideanCost& c, std::span<const double> xi) {
  double r2 = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) r2 += c.weights[j] * xi[j] * xi[j];
  return c.scale * std::sqrt(r2);
}

void grad(const WeightedEuclideanCost& c, std::span<const double> xi, std::span<double> g) {
  double r2 = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) r2 += c.weights[j] * xi[j] * xi[j];
  const double r = std::sqrt(r2);
  for (std::size_t j = 0; j < xi.size(); ++j)
    g[j] = r > 0.0 ? c.scale * c.weights[j] * xi[j] / r : 0.0;
}

void hess(const WeightedEuclideanCost& c, std::span<const double> xi, std::span<double> h) {
  const std::size_t n = xi.size();
  double r2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) r2 += c.weights[j] * xi[j] * xi[j];
  const double r = std::sqrt(r2);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (r <= 0.0) {
        h[j * n + k] = 0.0;
        continue;
      }
      const double gj = c.weights[j] * xi[j];
      const double gk = c.weights[k] * xi[k];
      h[j * n + k] = c.scale * ((j == k ? c.weights[j] : 0.0) / r - gj * gk / (r2 * r));
    }
  }
}

// ---- euclidean with offset -------------------------------------------------

double offset_radius2(const EuclideanOffsetCost& c, std::span<const double> xi) {
  const double s = sum(xi);
  double r2 = c.offset * s * s;
  for (std::size_t j = 0; j < xi.size(); ++j) r2 += c.weights[j] * xi[j] * xi[j];
  return r2;
}

double eval(const EuclideanOffsetCost& c, std::span<const double> xi) {
  return c.scale * std::sqrt(offset_radius2(c, xi));
}

void grad(const EuclideanOffsetCost& c, std::span<const double> xi, std::span<double> g) {
  const double s = sum(xi);
  const double r = std::sqrt(offset_radius2(c, xi));
  for (std::size_t j = 0; j < xi.size(); ++j)
    g[j] = r > 0.0 ? c.scale * (c.offset * s + c.weights[j] * xi[j]) / r : 0.0;
}

void hess(const EuclideanOffsetCost& c, std::span<const double> xi, std::span<double> h) {
  const std::size_t n = xi.size();
  const double s = sum(xi);
  const double r2 = offset_radius2(c, xi);
  const double r = std::sqrt(r2);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (r <= 0.0) {
        h[j * n + k] = 0.0;
        continue;
      }
      const double uj = c.offset * s + c.weights[j] * xi[j];
      const double uk = c.offset * s + c.weights[k] * xi[k];
      const double djk = c.offset + (j == k ? c.weights[j] : 0.0);
      h[j * n + k] = c.scale * (djk / r - uj * uk / (r2 * r));
    }
  }
}

// ---- polynomial ------------------------------------------------------------

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double eval(const PolynomialCost& c, std::span<const double> xi) {
  double v = 0.0;
  for (const auto& t : c.terms) {
    double m = t.coefficient;
    for (std::size_t j = 0; j < c.arity; ++j) m *= ipow(xi[j], t.exponents[j]);
    v += m;
  }
  return v;
}

// ∂/∂ξ_a (and ∂/∂ξ_b if b >= 0) of a single monomial.
double monomial_derivative(const PolynomialTerm& t, std::span<const double> xi, std::size_t a,
                           std::optional<std::size_t> b) {
  std::vector<int> e = t.exponents;
  double coef = t.coefficient;
  auto differentiate = [&](std::size_t idx) {
    if (e[idx] == 0) {
      coef = 0.0;
      return;
    }
    coef *= e[idx];
    --e[idx];
  };
  differentiate(a);
  if (b) differentiate(*b);
  if (coef == 0.0) return 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) coef *= ipow(xi[j], e[j]);
  return coef;
}

void grad(const PolynomialCost& c, std::span<const double> xi, std::span<double> g) {
  for (std::size_t j = 0; j < c.arity; ++j) {
    g[j] = 0.0;
    for (const auto& t : c.terms) g[j] += monomial_derivative(t, xi, j, std::nullopt);
  }
}

void hess(const PolynomialCost& c, std::span<const double> xi, std::span<double> h) {
  const std::size_t n = c.arity;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      double v = 0.0;
      for (const auto& t : c.terms) v += monomial_derivative(t, xi, j, k);
      h[j * n + k] = v;
    }
  }
}

std::optional<double> polynomial_degree(const PolynomialCost& c) {
  std::optional<int> degree;
  for (const auto& t : c.terms) {
    if (t.coefficient == 0.0) continue;
    const int d = std::accumulate(t.exponents.begin(), t.exponents.end(), 0);
    if (degree && *degree != d) return std::nullopt;
    degree = d;
  }
  if (!degree) return std::nullopt;
  return static_cast<double>(*degree);
}

// ---- semi-Lagrangian -------------------------------------------------------

struct SlState {
  std::vector<double> y;   // Σ ξ_j e_j
  std::vector<double> ay;  // A y
  double p = 0.0;          // yᵀy
  double q = 0.0;          // yᵀAy
};

SlState sl_state(const SemiLagrangianCost& c, std::span<const double> xi) {
  const std::size_t d = c.dimension;
  SlState s;
  s.y.assign(d, 0.0);
  for (std::size_t j = 0; j < xi.size(); ++j)
    for (std::size_t k = 0; k < d; ++k) s.y[k] += xi[j] * c.edges[j * d + k];
  s.ay = s.y;
  if (!c.metric.empty()) {
    for (std::size_t r = 0; r < d; ++r) {
      s.ay[r] = 0.0;
      for (std::size_t k = 0; k < d; ++k) s.ay[r] += c.metric[r * d + k] * s.y[k];
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    s.p += s.y[k] * s.y[k];
    s.q += s.y[k] * s.ay[k];
  }
  return s;
}

double eval(const SemiLagrangianCost& c, std::span<const double> xi) {
  const SlState s = sl_state(c, xi);
  if (s.p <= 0.0) return 0.0;
  if (c.metric.empty()) return std::sqrt(s.p) / c.speed;
  return s.p / (c.speed * std::sqrt(s.q));
}

void grad(const SemiLagrangianCost& c, std::span<const double> xi, std::span<double> g) {
  const std::size_t d = c.dimension;
  const SlState s = sl_state(c, xi);
  std::vector<double> gy(d, 0.0);
  if (s.p > 0.0) {
    const double sq = std::sqrt(s.q);
    for (std::size_t k = 0; k < d; ++k)
      gy[k] = (2.0 * s.y[k] / sq - s.p * s.ay[k] / (s.q * sq)) / c.speed;
  }
  for (std::size_t j = 0; j < xi.size(); ++j) {
    g[j] = 0.0;
    for (std::size_t k = 0; k < d; ++k) g[j] += c.edges[j * d + k] * gy[k];
  }
}

void hess(const SemiLagrangianCost& c, std::span<const double> xi, std::span<double> h) {
  const std::size_t d = c.dimension;
  const std::size_t n = xi.size();
  const SlState s = sl_state(c, xi);
  std::vector<double> hy(d * d, 0.0);
  if (s.p > 0.0) {
    const double sq = std::sqrt(s.q);
    const double q32 = s.q * sq;
    const double q52 = q32 * s.q;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t k = 0; k < d; ++k) {
        const double a_rk = c.metric.empty() ? (r == k ? 1.0 : 0.0) : c.metric[r * d + k];
        const double v = (r == k ? 2.0 / sq : 0.0) - 2.0 * s.y[r] * s.ay[k] / q32 -
                         2.0 * s.ay[r] * s.y[k] / q32 - s.p * a_rk / q32 +
                         3.0 * s.p * s.ay[r] * s.ay[k] / q52;
        hy[r * d + k] = v / c.speed;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double v = 0.0;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t k = 0; k < d; ++k)
          v += c.edges[a * d + r] * hy[r * d + k] * c.edges[b * d + k];
      h[a * n + b] = v;
    }
  }
}

// ---- homogenized -----------------------------------------------------------

double eval(const HomogenizedCost& c, std::span<const double> xi) {
  const double s = sum(xi);
  if (s <= 0.0) return 0.0;
  std::vector<double> eta(xi.begin(), xi.end());
  for (double& e : eta) e /= s;
  return s * c.base->value(eta);
}

void grad(const HomogenizedCost& c, std::span<const double> xi, std::span<double> g) {
  const std::size_t n = xi.size();
  const double s = sum(xi);
  std::vector<double> eta(xi.begin(), xi.end());
  for (double& e : eta) e /= s;
  std::vector<double> gb(n);
  c.base->gradient(eta, gb);
  double eta_dot = 0.0;
  for (std::size_t j = 0; j < n; ++j) eta_dot += eta[j] * gb[j];
  const double cv = c.base->value(eta);
  for (std::size_t j = 0; j < n; ++j) g[j] = cv + gb[j] - eta_dot;
}

// H̃ = (I - 1ηᵀ) H(η) (I - η1ᵀ) / s
void hess(const HomogenizedCost& c, std::span<const double> xi, std::span<double> h) {
  const std::size_t n = xi.size();
  const double s = sum(xi);
  std::vector<double> eta(xi.begin(), xi.end());
  for (double& e : eta) e /= s;
  std::vector<double> hb(n * n);
  c.base->hessian(eta, hb);
  // left = (I - 1ηᵀ) H : row j = H_j - Σ_i η_i H_i
  std::vector<double> mean_row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) mean_row[k] += eta[i] * hb[i * n + k];
  std::vector<double> left(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) left[j * n + k] = hb[j * n + k] - mean_row[k];
  // right multiply by (I - η1ᵀ): column k = L_k - Σ_l L_l η_l
  for (std::size_t j = 0; j < n; ++j) {
    double dot = 0.0;
    for (std::size_t l = 0; l < n; ++l) dot += left[j * n + l] * eta[l];
    for (std::size_t k = 0; k < n; ++k) h[j * n + k] = (left[j * n + k] - dot) / s;
  }
}

// ---- facet -----------------------------------------------------------------

std::vector<double> embed(const FacetCost& c, std::span<const double> xi) {
  std::vector<double> full(c.base->arity(), 0.0);
  for (std::size_t j = 0; j < c.kept.size(); ++j) full[c.kept[j]] = xi[j];
  return full;
}

double eval(const FacetCost& c, std::span<const double> xi) { return c.base->value(embed(c, xi)); }

void grad(const FacetCost& c, std::span<const double> xi, std::span<double> g) {
  std::vector<double> gb(c.base->arity());
  c.base->gradient(embed(c, xi), gb);
  for (std::size_t j = 0; j < c.kept.size(); ++j) g[j] = gb[c.kept[j]];
}

void hess(const FacetCost& c, std::span<const double> xi, std::span<double> h) {
  const std::size_t nb = c.base->arity();
  const std::size_t n = c.kept.size();
  std::vector<double> hb(nb * nb);
  c.base->hessian(embed(c, xi), hb);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) h[j * n + k] = hb[c.kept[j] * nb + c.kept[k]];
}

// ---- custom ----------------------------------------------------------------

double eval(const CustomCost& c, std::span<const double> xi) { return c.value(xi); }

template <class>
inline constexpr bool kAlwaysFalse = false;

}  // namespace

std::string_view to_string(CostKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<CostKind> cost_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i)
    if (kKindNames[i] == name) return static_cast<CostKind>(i);
  return std::nullopt;
}

CostModel CostModel::linear(std::vector<double> coefficients) {
  require(!coefficients.empty(), "linear cost needs at least one coefficient");
  auto impl = std::make_shared<Impl>();
  impl->arity = coefficients.size();
  impl->degree = 1.0;
  impl->concave = true;
  impl->params = LinearCost{std::move(coefficients)};
  return CostModel(std::move(impl));
}

CostModel CostModel::weighted_euclidean(double scale, std::vector<double> weights) {
  require(!weights.empty(), "weighted-euclidean cost needs weights");
  require(scale > 0.0, "weighted-euclidean scale must be positive");
  require(std::all_of(weights.begin(), weights.end(), [](double w) { return w >= 0.0; }),
          "weighted-euclidean weights must be nonnegative");
  auto impl = std::make_shared<Impl>();
  impl->arity = weights.size();
  impl->degree = 1.0;
  impl->params = WeightedEuclideanCost{scale, std::move(weights)};
  return CostModel(std::move(impl));
}

CostModel CostModel::euclidean(std::size_t arity, double scale) {
  return weighted_euclidean(scale, std::vector<double>(arity, 1.0));
}

CostModel CostModel::euclidean_offset(double scale, double offset, std::vector<double> weights) {
  require(!weights.empty(), "euclidean-offset cost needs weights");
  require(scale > 0.0, "euclidean-offset scale must be positive");
  require(offset >= 0.0, "euclidean-offset offset must be nonnegative");
  auto impl = std::make_shared<Impl>();
  impl->arity = weights.size();
  impl->degree = 1.0;
  impl->params = EuclideanOffsetCost{scale, offset, std::move(weights)};
  return CostModel(std::move(impl));
}

CostModel CostModel::polynomial(std::size_t arity, std::vector<PolynomialTerm> terms,
                                bool concave) {
  require(arity >= 1, "polynomial arity must be at least 1");
  for (const auto& t : terms) {
    require(t.exponents.size() == arity, "polynomial term exponent count must equal arity");
    require(std::all_of(t.exponents.begin(), t.exponents.end(), [](int e) { return e >= 0; }),
            "polynomial exponents must be nonnegative");
  }
  auto impl = std::make_shared<Impl>();
  impl->arity = arity;
  impl->concave = concave;
  PolynomialCost p{arity, std::move(terms)};
  impl->degree = polynomial_degree(p);
  impl->params = std::move(p);
  return CostModel(std::move(impl));
}

CostModel CostModel::semi_lagrangian(std::size_t dimension, std::vector<double> edges,
                                     double speed, std::vector<double> metric) {
  require(dimension >= 1, "semi-lagrangian dimension must be at least 1");
  require(!edges.empty() && edges.size() % dimension == 0,
          "semi-lagrangian edges must be a whole number of vectors");
  require(speed > 0.0, "semi-lagrangian speed must be positive");
  require(metric.empty() || metric.size() == dimension * dimension,
          "semi-lagrangian metric must be dimension x dimension");
  auto impl = std::make_shared<Impl>();
  impl->arity = edges.size() / dimension;
  impl->degree = 1.0;
  impl->params = SemiLagrangianCost{dimension, std::move(edges), speed, std::move(metric)};
  return CostModel(std::move(impl));
}

CostModel CostModel::homogenized(const CostModel& base) {
  auto impl = std::make_shared<Impl>();
  impl->arity = base.arity();
  impl->degree = 1.0;
  impl->params = HomogenizedCost{std::make_shared<const CostModel>(base)};
  return CostModel(std::move(impl));
}

CostModel CostModel::facet(const CostModel& base, std::vector<std::size_t> kept) {
  require(!kept.empty(), "facet must keep at least one coordinate");
  for (std::size_t k : kept) require(k < base.arity(), "facet coordinate out of range");
  auto impl = std::make_shared<Impl>();
  impl->arity = kept.size();
  impl->degree = base.homogeneity_degree();
  impl->concave = base.declared_concave();
  impl->params = FacetCost{std::make_shared<const CostModel>(base), std::move(kept)};
  return CostModel(std::move(impl));
}

CostModel CostModel::custom(CustomCost cost, std::optional<double> degree, bool concave) {
  require(cost.arity >= 1, "custom cost arity must be at least 1");
  require(static_cast<bool>(cost.value), "custom cost needs a value function");
  auto impl = std::make_shared<Impl>();
  impl->arity = cost.arity;
  impl->degree = degree;
  impl->concave = concave;
  impl->params = std::move(cost);
  return CostModel(std::move(impl));
}

CostKind CostModel::kind() const { return static_cast<CostKind>(impl_->params.index()); }
std::size_t CostModel::arity() const { return impl_->arity; }
const CostParams& CostModel::params() const { return impl_->params; }
std::optional<double> CostModel::homogeneity_degree() const { return impl_->degree; }
bool CostModel::declared_concave() const { return impl_->concave; }

bool CostModel::is_isotropic_pair() const {
  const auto* we = std::get_if<WeightedEuclideanCost>(&impl_->params);
  return we && we->weights.size() == 2 && we->weights[0] == 1.0 && we->weights[1] == 1.0;
}

double CostModel::value(std::span<const double> xi) const {
  return std::visit([&](const auto& c) { return eval(c, xi); }, impl_->params);
}

bool CostModel::has_gradient() const {
  return std::visit(
      [](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CustomCost>) return static_cast<bool>(c.gradient);
        else if constexpr (std::is_same_v<T, HomogenizedCost> || std::is_same_v<T, FacetCost>)
          return c.base->has_gradient();
        else return true;
      },
      impl_->params);
}

bool CostModel::has_hessian() const {
  return std::visit(
      [](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CustomCost>) return static_cast<bool>(c.hessian);
        else if constexpr (std::is_same_v<T, HomogenizedCost>)
          return c.base->has_hessian() && c.base->has_gradient();
        else if constexpr (std::is_same_v<T, FacetCost>) return c.base->has_hessian();
        else return true;
      },
      impl_->params);
}

void CostModel::gradient(std::span<const double> xi, std::span<double> out) const {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearCost>) {
          std::copy(c.coefficients.begin(), c.coefficients.end(), out.begin());
        } else if constexpr (std::is_same_v<T, CustomCost>) {
          if (!c.gradient) throw std::logic_error("custom cost '" + c.name + "' has no gradient");
          c.gradient(xi, out);
        } else {
          grad(c, xi, out);
        }
      },
      impl_->params);
}

void CostModel::hessian(std::span<const double> xi, std::span<double> out) const {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearCost>) {
          std::fill(out.begin(), out.end(), 0.0);
        } else if constexpr (std::is_same_v<T, CustomCost>) {
          if (!c.hessian) throw std::logic_error("custom cost '" + c.name + "' has no hessian");
          c.hessian(xi, out);
        } else {
          hess(c, xi, out);
        }
      },
      impl_->params);
}

}  // namespace mssp
