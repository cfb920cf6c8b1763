#include "mssp/simplex/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mssp/core/types.hpp"

namespace mssp {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Objective restricted to the face spanned by `kept`.
class FaceObjective {
 public:
  FaceObjective(const CostModel& cost, std::span<const double> w, std::vector<std::size_t> kept)
      : cost_(cost), w_(w), kept_(std::move(kept)), full_(cost.arity(), 0.0) {}

  std::size_t size() const { return kept_.size(); }

  double operator()(std::span<const double> y) const {
    embed(y);
    double v = cost_.value(full_);
    for (std::size_t k = 0; k < kept_.size(); ++k)
      if (y[k] != 0.0) v += y[k] * w_[kept_[k]];
    return v;
  }

  bool has_gradient() const { return cost_.has_gradient(); }

  void gradient(std::span<const double> y, std::span<double> out) const {
    embed(y);
    grad_.resize(full_.size());
    cost_.gradient(full_, grad_);
    for (std::size_t k = 0; k < kept_.size(); ++k) out[k] = grad_[kept_[k]] + w_[kept_[k]];
  }

  std::vector<double> expand(std::span<const double> y) const {
    std::vector<double> out(cost_.arity(), 0.0);
    for (std::size_t k = 0; k < kept_.size(); ++k) out[kept_[k]] = y[k];
    return out;
  }

 private:
  void embed(std::span<const double> y) const {
    for (std::size_t k = 0; k < kept_.size(); ++k) full_[kept_[k]] = y[k];
  }

  const CostModel& cost_;
  std::span<const double> w_;
  std::vector<std::size_t> kept_;
  mutable std::vector<double> full_;
  mutable std::vector<double> grad_;
};

struct Candidate {
  double value;
  std::vector<double> y;
};

// Golden-section search of g on [a, b]; returns the best abscissa seen.
template <class G>
double golden(G&& g, double a, double b, double tol, double& best_value) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > tol) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  if (gc <= gd) {
    best_value = gc;
    return c;
  }
  best_value = gd;
  return d;
}

std::size_t divisions_for(std::size_t n, const SimplexOptions& o) {
  if (n == 2) return o.divisions_two;
  if (n == 3) return o.divisions_three;
  return o.divisions_higher;
}

// Moves mass between coordinates a and b while holding the rest fixed.
bool pair_line_search(const FaceObjective& f, std::vector<double>& y, double& fy, std::size_t a,
                      std::size_t b, double tol) {
  const double mass = y[a] + y[b];
  if (mass <= 0.0) return false;
  std::vector<double> trial = y;
  auto g = [&](double s) {
    trial[a] = s;
    trial[b] = mass - s;
    return f(trial);
  };
  double gv = 0.0;
  double s = golden(g, 0.0, mass, tol, gv);
  // endpoints are candidates too: the minimum often sits on a face
  const double g0 = g(0.0);
  const double g1 = g(mass);
  if (g0 < gv) {
    gv = g0;
    s = 0.0;
  }
  if (g1 < gv) {
    gv = g1;
    s = mass;
  }
  if (gv < fy) {
    y[a] = s;
    y[b] = mass - s;
    fy = gv;
    return true;
  }
  return false;
}

void projected_gradient(const FaceObjective& f, std::vector<double>& y, double& fy, double tol) {
  const std::size_t k = y.size();
  std::vector<double> g(k), trial(k);
  double step = 0.1;
  for (int it = 0; it < 200; ++it) {
    f.gradient(y, g);
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t j = 0; j < k; ++j) trial[j] = y[j] - step * g[j];
      project_to_simplex(trial);
      const double ft = f(trial);
      if (ft < fy - 1e-16) {
        const double shift = fy - ft;
        y = trial;
        fy = ft;
        moved = true;
        step *= 2.0;
        if (shift < tol) it = 200;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
}

Candidate minimize_face(const FaceObjective& f, const SimplexOptions& o,
                        std::vector<Candidate>* scanned) {
  const std::size_t k = f.size();
  if (k == 1) {
    std::vector<double> y{1.0};
    const double v = f(y);
    if (scanned) scanned->push_back({v, y});
    return {v, y};
  }

  const std::size_t divisions = divisions_for(k, o);
  Candidate best{kInf, {}};
  for_each_simplex_grid_point(k, divisions, [&](std::span<const double> y) {
    const double v = f(y);
    if (scanned) scanned->push_back({v, std::vector<double>(y.begin(), y.end())});
    if (v < best.value) best = {v, std::vector<double>(y.begin(), y.end())};
  });

  if (k == 2) {
    const double step = 1.0 / static_cast<double>(divisions);
    const double t0 = best.y[0];
    std::vector<double> y(2);
    auto g = [&](double t) {
      y[0] = t;
      y[1] = 1.0 - t;
      return f(y);
    };
    double gv = 0.0;
    const double t =
        golden(g, std::max(0.0, t0 - step), std::min(1.0, t0 + step), o.polish_tolerance, gv);
    if (gv < best.value) best = {gv, {t, 1.0 - t}};
    return best;
  }

  double fy = best.value;
  if (f.has_gradient()) projected_gradient(f, best.y, fy, o.polish_tolerance);
  for (int round = 0; round < 50; ++round) {
    const double before = fy;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        pair_line_search(f, best.y, fy, a, b, o.polish_tolerance);
    if (before - fy <= o.polish_tolerance) break;
  }
  best.value = fy;
  return best;
}

// Closed form for c·sqrt(ξ₁² + ξ₂²) + ξᵀW with both entries finite.
std::vector<double> isotropic_pair_minimizer(double c, double w1, double w2) {
  const double diff = w1 - w2;
  if (std::fabs(diff) >= c) return diff <= 0.0 ? std::vector<double>{1.0, 0.0}
                                               : std::vector<double>{0.0, 1.0};
  const double u = 0.5 * (w1 + w2 + std::sqrt(2.0 * c * c - diff * diff));
  const double a = u - w1;
  const double b = u - w2;
  return {a / (a + b), b / (a + b)};
}

}  // namespace

double mode_objective(const CostModel& cost, std::span<const double> w,
                      std::span<const double> xi) {
  double v = cost.value(xi);
  for (std::size_t j = 0; j < xi.size(); ++j)
    if (xi[j] != 0.0) v += xi[j] * w[j];
  return v;
}

std::vector<std::size_t> support(std::span<const double> xi, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < xi.size(); ++j)
    if (xi[j] > tol) out.push_back(j);
  return out;
}

void project_to_simplex(std::span<double> x) {
  std::vector<double> u(x.begin(), x.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& v : x) v = std::max(v - theta, 0.0);
}

ModeMinResult vertex_shortcut(const CostModel& cost, std::span<const double> w) {
  if (!cost.declared_concave())
    throw std::logic_error("vertex shortcut requires a cost declared concave");
  const std::size_t n = cost.arity();
  ModeMinResult r{kInf, {}, {}};
  std::vector<double> e(n, 0.0);
  std::size_t best = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isinf(w[j])) continue;
    e[j] = 1.0;
    const double v = cost.value(e) + w[j];
    e[j] = 0.0;
    if (v < r.value) {
      r.value = v;
      best = j;
    }
  }
  if (best < n) {
    r.xi.assign(n, 0.0);
    r.xi[best] = 1.0;
  }
  return r;
}

ModeMinResult grid_scan(const CostModel& cost, std::span<const double> w, std::size_t divisions) {
  ModeMinResult r{kInf, {}, {}};
  for_each_simplex_grid_point(cost.arity(), divisions, [&](std::span<const double> xi) {
    const double v = mode_objective(cost, w, xi);
    if (v < r.value) {
      r.value = v;
      r.xi.assign(xi.begin(), xi.end());
    }
  });
  return r;
}

ModeMinResult minimize_mode(const CostModel& cost, std::span<const double> w,
                            const SimplexOptions& options) {
  const std::size_t n = cost.arity();
  if (w.size() != n) throw std::invalid_argument("value vector length differs from cost arity");

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isinf(w[j])) kept.push_back(j);
  if (kept.empty()) return {kInf, {}, {}};

  const bool collect = options.collect_near_minimizers;
  if (!options.force_numeric) {
    if (cost.declared_concave() && !collect) return vertex_shortcut(cost, w);
    if (cost.is_isotropic_pair() && kept.size() == 2 && !collect) {
      const auto& p = std::get<WeightedEuclideanCost>(cost.params());
      std::vector<double> xi = isotropic_pair_minimizer(p.scale, w[0], w[1]);
      return {mode_objective(cost, w, xi), std::move(xi), {}};
    }
  }

  FaceObjective face(cost, w, kept);
  std::vector<Candidate> scanned;
  Candidate best = minimize_face(face, options, collect ? &scanned : nullptr);

  ModeMinResult r;
  r.xi = face.expand(best.y);
  r.value = mode_objective(cost, w, r.xi);
  if (collect) {
    const double slack = options.near_slack * (1.0 + std::fabs(r.value));
    r.near_minimizers.push_back(r.xi);
    for (const auto& c : scanned)
      if (c.value <= r.value + slack) r.near_minimizers.push_back(face.expand(c.y));
  }
  return r;
}

}  // namespace mssp
