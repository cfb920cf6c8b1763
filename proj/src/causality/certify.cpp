#include "mssp/causality/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mssp/core/types.hpp"
#include "mssp/simplex/simplex_opt.hpp"

namespace mssp {

namespace {

std::size_t divisions_for(std::size_t n, const CertifyOptions& o) {
  if (n <= 2) return o.divisions_two;
  if (n == 3) return o.divisions_three;
  return o.divisions_higher;
}

double min_vertex_cost(const CostModel& cost) {
  const std::size_t n = cost.arity();
  std::vector<double> e(n, 0.0);
  double lo = kInf;
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    lo = std::min(lo, cost.value(e));
    e[j] = 0.0;
  }
  return lo;
}

void random_simplex_point(std::mt19937_64& rng, std::vector<double>& xi) {
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  for (double& x : xi) total += (x = expo(rng));
  for (double& x : xi) x /= total;
}

// Projected Hessian sampler: analytic when available, else central (or
// one-sided) differences of the gradient along the basis columns.
class ProjectedHessian {
 public:
  ProjectedHessian(const CostModel& cost, double step)
      : cost_(cost), n_(cost.arity()), basis_(simplex_tangent_basis(n_)), step_(step) {
    if (!cost.has_hessian() && !cost.has_gradient())
      throw std::invalid_argument("hessian bound needs second-derivative or gradient access");
  }

  double max_eigenvalue(std::span<const double> xi) {
    if (cost_.has_hessian()) {
      h_.resize(n_ * n_);
      cost_.hessian(xi, h_);
      return max_projected_eigenvalue(h_, basis_);
    }
    const std::size_t k = n_ - 1;
    Eigen::MatrixXd hat(k, k);
    std::vector<double> plus(n_), minus(n_), gp(n_), gm(n_);
    for (std::size_t b = 0; b < k; ++b) {
      double fwd = step_, bwd = step_;
      for (std::size_t i = 0; i < n_; ++i) {
        const double d = basis_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
        if (xi[i] + step_ * d < 0.0) fwd = 0.0;
        if (xi[i] - step_ * d < 0.0) bwd = 0.0;
      }
      if (fwd == 0.0 || bwd == 0.0) one_sided_ = true;
      if (fwd == 0.0 && bwd == 0.0) fwd = step_;  // degenerate corner: extend outside
      for (std::size_t i = 0; i < n_; ++i) {
        const double d = basis_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
        plus[i] = xi[i] + fwd * d;
        minus[i] = xi[i] - bwd * d;
      }
      cost_.gradient(plus, gp);
      cost_.gradient(minus, gm);
      for (std::size_t a = 0; a < k; ++a) {
        double v = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
          v += basis_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) * (gp[i] - gm[i]);
        hat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v / (fwd + bwd);
      }
    }
    const Eigen::MatrixXd sym = 0.5 * (hat + hat.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
  }

  bool one_sided() const { return one_sided_; }

 private:
  const CostModel& cost_;
  std::size_t n_;
  Eigen::MatrixXd basis_;
  double step_;
  std::vector<double> h_;
  bool one_sided_ = false;
};

}  // namespace

std::string_view to_string(ModeVerdict v) {
  switch (v) {
    case ModeVerdict::causal_concave: return "causal_concave";
    case ModeVerdict::causal_homogeneous: return "causal_homogeneous";
    case ModeVerdict::causal_hessian_bound: return "causal_hessian_bound";
    case ModeVerdict::uncertified: return "uncertified";
  }
  return "?";
}

std::string_view to_string(Rigor r) { return r == Rigor::structural ? "structural" : "sampled"; }

std::string_view to_string(ProblemVerdict v) {
  switch (v) {
    case ProblemVerdict::dijkstra_ok: return "dijkstra_ok";
    case ProblemVerdict::dial_ok: return "dial_ok";
    case ProblemVerdict::unknown: return "unknown";
  }
  return "?";
}

Eigen::MatrixXd simplex_tangent_basis(std::size_t n) {
  if (n < 2) return Eigen::MatrixXd(static_cast<Eigen::Index>(n), 0);
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(N, -1.0 / std::sqrt(static_cast<double>(n)));
  v(0) += 1.0;
  const Eigen::MatrixXd h =
      Eigen::MatrixXd::Identity(N, N) - 2.0 * v * v.transpose() / v.squaredNorm();
  return h.rightCols(N - 1);
}

double max_projected_eigenvalue(std::span<const double> hessian, const Eigen::MatrixXd& basis) {
  const auto n = basis.rows();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> h(
      hessian.data(), n, n);
  Eigen::MatrixXd hat = basis.transpose() * h * basis;
  hat = 0.5 * (hat + hat.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hat, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

ModeCertificate certify_concave(const CostModel& cost, const CertifyOptions& options) {
  ModeCertificate cert;
  const std::size_t n = cost.arity();
  const double lo = min_vertex_cost(cost);
  cert.evidence.min_vertex_cost = lo;

  auto accept = [&](Rigor rigor) {
    cert.verdict = ModeVerdict::causal_concave;
    cert.rigor = rigor;
    cert.delta = lo;
    return cert;
  };
  if (cost.kind() == CostKind::linear || n == 1) return accept(Rigor::structural);

  std::mt19937_64 rng(options.seed);
  std::vector<double> a(n), b(n), mid(n);
  for (std::size_t s = 0; s < options.concave_pairs; ++s) {
    random_simplex_point(rng, a);
    random_simplex_point(rng, b);
    for (std::size_t j = 0; j < n; ++j) mid[j] = 0.5 * (a[j] + b[j]);
    const double gap = cost.value(mid) - 0.5 * (cost.value(a) + cost.value(b));
    ++cert.evidence.samples;
    if (gap < -options.concave_tolerance) {
      std::ostringstream msg;
      msg << "midpoint test fails by " << -gap;
      cert.reason = msg.str();
      return cert;
    }
  }
  if (cost.has_hessian()) {
    const Eigen::MatrixXd basis = simplex_tangent_basis(n);
    std::vector<double> h(n * n);
    double worst = -kInf;
    for_each_simplex_grid_point(n, divisions_for(n, options), [&](std::span<const double> xi) {
      cost.hessian(xi, h);
      worst = std::max(worst, max_projected_eigenvalue(h, basis));
    });
    cert.evidence.max_projected_eigenvalue = worst;
    if (worst > options.concave_tolerance) {
      std::ostringstream msg;
      msg << "projected Hessian has eigenvalue " << worst << " > 0";
      cert.reason = msg.str();
      return cert;
    }
  }
  if (!(lo > 0.0)) {
    cert.reason = "vertex cost is not positive";
    return cert;
  }
  return accept(Rigor::sampled);
}

ModeCertificate certify_homogeneous(const CostModel& cost, const CertifyOptions& options) {
  const auto degree = cost.homogeneity_degree();
  if (!degree || !cost.has_gradient())
    throw std::invalid_argument("metadata required: homogeneity degree and gradient");
  ModeCertificate cert;
  const std::size_t n = cost.arity();
  const double d = *degree;
  std::vector<double> g(n);
  double inf_all = kInf;      // closure, boundary points included
  double inf_support = kInf;  // j ∈ I(ξ) only
  for_each_simplex_grid_point(n, divisions_for(n, options), [&](std::span<const double> xi) {
    cost.gradient(xi, g);
    const double c = cost.value(xi);
    ++cert.evidence.samples;
    for (std::size_t j = 0; j < n; ++j) {
      const double margin = g[j] - (d - 1.0) * c;
      inf_all = std::min(inf_all, margin);
      if (xi[j] > 0.0) inf_support = std::min(inf_support, margin);
    }
  });
  cert.evidence.inf_gradient_margin = inf_all;
  if (!(inf_support > 0.0)) {
    std::ostringstream msg;
    msg << "gradient margin reaches " << inf_support << " on the support";
    cert.reason = msg.str();
    return cert;
  }
  cert.verdict = ModeVerdict::causal_homogeneous;
  cert.delta = std::max(0.0, inf_all - options.safety_margin);
  return cert;
}

ModeCertificate certify_hessian_bound(const CostModel& cost, const CertifyOptions& options) {
  const std::size_t n = cost.arity();
  if (n < 2) throw std::invalid_argument("hessian bound needs n >= 2");
  ProjectedHessian hessian(cost, options.fd_step);
  ModeCertificate cert;
  double lambda = -kInf;
  for_each_simplex_grid_point(n, divisions_for(n, options), [&](std::span<const double> xi) {
    lambda = std::max(lambda, hessian.max_eigenvalue(xi));
    ++cert.evidence.samples;
  });
  const double lo = min_vertex_cost(cost);
  cert.evidence.min_vertex_cost = lo;
  cert.evidence.max_projected_eigenvalue = lambda;
  cert.evidence.one_sided_differences = hessian.one_sided();
  const double gap = lo - std::max(0.0, lambda + options.safety_margin);
  if (!(gap > 0.0)) {
    std::ostringstream msg;
    msg << "min vertex cost " << lo << " does not exceed max eigenvalue " << lambda;
    cert.reason = msg.str();
    return cert;
  }
  cert.verdict = ModeVerdict::causal_hessian_bound;
  cert.delta = gap;
  return cert;
}

ModeCertificate certify_mode(const CostModel& cost, const CertifyOptions& options) {
  ModeCertificate best = certify_concave(cost, options);
  std::vector<std::string> reasons;
  if (!best.certified()) reasons.push_back("concave: " + best.reason);
  if (best.certified() && !options.run_all) return best;

  auto consider = [&](ModeCertificate c, const char* name) {
    if (!c.certified()) {
      reasons.push_back(std::string(name) + ": " + c.reason);
      return;
    }
    if (!best.certified() || c.delta > best.delta) best = std::move(c);
  };
  if (cost.homogeneity_degree() && cost.has_gradient()) {
    consider(certify_homogeneous(cost, options), "homogeneous");
    if (best.certified() && !options.run_all) return best;
  } else {
    reasons.push_back("homogeneous: no degree or gradient metadata");
  }
  if (cost.arity() >= 2 && (cost.has_hessian() || cost.has_gradient())) {
    consider(certify_hessian_bound(cost, options), "hessian-bound");
  } else {
    reasons.push_back("hessian-bound: no derivative access");
  }
  if (!best.certified()) {
    std::string all;
    for (const auto& r : reasons) all += (all.empty() ? "" : "; ") + r;
    best.reason = all;
  }
  return best;
}

ProblemCertificate certify_problem(const MsspProblem& problem, const CertifyOptions& options) {
  ProblemCertificate out;
  const NodeId t = problem.target();
  std::map<const void*, ModeCertificate> cache;
  bool all_certified = true;
  double delta = kInf;
  for (NodeId i = 0; i < problem.node_count(); ++i) {
    const auto& modes = problem.modes(i);
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const Mode& m = modes[k];
      if (std::all_of(m.successors.begin(), m.successors.end(),
                      [&](NodeId s) { return s == t; })) {
        ++out.exit_modes;
        continue;
      }
      auto it = cache.find(m.cost.identity());
      if (it == cache.end()) it = cache.emplace(m.cost.identity(), certify_mode(m.cost, options)).first;
      const ModeCertificate& c = it->second;
      out.modes.push_back({i, k, c});
      if (c.certified()) {
        delta = std::min(delta, c.delta);
      } else {
        all_certified = false;
      }
    }
  }
  out.delta = delta;
  if (!all_certified) {
    out.verdict = ProblemVerdict::unknown;
  } else if (delta > 0.0) {
    out.verdict = ProblemVerdict::dial_ok;
  } else {
    out.verdict = ProblemVerdict::dijkstra_ok;
  }
  return out;
}

}  // namespace mssp
