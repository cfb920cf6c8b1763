#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mssp/core/cost_model.hpp"
#include "mssp/core/problem.hpp"

namespace mssp {

enum class ModeVerdict { causal_concave, causal_homogeneous, causal_hessian_bound, uncertified };
enum class Rigor { structural, sampled };

std::string_view to_string(ModeVerdict v);
std::string_view to_string(Rigor r);

struct CertificateEvidence {
  std::optional<double> min_vertex_cost;
  std::optional<double> inf_gradient_margin;  // inf of ∂ⱼC - (d-1)C
  std::optional<double> max_projected_eigenvalue;
  std::size_t samples = 0;
  /// Finite differences had to be one-sided at some boundary sample.
  bool one_sided_differences = false;
};

struct ModeCertificate {
  ModeVerdict verdict = ModeVerdict::uncertified;
  double delta = 0.0;  // meaningful only when certified
  Rigor rigor = Rigor::sampled;
  CertificateEvidence evidence;
  std::string reason;  // why the last attempted criterion failed

  bool certified() const { return verdict != ModeVerdict::uncertified; }
};

struct CertifyOptions {
  double safety_margin = 1e-9;
  std::size_t concave_pairs = 500;
  double concave_tolerance = 1e-10;
  std::uint64_t seed = 7;
  /// Simplex grid divisions for derivative sampling, by arity.
  std::size_t divisions_two = 128;
  std::size_t divisions_three = 32;
  std::size_t divisions_higher = 8;
  double fd_step = 1e-6;
  /// Run every criterion and keep the largest delta instead of stopping at
  /// the first success.
  bool run_all = false;
};

/// δ = minⱼ C(eⱼ) when C is concave on Ξₙ (structural for linear costs,
/// otherwise checked by midpoint and projected-Hessian sampling).
ModeCertificate certify_concave(const CostModel& cost, const CertifyOptions& options = {});

/// Degree-d homogeneous costs: δ from the sampled infimum of ∂ⱼC - (d-1)C
/// over the closed simplex. Throws std::invalid_argument without degree and
/// gradient metadata.
ModeCertificate certify_homogeneous(const CostModel& cost, const CertifyOptions& options = {});

/// δ = minᵢ C(eᵢ) - max(0, max Λ(BᵀHB)); certified when positive. Uses the
/// analytic Hessian when present, else differences of the gradient. Throws
/// std::invalid_argument when neither is available or n < 2.
ModeCertificate certify_hessian_bound(const CostModel& cost, const CertifyOptions& options = {});

/// Cascade: concave, then homogeneous, then Hessian bound.
ModeCertificate certify_mode(const CostModel& cost, const CertifyOptions& options = {});

enum class ProblemVerdict { dijkstra_ok, dial_ok, unknown };
std::string_view to_string(ProblemVerdict v);

struct ModeCertificateEntry {
  NodeId node = 0;
  std::size_t mode = 0;
  ModeCertificate certificate;
};

struct ProblemCertificate {
  std::vector<ModeCertificateEntry> modes;
  double delta = 0.0;  // min over certified modes; +inf if there are none
  ProblemVerdict verdict = ProblemVerdict::unknown;
  /// Modes that lead only to the target; they never delay acceptance.
  std::size_t exit_modes = 0;
};

ProblemCertificate certify_problem(const MsspProblem& problem, const CertifyOptions& options = {});

/// n×(n-1) orthonormal basis of {v : Σ vᵢ = 0}, from the Householder
/// reflection taking e₁ to (1,…,1)/√n.
Eigen::MatrixXd simplex_tangent_basis(std::size_t n);

/// Largest eigenvalue of BᵀHB for a row-major n×n H.
double max_projected_eigenvalue(std::span<const double> hessian, const Eigen::MatrixXd& basis);

}  // namespace mssp
