#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mssp/core/cost_model.hpp"
#include "mssp/core/types.hpp"
#include "mssp/simplex/simplex_opt.hpp"

namespace mssp {

struct GroupMin {
  double value = kInf;
  std::vector<double> xi;  // empty when value is +inf
};

/// Anything the Bellman operator and the solvers can run on: per node, a list
/// of control groups, each over an ordered successor list. For MSSPs a group
/// is a mode; for tabulated SSPs it is one fixed probability row.
class BellmanModel {
 public:
  virtual ~BellmanModel() = default;

  /// Number of non-target nodes M. The target's id is M.
  virtual std::size_t node_count() const = 0;
  NodeId target() const { return static_cast<NodeId>(node_count()); }

  virtual std::size_t group_count(NodeId node) const = 0;
  virtual std::span<const NodeId> successors(NodeId node, std::size_t group) const = 0;

  /// min over the group's controls of cost + Σ ξ_j w_j, where w is indexed
  /// like successors(node, group).
  virtual GroupMin minimize_group(NodeId node, std::size_t group,
                                  std::span<const double> w) const = 0;

  virtual double control_cost(NodeId node, std::size_t group,
                              std::span<const double> xi) const = 0;

  /// True if every vertex control e_j of every group is admissible.
  virtual bool has_pure_controls() const = 0;
};

struct Mode {
  std::vector<NodeId> successors;
  CostModel cost;
};

class MsspProblem final : public BellmanModel {
 public:
  explicit MsspProblem(std::size_t node_count);

  /// Appends a mode; returns its index within the node. Structural checks
  /// beyond id ranges are left to validate_problem.
  std::size_t add_mode(NodeId node, std::vector<NodeId> successors, CostModel cost);

  const std::vector<Mode>& modes(NodeId node) const { return modes_.at(node); }
  const Mode& mode(NodeId node, std::size_t index) const { return modes_.at(node).at(index); }

  void set_label(NodeId node, std::string label);
  const std::string& label(NodeId node) const;
  bool has_labels() const { return !labels_.empty(); }

  void set_coordinates(NodeId node, std::vector<double> coordinates);
  const std::vector<double>& coordinates(NodeId node) const;
  bool has_coordinates() const { return !coordinates_.empty(); }

  /// Declared bound on Σ_m |m| per node; checked by validate_problem.
  void set_kappa(std::size_t kappa) { kappa_ = kappa; }
  std::optional<std::size_t> kappa() const { return kappa_; }

  SimplexOptions& simplex_options() { return simplex_; }
  const SimplexOptions& simplex_options() const { return simplex_; }

  std::size_t node_count() const override { return modes_.size(); }
  std::size_t group_count(NodeId node) const override;
  std::span<const NodeId> successors(NodeId node, std::size_t group) const override;
  GroupMin minimize_group(NodeId node, std::size_t group,
                          std::span<const double> w) const override;
  double control_cost(NodeId node, std::size_t group, std::span<const double> xi) const override;
  bool has_pure_controls() const override { return true; }

 private:
  std::vector<std::vector<Mode>> modes_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> coordinates_;
  std::optional<std::size_t> kappa_;
  SimplexOptions simplex_;
};

/// One tabulated control of a finite-control SSP.
struct DiscreteControl {
  double cost = 0.0;
  std::vector<NodeId> successors;
  std::vector<double> probabilities;
};

class DiscreteSsp final : public BellmanModel {
 public:
  explicit DiscreteSsp(std::size_t node_count);

  std::size_t add_control(NodeId node, DiscreteControl control);
  const std::vector<DiscreteControl>& controls(NodeId node) const { return controls_.at(node); }

  std::size_t node_count() const override { return controls_.size(); }
  std::size_t group_count(NodeId node) const override { return controls_.at(node).size(); }
  std::span<const NodeId> successors(NodeId node, std::size_t group) const override;
  GroupMin minimize_group(NodeId node, std::size_t group,
                          std::span<const double> w) const override;
  double control_cost(NodeId node, std::size_t group, std::span<const double> xi) const override;
  bool has_pure_controls() const override { return false; }

 private:
  std::vector<std::vector<DiscreteControl>> controls_;
};

}  // namespace mssp
