#include "mssp/core/problem.hpp"

#include <stdexcept>

namespace mssp {

namespace {

void check_ids(std::size_t node_count, NodeId node, std::span<const NodeId> successors) {
  if (node >= node_count) throw std::out_of_range("node id out of range");
  if (successors.empty()) throw std::invalid_argument("a control needs at least one successor");
  for (NodeId s : successors)
    if (s > node_count) throw std::out_of_range("successor id out of range");
}

}  // namespace

MsspProblem::MsspProblem(std::size_t node_count) : modes_(node_count) {}

std::size_t MsspProblem::add_mode(NodeId node, std::vector<NodeId> successors, CostModel cost) {
  check_ids(node_count(), node, successors);
  if (cost.arity() != successors.size())
    throw std::invalid_argument("cost arity differs from the number of successors");
  modes_[node].push_back(Mode{std::move(successors), std::move(cost)});
  return modes_[node].size() - 1;
}

void MsspProblem::set_label(NodeId node, std::string label) {
  if (node > node_count()) throw std::out_of_range("node id out of range");
  if (labels_.empty()) labels_.resize(node_count() + 1);
  labels_[node] = std::move(label);
}

const std::string& MsspProblem::label(NodeId node) const {
  static const std::string empty;
  return labels_.empty() ? empty : labels_.at(node);
}

void MsspProblem::set_coordinates(NodeId node, std::vector<double> coordinates) {
  if (node >= node_count()) throw std::out_of_range("node id out of range");
  if (coordinates_.empty()) coordinates_.resize(node_count());
  coordinates_[node] = std::move(coordinates);
}

const std::vector<double>& MsspProblem::coordinates(NodeId node) const {
  static const std::vector<double> empty;
  return coordinates_.empty() ? empty : coordinates_.at(node);
}

std::size_t MsspProblem::group_count(NodeId node) const {
  return node < node_count() ? modes_[node].size() : 0;
}

std::span<const NodeId> MsspProblem::successors(NodeId node, std::size_t group) const {
  return modes_.at(node).at(group).successors;
}

GroupMin MsspProblem::minimize_group(NodeId node, std::size_t group,
                                     std::span<const double> w) const {
  const Mode& m = modes_.at(node).at(group);
  ModeMinResult r = minimize_mode(m.cost, w, simplex_);
  if (!std::isinf(r.value) && !std::isfinite(r.value))
    throw std::runtime_error("non-finite cost at node " + std::to_string(node) + " mode " +
                             std::to_string(group));
  return {r.value, std::move(r.xi)};
}

double MsspProblem::control_cost(NodeId node, std::size_t group,
                                 std::span<const double> xi) const {
  return modes_.at(node).at(group).cost.value(xi);
}

DiscreteSsp::DiscreteSsp(std::size_t node_count) : controls_(node_count) {}

std::size_t DiscreteSsp::add_control(NodeId node, DiscreteControl control) {
  check_ids(node_count(), node, control.successors);
  if (control.probabilities.size() != control.successors.size())
    throw std::invalid_argument("probability row length differs from successor count");
  controls_[node].push_back(std::move(control));
  return controls_[node].size() - 1;
}

std::span<const NodeId> DiscreteSsp::successors(NodeId node, std::size_t group) const {
  return controls_.at(node).at(group).successors;
}

GroupMin DiscreteSsp::minimize_group(NodeId node, std::size_t group,
                                     std::span<const double> w) const {
  const DiscreteControl& c = controls_.at(node).at(group);
  double v = c.cost;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (c.probabilities[j] != 0.0) v += c.probabilities[j] * w[j];
  if (std::isinf(v)) return {kInf, {}};
  return {v, c.probabilities};
}

double DiscreteSsp::control_cost(NodeId node, std::size_t group, std::span<const double>) const {
  return controls_.at(node).at(group).cost;
}

}  // namespace mssp
