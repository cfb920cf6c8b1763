#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mssp/core/problem.hpp"

namespace mssp {

struct GroupRef {
  NodeId node;
  std::size_t group;
};

/// Union dependency graph: i → j whenever j appears in some group of i.
class DependencyGraph {
 public:
  explicit DependencyGraph(const BellmanModel& model);

  std::size_t node_count() const { return successors_.size() - 1; }
  /// Distinct successors of i over all its groups, ascending.
  const std::vector<NodeId>& successors(NodeId i) const { return successors_[i]; }
  /// Every (node, group) whose successor list contains j.
  const std::vector<GroupRef>& dependents(NodeId j) const { return dependents_[j]; }
  bool has_edge(NodeId from, NodeId to) const;

  /// Order with the target first in which every node follows all of its
  /// successors; nullopt if the graph has a cycle.
  std::optional<std::vector<NodeId>> topological_order() const;
  /// A directed cycle x₁ → x₂ → … → x₁ (first node repeated at the end), or
  /// empty if there is none.
  std::vector<NodeId> find_cycle() const;

 private:
  std::vector<std::vector<NodeId>> successors_;
  std::vector<std::vector<GroupRef>> dependents_;
};

/// X_c: nodes from which the target is reachable with probability one under
/// some policy. Indexed by node id, size M+1; the target is always included.
std::vector<bool> reachable_set(const BellmanModel& model);

}  // namespace mssp
