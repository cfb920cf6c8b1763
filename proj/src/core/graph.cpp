#include "mssp/core/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace mssp {

DependencyGraph::DependencyGraph(const BellmanModel& model)
    : successors_(model.node_count() + 1), dependents_(model.node_count() + 1) {
  for (NodeId i = 0; i < model.node_count(); ++i) {
    auto& out = successors_[i];
    for (std::size_t g = 0; g < model.group_count(i); ++g) {
      for (NodeId s : model.successors(i, g)) {
        out.push_back(s);
        dependents_[s].push_back({i, g});
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
}

bool DependencyGraph::has_edge(NodeId from, NodeId to) const {
  const auto& s = successors_[from];
  return std::binary_search(s.begin(), s.end(), to);
}

std::optional<std::vector<NodeId>> DependencyGraph::topological_order() const {
  const std::size_t total = successors_.size();
  std::vector<std::size_t> pending(total);
  for (std::size_t i = 0; i < total; ++i) pending[i] = successors_[i].size();
  // distinct predecessor lists, so each edge decrements once
  std::vector<std::vector<NodeId>> preds(total);
  for (NodeId i = 0; i < total; ++i)
    for (NodeId s : successors_[i]) preds[s].push_back(i);

  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  const auto t = static_cast<NodeId>(node_count());
  std::vector<NodeId> order;
  order.reserve(total);
  order.push_back(t);
  for (NodeId p : preds[t])
    if (--pending[p] == 0) ready.push(p);
  for (NodeId i = 0; i < t; ++i)
    if (successors_[i].empty()) ready.push(i);
  while (!ready.empty()) {
    const NodeId x = ready.top();
    ready.pop();
    order.push_back(x);
    for (NodeId p : preds[x])
      if (--pending[p] == 0) ready.push(p);
  }
  if (order.size() != total) return std::nullopt;
  return order;
}

std::vector<NodeId> DependencyGraph::find_cycle() const {
  const std::size_t total = successors_.size();
  enum : char { white, grey, black };
  std::vector<char> colour(total, white);
  std::vector<NodeId> stack;
  std::vector<std::size_t> next_edge(total, 0);
  for (NodeId root = 0; root < total; ++root) {
    if (colour[root] != white) continue;
    stack.push_back(root);
    colour[root] = grey;
    while (!stack.empty()) {
      const NodeId x = stack.back();
      if (next_edge[x] < successors_[x].size()) {
        const NodeId y = successors_[x][next_edge[x]++];
        if (colour[y] == grey) {
          auto it = std::find(stack.begin(), stack.end(), y);
          std::vector<NodeId> cycle(it, stack.end());
          cycle.push_back(y);
          return cycle;
        }
        if (colour[y] == white) {
          colour[y] = grey;
          stack.push_back(y);
        }
      } else {
        colour[x] = black;
        stack.pop_back();
      }
    }
  }
  return {};
}

std::vector<bool> reachable_set(const BellmanModel& model) {
  const std::size_t m = model.node_count();
  const NodeId t = model.target();

  if (model.has_pure_controls()) {
    // A vertex control onto any successor already in X_c is always available.
    DependencyGraph graph(model);
    std::vector<bool> in(m + 1, false);
    in[t] = true;
    std::vector<NodeId> frontier{t};
    while (!frontier.empty()) {
      const NodeId s = frontier.back();
      frontier.pop_back();
      for (const GroupRef& d : graph.dependents(s)) {
        if (!in[d.node]) {
          in[d.node] = true;
          frontier.push_back(d.node);
        }
      }
    }
    return in;
  }

  // Almost-sure reachability: shrink Y until every node of Y can reach t
  // using only controls that stay inside Y.
  std::vector<bool> y(m + 1, true);
  while (true) {
    std::vector<bool> r(m + 1, false);
    r[t] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (NodeId i = 0; i < m; ++i) {
        if (!y[i] || r[i]) continue;
        for (std::size_t g = 0; g < model.group_count(i) && !r[i]; ++g) {
          const auto succ = model.successors(i, g);
          const bool stays = std::all_of(succ.begin(), succ.end(), [&](NodeId s) { return y[s]; });
          const bool hits = std::any_of(succ.begin(), succ.end(), [&](NodeId s) { return r[s]; });
          if (stays && hits) {
            r[i] = true;
            grew = true;
          }
        }
      }
    }
    if (r == y) return y;
    y = std::move(r);
  }
}

}  // namespace mssp
