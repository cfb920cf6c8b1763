#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "mssp/solvers/solvers.hpp"

namespace mssp {

namespace {

struct LabelState {
  std::vector<double> values;
  std::vector<std::optional<Control>> policy;
  std::vector<bool> permanent;
  std::vector<double> w;  // scratch
};

LabelState initial_state(const BellmanModel& model) {
  const std::size_t m = model.node_count();
  LabelState s;
  s.values.assign(m + 1, kInf);
  s.values[m] = 0.0;
  s.policy.assign(m + 1, std::nullopt);
  s.permanent.assign(m + 1, false);
  return s;
}

// Re-minimizes every group that contains the newly accepted node; calls
// improved(i) after each label decrease.
template <class OnImprove>
void relax_dependents(const BellmanModel& model, const DependencyGraph& graph, LabelState& s,
                      NodeId accepted, Gating gating, OnImprove&& improved) {
  for (const GroupRef& d : graph.dependents(accepted)) {
    if (s.permanent[d.node]) continue;
    const auto succ = model.successors(d.node, d.group);
    s.w.resize(succ.size());
    bool complete = true;
    for (std::size_t j = 0; j < succ.size(); ++j) {
      if (s.permanent[succ[j]]) {
        s.w[j] = s.values[succ[j]];
      } else {
        s.w[j] = kInf;
        complete = false;
      }
    }
    if (gating == Gating::full_mode && !complete) continue;
    GroupMin r = model.minimize_group(d.node, d.group, s.w);
    if (r.value < s.values[d.node]) {
      s.values[d.node] = r.value;
      s.policy[d.node] = Control{d.group, std::move(r.xi)};
      improved(d.node);
    }
  }
}

// Buckets keyed by floor(value / delta); the array grows on demand.
class BucketQueue {
 public:
  explicit BucketQueue(double delta) : delta_(delta) {}

  std::size_t key(double value) const {
    const double k = std::floor(value / delta_);
    if (!(k < 4294967296.0)) throw std::overflow_error("bucket index exceeds 2^32");
    return static_cast<std::size_t>(k);
  }

  // Returns true if the node had to be placed at or below the cursor.
  bool place(NodeId node, double value, std::vector<std::size_t>& where) {
    std::size_t k = key(value);
    bool late = false;
    if (started_ && k <= cursor_) {
      late = true;
      k = cursor_;
    }
    if (k >= buckets_.size()) buckets_.resize(std::max(k + 1, 2 * buckets_.size()));
    buckets_[k].push_back(node);
    where[node] = k;
    return late;
  }

  void start() { started_ = true; }
  std::size_t cursor() const { return cursor_; }
  bool exhausted() const { return cursor_ >= buckets_.size(); }
  std::vector<NodeId>& current() { return buckets_[cursor_]; }
  void advance() { ++cursor_; }

 private:
  double delta_;
  std::vector<std::vector<NodeId>> buckets_;
  std::size_t cursor_ = 0;
  bool started_ = false;
};

}  // namespace

ValueSolution dijkstra_solve(const BellmanModel& model, const LabelSettingOptions& options) {
  const DependencyGraph graph(model);
  LabelState s = initial_state(model);
  ValueSolution sol;
  sol.diagnostics.method = "dijkstra";

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.push({0.0, model.target()});
  while (!heap.empty()) {
    const auto [value, x] = heap.top();
    heap.pop();
    if (s.permanent[x] || value != s.values[x]) continue;
    s.permanent[x] = true;
    sol.diagnostics.accept_order.push_back(x);
    relax_dependents(model, graph, s, x, options.gating,
                     [&](NodeId i) { heap.push({s.values[i], i}); });
  }
  sol.diagnostics.iterations = sol.diagnostics.accept_order.size();
  sol.values = std::move(s.values);
  sol.policy = std::move(s.policy);
  return sol;
}

ValueSolution dial_solve(const BellmanModel& model, double delta,
                         const LabelSettingOptions& options) {
  if (!(delta > 0.0)) throw std::invalid_argument("bucket width must be positive; use dijkstra_solve");
  const DependencyGraph graph(model);
  LabelState s = initial_state(model);
  ValueSolution sol;
  sol.diagnostics.method = "dial";
  sol.diagnostics.bucket_width = delta;

  const std::size_t total = model.node_count() + 1;
  constexpr auto kNowhere = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> where(total, kNowhere);
  BucketQueue queue(delta);
  auto on_improve = [&](NodeId i) {
    if (queue.place(i, s.values[i], where)) ++sol.diagnostics.late_updates;
  };

  // The target is accepted before the cursor starts, so zero-cost exits
  // landing in bucket 0 are not counted as late.
  const NodeId t = model.target();
  s.permanent[t] = true;
  sol.diagnostics.accept_order.push_back(t);
  relax_dependents(model, graph, s, t, options.gating, on_improve);
  queue.start();

  std::vector<NodeId> batch;
  while (!queue.exhausted()) {
    std::vector<NodeId>& bucket = queue.current();
    batch.clear();
    for (NodeId i : bucket)
      if (!s.permanent[i] && where[i] == queue.cursor()) batch.push_back(i);
    bucket.clear();
    if (batch.empty()) {
      queue.advance();
      continue;
    }
    std::sort(batch.begin(), batch.end());
    batch.erase(std::unique(batch.begin(), batch.end()), batch.end());
    ++sol.diagnostics.buckets_processed;
    for (NodeId x : batch) {
      s.permanent[x] = true;
      where[x] = kNowhere;
      sol.diagnostics.accept_order.push_back(x);
    }
    for (NodeId x : batch) relax_dependents(model, graph, s, x, options.gating, on_improve);
    // late arrivals were placed into the cursor bucket; loop re-reads it
  }
  sol.diagnostics.iterations = sol.diagnostics.buckets_processed;
  sol.values = std::move(s.values);
  sol.policy = std::move(s.policy);
  return sol;
}

}  // namespace mssp
