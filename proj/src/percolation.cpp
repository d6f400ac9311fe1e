#include "bootperc/percolation.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "bootperc/rng.hpp"

namespace bootperc {

void ProcessParams::validate(const Graph& graph) const {
  if (r < 2) throw std::invalid_argument("infection threshold r must be at least 2");
  std::vector<std::uint8_t> seen(graph.vertex_count(), 0);
  for (Vertex v : initially_infected) {
    if (v >= graph.vertex_count()) throw std::invalid_argument("initially infected vertex out of range");
    if (seen[v]++) throw std::invalid_argument("initially infected set has a repeated vertex");
  }
}

std::vector<Vertex> ExplorationTrace::infected_set_at(std::size_t t) const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < infection_step.size(); ++v)
    if (infection_step[v] <= t) out.push_back(v);
  return out;
}

std::vector<Vertex> ExplorationTrace::checked_set_at(std::size_t t) const {
  const std::size_t k = std::min(t, checked_order.size());
  std::vector<Vertex> out(checked_order.begin(), checked_order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

SynchronousResult run_synchronous(const Graph& graph, const ProcessParams& params) {
  params.validate(graph);
  const std::size_t n = graph.vertex_count();
  std::vector<std::uint8_t> infected(n, 0);
  std::vector<std::uint32_t> infected_neighbors(n, 0);
  std::vector<Vertex> frontier = params.initially_infected;
  for (Vertex v : frontier) infected[v] = 1;

  SynchronousResult result;
  std::size_t total = frontier.size();
  result.per_round_sizes.push_back(total);
  std::vector<Vertex> next;
  while (!frontier.empty()) {
    next.clear();
    for (Vertex u : frontier)
      for (Vertex w : graph.neighbors(u))
        if (!infected[w] && ++infected_neighbors[w] == params.r) next.push_back(w);
    // Marking after the scan keeps the round simultaneous.
    for (Vertex w : next) infected[w] = 1;
    if (next.empty()) break;
    total += next.size();
    result.per_round_sizes.push_back(total);
    frontier.swap(next);
  }
  for (Vertex v = 0; v < n; ++v)
    if (infected[v]) result.final_set.push_back(v);
  return result;
}

SynchronousResult run_synchronous_reference(const Graph& graph, const ProcessParams& params) {
  params.validate(graph);
  const std::size_t n = graph.vertex_count();
  std::vector<std::uint8_t> infected(n, 0);
  for (Vertex v : params.initially_infected) infected[v] = 1;

  SynchronousResult result;
  std::size_t total = params.initially_infected.size();
  result.per_round_sizes.push_back(total);
  for (;;) {
    std::vector<Vertex> newly;
    for (Vertex v = 0; v < n; ++v)
      if (!infected[v] && degree_into(graph, v, infected) >= params.r) newly.push_back(v);
    if (newly.empty()) break;
    for (Vertex v : newly) infected[v] = 1;
    total += newly.size();
    result.per_round_sizes.push_back(total);
  }
  for (Vertex v = 0; v < n; ++v)
    if (infected[v]) result.final_set.push_back(v);
  return result;
}

namespace {

// Pending set A(t-1) \ Z(t-1) under the three selection policies.
class PendingQueue {
 public:
  explicit PendingQueue(SelectionRule rule) : rule_(rule), rng_(derive_seed(rule.seed, StreamTag::Selection)) {}

  void push(Vertex v) {
    switch (rule_.policy) {
      case SelectionPolicy::LowestIndex: heap_.push(v); break;
      default: list_.push_back(v); break;
    }
  }

  bool empty() const {
    return rule_.policy == SelectionPolicy::LowestIndex ? heap_.empty() : head_ == list_.size();
  }

  Vertex pop() {
    switch (rule_.policy) {
      case SelectionPolicy::LowestIndex: {
        const Vertex v = heap_.top();
        heap_.pop();
        return v;
      }
      case SelectionPolicy::Fifo:
        return list_[head_++];
      case SelectionPolicy::SeededRandom: {
        const std::size_t live = list_.size() - head_;
        const std::size_t pick = head_ + rng_.below(live);
        std::swap(list_[pick], list_.back());
        const Vertex v = list_.back();
        list_.pop_back();
        return v;
      }
    }
    return 0;
  }

 private:
  SelectionRule rule_;
  Rng rng_;
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> heap_;
  std::vector<Vertex> list_;
  std::size_t head_ = 0;
};

}  // namespace

ExplorationTrace run_exploration(const Graph& graph, const ProcessParams& params, SelectionRule rule,
                                 std::size_t max_steps) {
  params.validate(graph);
  const std::size_t n = graph.vertex_count();

  ExplorationTrace trace;
  trace.initial_size = params.initially_infected.size();
  trace.infection_step.assign(n, kNeverInfected);
  std::vector<std::uint32_t> checked_neighbors(n, 0);

  std::vector<Vertex> seeds = params.initially_infected;
  std::sort(seeds.begin(), seeds.end());
  PendingQueue pending(rule);
  for (Vertex v : seeds) {
    trace.infection_step[v] = 0;
    pending.push(v);
  }

  std::size_t infected = seeds.size();
  trace.infected_size.push_back(infected);
  trace.checked_size.push_back(0);
  trace.per_step_new.push_back(0);

  // Loop invariant: at the top of step t, |Z(t-1)| = t-1 < |A(t-1)|.
  std::size_t t = 0;
  while (!pending.empty() && t < max_steps) {
    ++t;
    const Vertex u = pending.pop();
    trace.checked_order.push_back(u);
    std::size_t flipped = 0;
    for (Vertex w : graph.neighbors(u)) {
      if (trace.infection_step[w] != kNeverInfected) continue;
      if (++checked_neighbors[w] == params.r) {
        trace.infection_step[w] = t;
        pending.push(w);
        ++flipped;
      }
    }
    infected += flipped;
    trace.infected_size.push_back(infected);
    trace.checked_size.push_back(t);
    trace.per_step_new.push_back(flipped);
  }
  if (!pending.empty()) {
    trace.stopping_time = kNotStopped;
    return trace;
  }
  trace.stopping_time = t;
  trace.final_set = trace.infected_set_at(t);
  return trace;
}

std::vector<Vertex> RelabeledInstance::map_back(std::span<const Vertex> vertices) const {
  std::vector<Vertex> out;
  out.reserve(vertices.size());
  for (Vertex v : vertices) out.push_back(to_old.at(v));
  std::sort(out.begin(), out.end());
  return out;
}

RelabeledInstance relabel_for_exploration(const Graph& graph, const ProcessParams& params) {
  params.validate(graph);
  const std::size_t n = graph.vertex_count();
  RelabeledInstance out;
  out.to_new.assign(n, 0);
  out.to_old.reserve(n);

  std::vector<Vertex> seeds = params.initially_infected;
  std::sort(seeds.begin(), seeds.end());
  std::vector<std::uint8_t> is_seed(n, 0);
  for (Vertex v : seeds) {
    is_seed[v] = 1;
    out.to_old.push_back(v);
  }
  for (Vertex v = 0; v < n; ++v)
    if (!is_seed[v]) out.to_old.push_back(v);
  for (Vertex i = 0; i < n; ++i) out.to_new[out.to_old[i]] = i;

  auto edges = graph.edges();
  for (auto& [u, v] : edges) {
    u = out.to_new[u];
    v = out.to_new[v];
  }
  out.graph = Graph::from_edges(n, edges);
  out.params.r = params.r;
  for (Vertex i = 0; i < seeds.size(); ++i) out.params.initially_infected.push_back(i);
  return out;
}

void write_trace_csv(std::ostream& out, const ExplorationTrace& trace) {
  out << "t,checked_size,infected_size,new_infections\n";
  for (std::size_t t = 0; t < trace.infected_size.size(); ++t)
    out << t << ',' << trace.checked_size[t] << ',' << trace.infected_size[t] << ',' << trace.per_step_new[t] << '\n';
}

}  // namespace bootperc
