#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "bootperc/graph.hpp"

namespace bootperc {

/// Infection threshold and initially infected set A(0).
struct ProcessParams {
  unsigned r = 2;
  std::vector<Vertex> initially_infected;

  /// Throws std::invalid_argument unless r >= 2 and A(0) is a set of valid
  /// vertices of `graph`.
  void validate(const Graph& graph) const;
};

enum class SelectionPolicy { LowestIndex, Fifo, SeededRandom };

/// How the exploration picks u_t from A(t-1) \ Z(t-1). The seed is used only
/// by SeededRandom. FIFO orders by infection step, then by label.
struct SelectionRule {
  SelectionPolicy policy = SelectionPolicy::LowestIndex;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kNeverInfected = std::numeric_limits<std::size_t>::max();
/// stopping_time of a trace cut off by a step limit before it stopped.
inline constexpr std::size_t kNotStopped = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kNoStepLimit = std::numeric_limits<std::size_t>::max();

/// Step-indexed record of one exploration run.
///
/// Index t runs over 0..T. checked_size[t] == t, infected_size[t] == |A(t)|
/// and per_step_new[t] counts indicators that flipped at step t (0 at t = 0).
/// infection_step[v] is 0 for A(0), the flip step otherwise, or
/// kNeverInfected; checked_order lists u_1..u_T.
///
/// A run cut off by a step limit L before stopping has stopping_time ==
/// kNotStopped, an empty final_set, and step data for t <= L only.
struct ExplorationTrace {
  std::size_t initial_size = 0;
  std::vector<std::size_t> infected_size;
  std::vector<std::size_t> checked_size;
  std::vector<std::size_t> per_step_new;
  std::size_t stopping_time = 0;
  std::vector<Vertex> final_set;
  std::vector<Vertex> checked_order;
  std::vector<std::size_t> infection_step;

  /// |A(t)| for any t >= 0; constant past the stopping time.
  std::size_t infected_at(std::size_t t) const {
    return infected_size[std::min(t, stopping_time)];
  }
  /// A(t) as a sorted vertex list.
  std::vector<Vertex> infected_set_at(std::size_t t) const;
  /// Z(t) as a sorted vertex list, t clamped to T.
  std::vector<Vertex> checked_set_at(std::size_t t) const;
};

struct SynchronousResult {
  std::vector<Vertex> final_set;
  /// |A(0)| followed by the infected count after every round that infected
  /// at least one vertex.
  std::vector<std::size_t> per_round_sizes;
};

/// Round-synchronous bootstrap percolation: each round every uninfected
/// vertex with >= r infected neighbours becomes infected simultaneously.
/// Frontier-driven, O(n + m).
SynchronousResult run_synchronous(const Graph& graph, const ProcessParams& params);

/// Same process by brute force: every round rescans every uninfected vertex.
/// O(n * m) worst case; kept as the independent reference for tests.
SynchronousResult run_synchronous_reference(const Graph& graph, const ProcessParams& params);

/// Sequential exploration: one infected vertex u_t is checked per step and
/// a non-seed vertex is infected once it has >= r neighbours in Z(t).
/// Neighbour counts into Z are maintained incrementally, O(n + m) total.
ExplorationTrace run_exploration(const Graph& graph, const ProcessParams& params,
                                 SelectionRule rule = {}, std::size_t max_steps = kNoStepLimit);

/// An isomorphic copy of an instance with A(0) relabelled to {0, ..., a-1}
/// and the remaining vertices following in increasing original order.
struct RelabeledInstance {
  Graph graph;
  ProcessParams params;
  std::vector<Vertex> to_new;  // original label -> new label
  std::vector<Vertex> to_old;  // new label -> original label

  /// Maps a set of new labels back to sorted original labels.
  std::vector<Vertex> map_back(std::span<const Vertex> vertices) const;
};

RelabeledInstance relabel_for_exploration(const Graph& graph, const ProcessParams& params);

/// CSV with header "t,checked_size,infected_size,new_infections".
void write_trace_csv(std::ostream& out, const ExplorationTrace& trace);

}  // namespace bootperc
