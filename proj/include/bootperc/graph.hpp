#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace bootperc {

/// Vertex label. Internally 0-based; text formats use 1-based labels.
using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

struct GraphParams {
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless n >= 1 and 0 <= p <= 1.
  void validate() const;
};

/// Immutable simple undirected graph in compressed sparse row form.
/// Neighbor lists are sorted, symmetric, free of loops and duplicates.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary edge list. Rejects loops, duplicates
  /// (in either orientation) and endpoints >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex u, Vertex v) const;

  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph sample_gnp(const GraphParams& params);

  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
};

/// Samples G(n, p) by geometric skipping over the linearized pair index,
/// in expected O(n + m) time. Identical params give an identical graph.
Graph sample_gnp(const GraphParams& params);

/// |adj(v) ∩ S|. `members` is an n-sized membership mask for S.
std::size_t degree_into(const Graph& graph, Vertex v, std::span<const std::uint8_t> members);

/// |adj(v) ∩ S| for a sorted vertex list S; walks the shorter side and
/// binary-searches the other.
std::size_t degree_into(const Graph& graph, Vertex v, std::span<const Vertex> sorted_set);

/// Writes "# n <n> m <m>" followed by one "u v" line per edge, 1-based, u < v.
void write_edge_list(std::ostream& out, const Graph& graph);

/// Reads the format written by write_edge_list. Lines starting with '#' are
/// comments, except that a "# n <n>" header fixes the vertex count. Without a
/// header or an explicit n, the largest label is used.
Graph read_edge_list(std::istream& in, std::optional<std::size_t> n = std::nullopt);

}  // namespace bootperc
