#include "bootperc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bootperc/rng.hpp"

namespace bootperc {

void GraphParams::validate() const {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
  if (n > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("vertex count exceeds label range");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
}

namespace {

// Fills CSR arrays from edges (v, w), w < v, emitted in lexicographic order
// of (v, w). Under that order every neighbor list comes out sorted: the
// lower neighbors of x arrive while v == x, the higher ones later.
//
// Lower neighbors are copied row by row. The higher ones are a transpose;
// edges are first bucketed by w so each bucket writes into a cache-sized
// slice of the neighbor array.
void build_csr(std::size_t n, std::span<const Edge> ordered, std::vector<std::size_t>& offsets,
               std::vector<Vertex>& neighbors, std::vector<Edge>& staged) {
  offsets.assign(n + 1, 0);
  for (const auto& [v, w] : ordered) {
    ++offsets[v + 1];
    ++offsets[w + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  neighbors.resize(offsets[n]);

  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [v, w] : ordered) neighbors[cursor[v]++] = w;

  constexpr unsigned kShift = 10;
  const std::size_t buckets = (n >> kShift) + 1;
  std::vector<std::size_t> start(buckets + 1, 0);
  for (const auto& e : ordered) ++start[(e.second >> kShift) + 1];
  for (std::size_t b = 0; b < buckets; ++b) start[b + 1] += start[b];
  staged.resize(ordered.size());
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (const auto& e : ordered) staged[fill[e.second >> kShift]++] = e;
  for (const auto& [v, w] : staged) neighbors[cursor[w]++] = v;
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<Edge> ordered;
  ordered.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop in edge list");
    ordered.emplace_back(std::max(u, v), std::min(u, v));
  }
  std::sort(ordered.begin(), ordered.end());
  if (std::adjacent_find(ordered.begin(), ordered.end()) != ordered.end())
    throw std::invalid_argument("duplicate edge in edge list");
  Graph g;
  std::vector<Edge> staged;
  build_csr(n, ordered, g.offsets_, g.neighbors_, staged);
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  auto adj = degree(u) <= degree(v) ? neighbors(u) : neighbors(v);
  const Vertex target = degree(u) <= degree(v) ? v : u;
  return std::binary_search(adj.begin(), adj.end(), target);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < vertex_count(); ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph sample_gnp(const GraphParams& params) {
  params.validate();
  const std::size_t n = params.n;
  Graph g;
  // Per-thread scratch: trial loops sample many graphs of the same size.
  thread_local std::vector<Edge> ordered;
  thread_local std::vector<Edge> staged;
  ordered.clear();

  if (params.p >= 1.0) {
    ordered.reserve(n * (n - 1) / 2);
    for (Vertex v = 1; v < n; ++v)
      for (Vertex w = 0; w < v; ++w) ordered.emplace_back(v, w);
  } else if (params.p > 0.0) {
    // Batagelj-Brandes: walk pairs (v, w), w < v, row by row, jumping ahead
    // by Geometric(p) failures between successive edges.
    Rng rng(derive_seed(params.seed, StreamTag::Graph));
    const double log_q = std::log1p(-params.p);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    ordered.reserve(static_cast<std::size_t>(pairs * params.p + 4.0 * std::sqrt(pairs * params.p) + 16.0));
    std::uint64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double skip = std::floor(std::log(rng.uniform_open0()) / log_q);
      if (skip >= static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2)) break;
      w += 1 + static_cast<std::int64_t>(skip);
      while (w >= static_cast<std::int64_t>(v) && v < n) {
        w -= static_cast<std::int64_t>(v);
        ++v;
      }
      if (v < n) ordered.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(w));
    }
  }
  build_csr(n, ordered, g.offsets_, g.neighbors_, staged);
  return g;
}

std::size_t degree_into(const Graph& graph, Vertex v, std::span<const std::uint8_t> members) {
  if (v >= graph.vertex_count()) throw std::out_of_range("vertex out of range");
  std::size_t count = 0;
  for (Vertex w : graph.neighbors(v)) count += members[w] != 0;
  return count;
}

std::size_t degree_into(const Graph& graph, Vertex v, std::span<const Vertex> sorted_set) {
  if (v >= graph.vertex_count()) throw std::out_of_range("vertex out of range");
  const auto adj = graph.neighbors(v);
  const bool walk_adj = adj.size() <= sorted_set.size();
  const auto small = walk_adj ? adj : sorted_set;
  const auto large = walk_adj ? sorted_set : adj;
  std::size_t count = 0;
  for (Vertex w : small) count += std::binary_search(large.begin(), large.end(), w);
  return count;
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << "# n " << graph.vertex_count() << " m " << graph.edge_count() << '\n';
  for (const auto& [u, v] : graph.edges()) out << u + 1 << ' ' << v + 1 << '\n';
}

Graph read_edge_list(std::istream& in, std::optional<std::size_t> n) {
  std::vector<Edge> edges;
  std::optional<std::size_t> header_n;
  std::size_t max_label = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line.front() == '#') {
      std::string hash, key;
      std::size_t value = 0;
      fields >> hash >> key;
      if (key == "n" && (fields >> value)) header_n = value;
      continue;
    }
    long long u = 0, v = 0;
    std::string rest;
    if (!(fields >> u >> v) || (fields >> rest) || u < 1 || v < 1)
      throw std::invalid_argument("malformed edge-list line " + std::to_string(line_no));
    max_label = std::max<std::size_t>(max_label, static_cast<std::size_t>(std::max(u, v)));
    edges.emplace_back(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
  }
  const std::size_t count = n.value_or(header_n.value_or(max_label));
  if (count == 0) throw std::invalid_argument("edge list defines no vertices");
  return Graph::from_edges(count, edges);
}

}  // namespace bootperc
