#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "bootperc/percolation.hpp"
#include "bootperc/rng.hpp"

using namespace bootperc;

namespace {

struct Instance {
  Graph graph;
  ProcessParams params;
};

// Small random instances; A(0) drawn by independent coin flips.
Instance random_instance(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 5 + rng.below(56);
  const double ps[] = {0.05, 0.1, 0.2, 0.3, 0.5};
  const double p = ps[rng.below(5)];
  Instance inst{sample_gnp({n, p, derive_seed(seed, {1})}), {}};
  inst.params.r = 2 + static_cast<unsigned>(rng.below(2));
  const double seed_rate = 0.05 + 0.3 * rng.uniform_open0();
  for (Vertex v = 0; v < n; ++v)
    if (rng.uniform_open0() < seed_rate) inst.params.initially_infected.push_back(v);
  return inst;
}

std::vector<Vertex> sorted(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Graph triangle() {
  const Edge edges[] = {{0, 1}, {1, 2}, {0, 2}};
  return Graph::from_edges(3, edges);
}

Graph star5() {
  const Edge edges[] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  return Graph::from_edges(5, edges);
}

}  // namespace

TEST_CASE("synchronous examples") {
  const auto k3 = run_synchronous(triangle(), {2, {0, 1}});
  CHECK(k3.final_set == std::vector<Vertex>{0, 1, 2});
  CHECK(k3.per_round_sizes == std::vector<std::size_t>{2, 3});

  const auto empty = run_synchronous(sample_gnp({6, 0.0, 0}), {2, {0, 1, 2}});
  CHECK(empty.final_set == std::vector<Vertex>{0, 1, 2});
  CHECK(empty.per_round_sizes == std::vector<std::size_t>{3});

  const auto star = run_synchronous(star5(), {2, {1, 2}});
  CHECK(star.final_set == std::vector<Vertex>{0, 1, 2});

  const auto none = run_synchronous(triangle(), {2, {}});
  CHECK(none.final_set.empty());
}

TEST_CASE("exploration examples") {
  const auto k3 = run_exploration(triangle(), {2, {0, 1}});
  CHECK(k3.stopping_time == 3);
  CHECK(k3.infected_size == std::vector<std::size_t>{2, 2, 3, 3});
  CHECK(k3.per_step_new == std::vector<std::size_t>{0, 0, 1, 0});
  CHECK(k3.checked_order == std::vector<Vertex>{0, 1, 2});
  CHECK(k3.infection_step[2] == 2);

  const auto empty = run_exploration(sample_gnp({6, 0.0, 0}), {2, {0, 1, 2}});
  CHECK(empty.stopping_time == 3);
  CHECK(empty.final_set == std::vector<Vertex>{0, 1, 2});
  CHECK(empty.infected_at(100) == 3);

  const auto none = run_exploration(triangle(), {2, {}});
  CHECK(none.stopping_time == 0);
  CHECK(none.final_set.empty());
  CHECK(none.infected_size == std::vector<std::size_t>{0});
}

TEST_CASE("process parameter validation") {
  CHECK_THROWS_AS(run_synchronous(triangle(), {1, {0}}), std::invalid_argument);
  CHECK_THROWS_AS(run_exploration(triangle(), {2, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(run_exploration(triangle(), {2, {3}}), std::invalid_argument);
}

TEST_CASE("synchronous, reference and exploration agree on random instances") {
  const SelectionRule rules[] = {
      {SelectionPolicy::LowestIndex, 0}, {SelectionPolicy::Fifo, 0}, {SelectionPolicy::SeededRandom, 17}};
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto inst = random_instance(s);
    const auto fast = run_synchronous(inst.graph, inst.params);
    const auto slow = run_synchronous_reference(inst.graph, inst.params);
    REQUIRE(fast.final_set == slow.final_set);
    REQUIRE(fast.per_round_sizes == slow.per_round_sizes);
    for (const auto& rule : rules) {
      const auto tr = run_exploration(inst.graph, inst.params, rule);
      REQUIRE(sorted(tr.final_set) == fast.final_set);
      REQUIRE(tr.stopping_time == tr.final_set.size());
      REQUIRE(tr.infected_size.size() == tr.stopping_time + 1);
      REQUIRE(tr.infected_size[0] == inst.params.initially_infected.size());
      std::size_t running = tr.infected_size[0];
      for (std::size_t t = 0; t <= tr.stopping_time; ++t) {
        REQUIRE(tr.checked_size[t] == t);
        running += t > 0 ? tr.per_step_new[t] : 0;
        REQUIRE(tr.infected_size[t] == running);
        if (t < tr.stopping_time) REQUIRE(tr.infected_size[t] > t);
      }
      REQUIRE(tr.infected_size.back() == tr.stopping_time);
      REQUIRE(tr.infected_set_at(tr.stopping_time) == fast.final_set);
      REQUIRE(tr.checked_set_at(tr.stopping_time) == fast.final_set);
    }
  }
}

TEST_CASE("final set is monotone in the seed set") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto inst = random_instance(1000 + s);
    const auto small = run_synchronous(inst.graph, inst.params).final_set;
    Rng rng(s);
    std::vector<std::uint8_t> in(inst.graph.vertex_count(), 0);
    for (Vertex v : inst.params.initially_infected) in[v] = 1;
    for (Vertex v = 0; v < inst.graph.vertex_count(); ++v)
      if (!in[v] && rng.below(4) == 0) inst.params.initially_infected.push_back(v);
    const auto large = run_synchronous(inst.graph, inst.params).final_set;
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST_CASE("relabelling for exploration") {
  const Edge edges[] = {{0, 2}, {2, 4}, {1, 3}};
  const Graph g = Graph::from_edges(5, edges);
  const auto rel = relabel_for_exploration(g, {2, {2, 4}});
  CHECK(rel.to_new == std::vector<Vertex>{2, 3, 0, 4, 1});
  CHECK(rel.to_old == std::vector<Vertex>{2, 4, 0, 1, 3});
  CHECK(rel.params.initially_infected == std::vector<Vertex>{0, 1});
  CHECK(rel.graph.has_edge(0, 2));
  CHECK(rel.graph.has_edge(0, 1));
  CHECK(rel.graph.has_edge(3, 4));
  CHECK(rel.graph.edge_count() == 3);

  const auto ident = relabel_for_exploration(triangle(), {2, {0, 1}});
  CHECK(ident.graph == triangle());

  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = random_instance(5000 + s);
    const auto r2 = relabel_for_exploration(inst.graph, inst.params);
    const auto tr = run_exploration(r2.graph, r2.params);
    CHECK(r2.map_back(tr.final_set) == run_synchronous(inst.graph, inst.params).final_set);
  }
}

TEST_CASE("trace csv") {
  std::ostringstream out;
  write_trace_csv(out, run_exploration(triangle(), {2, {0, 1}}));
  CHECK(out.str() ==
        "t,checked_size,infected_size,new_infections\n"
        "0,0,2,0\n1,1,2,0\n2,2,3,1\n3,3,3,0\n");
}
