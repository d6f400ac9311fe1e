#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "bootperc/critical.hpp"
#include "bootperc/martingale.hpp"
#include "bootperc/rng.hpp"

using namespace bootperc;

namespace {

Graph triangle() {
  const Edge edges[] = {{0, 1}, {1, 2}, {0, 2}};
  return Graph::from_edges(3, edges);
}

ProcessParams first_a(std::size_t a, unsigned r) {
  ProcessParams params{r, std::vector<Vertex>(a)};
  std::iota(params.initially_infected.begin(), params.initially_infected.end(), Vertex{0});
  return params;
}

}  // namespace

TEST_CASE("pi process freezes at the stopping time") {
  const std::vector<double> table = {0.0, 0.0, 0.1, 0.2, 0.3};
  const auto pi = PiProcess::from_table(table, 2);
  CHECK(pi.pi == std::vector<double>{0.0, 0.0, 0.1, 0.1, 0.1});
  CHECK(pi.horizon() == 4);
  for (std::size_t t = 0; t <= 4; ++t) CHECK(pi.pi[t] <= pi.pi_hat[t]);
  CHECK(default_martingale_horizon(8.0, 100) == 9);
  CHECK(default_martingale_horizon(8.0, 5) == 5);
}

TEST_CASE("martingale on hand-built traces") {
  // Empty graph: no flips, so M(t) = -(n - a) pi(t) / (1 - pi(t)) until T.
  const Graph empty = sample_gnp({10, 0.0, 0});
  const auto trace = run_exploration(empty, first_a(3, 2));
  const std::vector<double> table = {0.0, 0.0, 0.1, 0.2, 0.3};
  const auto pi = PiProcess::from_table(table, trace.stopping_time);
  const auto m = martingale_from_trace(trace, pi, 3, 10);
  CHECK(m.step_values[0] == 0.0);
  CHECK(m.step_values[2] == doctest::Approx(-7.0 * 0.1 / 0.9).epsilon(1e-15));
  CHECK(m.step_values[4] == doctest::Approx(-7.0 * 0.2 / 0.8).epsilon(1e-15));
  CHECK(m.differences_within_bound);

  // K3 from {0, 1}: vertex 2 flips at step 2.
  const auto k3 = run_exploration(triangle(), first_a(2, 2));
  const std::vector<double> table3 = {0.0, 0.0, 0.25, 0.5};
  const auto pi3 = PiProcess::from_table(table3, k3.stopping_time);
  const auto diffs = round_differences(k3, pi3, 3);
  bool saw_flip = false;
  for (const auto& d : diffs) {
    if (d.kind == RoundKind::Flip) {
      saw_flip = true;
      CHECK(d.step == 2);
      CHECK(d.value == doctest::Approx(1.0 / (1.0 - pi3.pi[1])).epsilon(1e-15));
    }
    if (d.kind == RoundKind::Settled) CHECK(d.value == doctest::Approx(0.0));
  }
  CHECK(saw_flip);
  CHECK_THROWS_AS(martingale_from_trace(k3, pi3, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(martingale_from_trace(k3, pi3, 2, 4), std::invalid_argument);
}

TEST_CASE("pi = 1 is rejected") {
  const auto k3 = run_exploration(triangle(), first_a(2, 2));
  const std::vector<double> table = {0.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(martingale_from_trace(k3, PiProcess::from_table(table, k3.stopping_time), 2, 3),
                  std::domain_error);
}

TEST_CASE("round differences telescope and respect the bound") {
  const std::size_t n = 100000;
  const double p = std::pow(double(n), -0.7);
  const auto crit = compute_critical(n, p, 2);
  const std::size_t horizon = default_martingale_horizon(crit.t0, n);
  const auto table = pi_hat_table(horizon, p, 2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t a = static_cast<std::size_t>(std::round(crit.ac)) + s % 5;
    const auto trace = run_exploration(sample_gnp({n, p, s}), first_a(a, 2));
    const auto pi = PiProcess::from_table(table, trace.stopping_time);
    const auto m = martingale_from_trace(trace, pi, a, n);
    CHECK(m.step_values[0] == 0.0);
    CHECK(m.differences_within_bound);
    const auto diffs = round_differences(trace, pi, n);
    std::vector<double> per_step(horizon + 1, 0.0);
    for (const auto& d : diffs) {
      per_step[d.step] += d.value * static_cast<double>(d.multiplicity);
      CHECK(std::abs(d.value) <= d.bound * (1.0 + 1e-12));
    }
    for (std::size_t t = 1; t <= horizon; ++t)
      CHECK(per_step[t] == doctest::Approx(m.step_values[t] - m.step_values[t - 1]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("reconstruction reproduces |A(t)| and locates T") {
  const std::size_t n = 100000;
  const double p = std::pow(double(n), -0.7);
  const auto crit = compute_critical(n, p, 2);
  const std::size_t horizon = default_martingale_horizon(crit.t0, n);
  const auto table = pi_hat_table(horizon, p, 2);
  const std::size_t a = static_cast<std::size_t>(std::round(crit.ac));
  int stopped_early = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto trace = run_exploration(sample_gnp({n, p, 100 + s}), first_a(a - 10 + s % 20, 2));
    const std::size_t a_run = trace.initial_size;
    const auto pi = PiProcess::from_table(table, trace.stopping_time);
    const auto m = martingale_from_trace(trace, pi, a_run, n);
    for (std::size_t t = 0; t <= horizon; ++t) {
      const double recon = infected_from_martingale(m.step_values[t], pi.pi[t], a_run, n);
      const double actual = static_cast<double>(trace.infected_at(t));
      CHECK(std::abs(recon - actual) <= 1e-9 * std::max(actual, 1.0));
    }
    if (trace.stopping_time <= horizon) {
      ++stopped_early;
      REQUIRE(m.t_prime.has_value());
      CHECK(*m.t_prime == trace.stopping_time);
    }
  }
  CHECK(stopped_early > 0);
}

TEST_CASE("empirical check degenerate inputs") {
  MartingaleCheckSpec spec{2000, 0.0, 2, 10, 5, 20, 1, 1};
  auto rep = empirical_martingale_check(spec);
  CHECK(rep.mean == 0.0);
  CHECK(rep.var == 0.0);
  CHECK(rep.ceiling == 0.0);

  spec.p = 0.01;
  spec.t_probe = 1;
  rep = empirical_variance_check(spec);
  CHECK(rep.ceiling == 0.0);
  for (double v : rep.samples) CHECK(v == 0.0);

  spec.t_probe = 0;
  rep = empirical_martingale_check(spec);
  for (double v : rep.samples) CHECK(v == 0.0);
}

TEST_CASE("stopped martingale has mean zero and bounded variance") {
  const std::size_t n = 20000;
  const double p = std::pow(double(n), -0.7);
  const auto crit = compute_critical(n, p, 2);
  MartingaleCheckSpec spec{n, p, 2, static_cast<std::size_t>(std::round(crit.ac)), crit.tc, 400, 99, 2};
  const auto rep = empirical_martingale_check(spec);
  CHECK(std::abs(rep.z) <= 4.0);
  CHECK(rep.difference_violations == 0);
  CHECK(rep.stopping_time_mismatches == 0);
  CHECK(rep.max_difference_ratio <= 1.0 + 1e-12);
  CHECK_FALSE(rep.variance_flagged);
  spec.workers = 1;
  CHECK(empirical_martingale_check(spec).samples == rep.samples);
}

TEST_CASE("martingale csv") {
  const auto k3 = run_exploration(triangle(), first_a(2, 2));
  const std::vector<double> table = {0.0, 0.0, 0.25, 0.5};
  const auto pi = PiProcess::from_table(table, k3.stopping_time);
  std::ostringstream out;
  write_martingale_csv(out, k3, pi, martingale_from_trace(k3, pi, 2, 3));
  CHECK(out.str().rfind("t,pi_t,M_t,infected_size\n0,0,0,2\n", 0) == 0);
}
