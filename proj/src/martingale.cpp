#include "bootperc/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "bootperc/critical.hpp"
#include "bootperc/graph.hpp"
#include "bootperc/rng.hpp"
#include "bootperc/stats.hpp"
#include "bootperc/trial_runner.hpp"

namespace bootperc {

PiProcess PiProcess::from_table(std::span<const double> pi_hat_table, std::size_t stopping_time) {
  PiProcess out;
  out.stopping_time = stopping_time;
  out.pi_hat.assign(pi_hat_table.begin(), pi_hat_table.end());
  out.pi = out.pi_hat;
  if (stopping_time < out.pi.size())
    for (std::size_t t = stopping_time + 1; t < out.pi.size(); ++t) out.pi[t] = out.pi_hat[stopping_time];
  return out;
}

std::size_t default_martingale_horizon(double t0, std::size_t n) {
  return std::min(floor_t0(t0) + 1, n);
}

namespace {

// (x - pi) / (1 - pi): one summand of M.
double normalized(double x, double pi) { return (x - pi) / (1.0 - pi); }

}  // namespace

MartingaleTrace martingale_from_trace(const ExplorationTrace& trace, const PiProcess& pi, std::size_t a,
                                      std::size_t n) {
  if (a != trace.initial_size) throw std::invalid_argument("a does not match the trace");
  if (n != trace.infection_step.size()) throw std::invalid_argument("n does not match the trace");
  if (pi.stopping_time != trace.stopping_time) throw std::invalid_argument("pi process built for another run");

  MartingaleTrace out;
  const std::size_t horizon = pi.horizon();
  out.step_values.resize(horizon + 1);
  const auto rest = static_cast<double>(n - a);
  for (std::size_t t = 0; t <= horizon; ++t) {
    if (pi.pi[t] >= 1.0) throw std::domain_error("pi(t) = 1: martingale undefined");
    const double infected = static_cast<double>(trace.infected_at(t));
    out.step_values[t] = (infected - static_cast<double>(a) - rest * pi.pi[t]) / (1.0 - pi.pi[t]);
  }
  for (std::size_t t = 0; t <= horizon; ++t) {
    const double recon = infected_from_martingale(out.step_values[t], pi.pi_hat[t], a, n);
    if (std::abs(recon - static_cast<double>(t)) < 0.5) {
      out.t_prime = t;
      break;
    }
  }
  for (const auto& d : round_differences(trace, pi, n)) {
    out.max_abs_step_diff = std::max(out.max_abs_step_diff, std::abs(d.value));
    if (std::abs(d.value) > d.bound * (1.0 + 1e-12)) out.differences_within_bound = false;
  }
  return out;
}

std::vector<RoundDifference> round_differences(const ExplorationTrace& trace, const PiProcess& pi, std::size_t n) {
  const std::size_t a = trace.initial_size;
  std::vector<RoundDifference> out;
  for (std::size_t tau = 1; tau <= pi.horizon(); ++tau) {
    const double now = pi.pi[tau];
    const double before = pi.pi[tau - 1];
    const double bound = 1.0 / (1.0 - pi.pi_hat[tau - 1]);
    const std::size_t infected_before = trace.infected_at(tau - 1) - a;
    const std::size_t infected_now = trace.infected_at(tau) - a;
    const std::size_t flips = infected_now - infected_before;
    const std::size_t idle = (n - a) - infected_now;
    if (flips > 0) out.push_back({tau, RoundKind::Flip, normalized(1.0, now) - normalized(0.0, before), flips, bound});
    if (idle > 0) out.push_back({tau, RoundKind::Drift, normalized(0.0, now) - normalized(0.0, before), idle, bound});
    if (infected_before > 0)
      out.push_back({tau, RoundKind::Settled, normalized(1.0, now) - normalized(1.0, before), infected_before, bound});
  }
  return out;
}

void write_martingale_csv(std::ostream& out, const ExplorationTrace& trace, const PiProcess& pi,
                          const MartingaleTrace& martingale) {
  out << "t,pi_t,M_t,infected_size\n";
  out.precision(17);
  for (std::size_t t = 0; t < martingale.step_values.size(); ++t)
    out << t << ',' << pi.pi[t] << ',' << martingale.step_values[t] << ',' << trace.infected_at(t) << '\n';
}

namespace {

struct ProbeSample {
  double value = 0.0;
  bool within_bound = true;
  double max_ratio = 0.0;
  bool stopping_time_ok = true;
};

MartingaleCheckReport sample_stopped_martingale(const MartingaleCheckSpec& spec) {
  if (spec.a > spec.n) throw std::invalid_argument("a exceeds n");
  const std::vector<double> table = pi_hat_table(spec.t_probe, spec.p, spec.r);
  ProcessParams params;
  params.r = spec.r;
  params.initially_infected.resize(spec.a);
  std::iota(params.initially_infected.begin(), params.initially_infected.end(), Vertex{0});

  auto one = [&](std::size_t trial) {
    const Graph graph = sample_gnp({spec.n, spec.p, derive_seed(spec.seed, {trial})});
    const ExplorationTrace trace = run_exploration(graph, params, {}, spec.t_probe);
    const PiProcess pi = PiProcess::from_table(table, trace.stopping_time);
    const MartingaleTrace m = martingale_from_trace(trace, pi, spec.a, spec.n);
    ProbeSample s;
    s.value = m.step_values[spec.t_probe];
    s.within_bound = m.differences_within_bound;
    for (const auto& d : round_differences(trace, pi, spec.n))
      s.max_ratio = std::max(s.max_ratio, std::abs(d.value) / d.bound);
    if (trace.stopping_time <= spec.t_probe) s.stopping_time_ok = m.t_prime == trace.stopping_time;
    return s;
  };
  const auto samples = run_trials(spec.trials, spec.workers, one);

  MartingaleCheckReport report;
  report.trials = spec.trials;
  report.samples.reserve(samples.size());
  for (const auto& s : samples) {
    report.samples.push_back(s.value);
    report.difference_violations += !s.within_bound;
    report.stopping_time_mismatches += !s.stopping_time_ok;
    report.max_difference_ratio = std::max(report.max_difference_ratio, s.max_ratio);
  }
  const SampleMoments moments = sample_moments(report.samples);
  report.mean = moments.mean;
  report.stderr_mean = moments.stderr_mean;
  report.var = moments.variance;
  report.z = moments.stderr_mean > 0.0 ? moments.mean / moments.stderr_mean : 0.0;
  const double ph = table[spec.t_probe];
  report.ceiling = static_cast<double>(spec.n) * ph / std::pow(1.0 - ph, 3);
  if (spec.trials > 1) {
    const double noise = report.ceiling * std::sqrt(2.0 / static_cast<double>(spec.trials - 1));
    report.variance_flagged = report.var > report.ceiling + 3.0 * noise;
  }
  return report;
}

}  // namespace

MartingaleCheckReport empirical_martingale_check(const MartingaleCheckSpec& spec) {
  return sample_stopped_martingale(spec);
}

MartingaleCheckReport empirical_variance_check(const MartingaleCheckSpec& spec) {
  return sample_stopped_martingale(spec);
}

}  // namespace bootperc
