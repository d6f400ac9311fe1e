#include "bootperc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bootperc/disjoint_set.hpp"
#include "bootperc/stats.hpp"
#include "bootperc/trial_runner.hpp"

namespace bootperc {

Regime Regime::make(std::size_t n, double p, unsigned r) {
  Regime out;
  out.n = n;
  out.p = p;
  out.r = r;
  out.crit = compute_critical(n, p, r);
  return out;
}

std::size_t Regime::seed_size(double omega0) const {
  const double a = std::round(crit.ac + omega0);
  return static_cast<std::size_t>(std::clamp(a, 0.0, static_cast<double>(n)));
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Subcritical: return "subcritical";
    case Classification::Supercritical: return "supercritical";
    case Classification::Ambiguous: return "ambiguous";
  }
  return "ambiguous";
}

Classification classify(std::size_t final_size, std::size_t tc, std::size_t n) {
  if (final_size < tc) return Classification::Subcritical;
  if (2 * final_size > n) return Classification::Supercritical;
  return Classification::Ambiguous;
}

std::vector<Vertex> random_subset(std::size_t n, std::size_t a, Rng& rng) {
  if (a > n) throw std::invalid_argument("subset larger than the ground set");
  std::vector<std::uint8_t> chosen(n, 0);
  for (std::size_t j = n - a; j < n; ++j) {
    const std::size_t pick = rng.below(j + 1);
    chosen[chosen[pick] ? j : pick] = 1;
  }
  std::vector<Vertex> out;
  out.reserve(a);
  for (Vertex v = 0; v < n; ++v)
    if (chosen[v]) out.push_back(v);
  return out;
}

TrialInstance simulate_instance(const Regime& regime, std::size_t a, std::uint64_t seed) {
  if (a > regime.n) throw std::invalid_argument("a exceeds n");
  TrialInstance out;
  out.graph = sample_gnp({regime.n, regime.p, seed});
  Rng rng(derive_seed(seed, StreamTag::SeedSet));
  out.seeds = random_subset(regime.n, a, rng);
  out.trace = run_exploration(out.graph, {regime.r, out.seeds});
  return out;
}

namespace {

TrialOutcome outcome_of(const Regime& regime, const ExplorationTrace& trace, std::uint64_t seed) {
  TrialOutcome out;
  out.seed = seed;
  out.final_size = trace.final_set.size();
  out.stopping_time = trace.stopping_time;
  out.classification = classify(out.final_size, regime.crit.tc, regime.n);
  out.t0_reached = static_cast<double>(trace.stopping_time) > regime.crit.t0;
  if (out.t0_reached) out.infected_at_t0 = trace.infected_at(floor_t0(regime.crit.t0));
  return out;
}

}  // namespace

TrialOutcome run_trial(const Regime& regime, std::size_t a, std::uint64_t seed) {
  const TrialInstance inst = simulate_instance(regime, a, seed);
  return outcome_of(regime, inst.trace, seed);
}

TrialOutcome run_trial(std::size_t n, double p, unsigned r, std::size_t a, std::uint64_t seed) {
  return run_trial(Regime::make(n, p, r), a, seed);
}

double SweepReport::ambiguous_fraction() const {
  std::size_t total = 0, ambiguous = 0;
  for (const auto& cell : cells) {
    total += cell.trials;
    for (const auto& o : cell.outcomes) ambiguous += o.classification == Classification::Ambiguous;
  }
  return total == 0 ? 0.0 : static_cast<double>(ambiguous) / static_cast<double>(total);
}

SweepReport sweep_omega0(const Regime& regime, std::span<const double> omega0_grid, std::size_t trials_per_cell,
                         std::uint64_t seed, unsigned workers) {
  if (omega0_grid.empty()) throw std::invalid_argument("omega0 grid is empty");
  if (trials_per_cell == 0) throw std::invalid_argument("trials per cell must be positive");

  SweepReport report;
  report.n = regime.n;
  report.p = regime.p;
  report.r = regime.r;
  report.t0 = regime.crit.t0;
  report.tc = regime.crit.tc;
  report.ac = regime.crit.ac;
  report.seed = seed;

  for (std::size_t c = 0; c < omega0_grid.size(); ++c) {
    SweepCell cell;
    cell.omega0 = omega0_grid[c];
    cell.a = regime.seed_size(cell.omega0);
    cell.omega0_effective = regime.effective_omega0(cell.a);
    cell.trials = trials_per_cell;
    cell.outcomes = run_trials(trials_per_cell, workers, [&](std::size_t i) {
      return run_trial(regime, cell.a, derive_seed(seed, {c, i}));
    });

    std::size_t sub = 0, super = 0;
    CompensatedSum final_sum;
    for (const auto& o : cell.outcomes) {
      sub += o.classification == Classification::Subcritical;
      super += o.classification == Classification::Supercritical;
      final_sum.add(static_cast<double>(o.final_size));
    }
    const auto trials = static_cast<double>(trials_per_cell);
    cell.frac_sub = static_cast<double>(sub) / trials;
    cell.frac_super = static_cast<double>(super) / trials;
    cell.frac_ambig = static_cast<double>(trials_per_cell - sub - super) / trials;
    cell.mean_final = final_sum.value() / trials;

    const double w = cell.omega0_effective;
    const double t0 = regime.crit.t0, ac = regime.crit.ac;
    if (w < 0.0) {
      cell.bound = bound_theorem1(-w, t0);
      cell.bound_exempt = !(-w <= ac - regime.r);
      cell.failure_fraction = 1.0 - cell.frac_sub;
    } else if (w > 0.0) {
      cell.bound = bound_theorem2(w, t0, ac);
      cell.bound_exempt = !(w <= t0 - ac);
      cell.failure_fraction = 1.0 - cell.frac_super;
    } else {
      cell.failure_fraction = 1.0 - std::max(cell.frac_sub, cell.frac_super);
    }
    if (cell.bound) {
      cell.pass_line = *cell.bound + 5.0 * binomial_stderr(*cell.bound, trials_per_cell);
      cell.bound_ok = cell.bound_exempt || cell.failure_fraction <= cell.pass_line;
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::vector<Vertex> near_infected_set(const Graph& graph, std::span<const Vertex> checked, unsigned r,
                                      std::span<const Vertex> exclude) {
  if (r == 0) throw std::invalid_argument("r must be positive");
  const std::size_t n = graph.vertex_count();
  std::vector<std::uint8_t> blocked(n, 0);
  for (Vertex v : checked) blocked.at(v) = 1;
  for (Vertex v : exclude) blocked.at(v) = 1;
  const unsigned need = r - 1;

  std::vector<Vertex> out;
  if (need == 0) {
    for (Vertex v = 0; v < n; ++v)
      if (!blocked[v]) out.push_back(v);
    return out;
  }
  std::vector<std::uint32_t> hits(n, 0);
  for (Vertex z : checked)
    for (Vertex v : graph.neighbors(z))
      if (!blocked[v] && ++hits[v] == need) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

GiantComponent giant_component(const Graph& graph, std::span<const Vertex> subset) {
  GiantComponent out;
  if (subset.empty()) return out;
  constexpr auto kAbsent = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> local(graph.vertex_count(), kAbsent);
  std::vector<Vertex> members(subset.begin(), subset.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (std::uint32_t i = 0; i < members.size(); ++i) local.at(members[i]) = i;

  DisjointSet dsu(static_cast<std::uint32_t>(members.size()));
  for (std::uint32_t i = 0; i < members.size(); ++i)
    for (Vertex w : graph.neighbors(members[i]))
      if (local[w] != kAbsent && local[w] > i) dsu.unite(i, local[w]);

  std::uint32_t best_root = dsu.find(0);
  for (std::uint32_t i = 1; i < members.size(); ++i)
    if (dsu.component_size(i) > dsu.component_size(best_root)) best_root = dsu.find(i);
  for (std::uint32_t i = 0; i < members.size(); ++i)
    if (dsu.find(i) == best_root) out.component.push_back(members[i]);
  out.size = out.component.size();
  return out;
}

namespace {

std::vector<std::uint32_t> neighbor_counts(const Graph& graph, std::span<const Vertex> sources) {
  std::vector<std::uint32_t> counts(graph.vertex_count(), 0);
  for (Vertex s : sources)
    for (Vertex v : graph.neighbors(s)) ++counts[v];
  return counts;
}

double completion_threshold(std::size_t n, unsigned r) {
  return static_cast<double>(n) / (std::pow(2.0, r) * std::tgamma(r + 1.0) * std::sqrt(std::numbers::e));
}

}  // namespace

CompletionReport completion_check(const Graph& graph, std::span<const Vertex> giant, std::span<const Vertex> w,
                                  std::span<const Vertex> core, unsigned r, double p) {
  const std::size_t n = graph.vertex_count();
  const auto u_prime_target = static_cast<std::size_t>(std::floor(0.5 / p));
  if (giant.size() < u_prime_target) throw std::invalid_argument("giant component smaller than floor(1/(2p))");

  std::vector<Vertex> u_prime(giant.begin(), giant.end());
  std::sort(u_prime.begin(), u_prime.end());
  u_prime.resize(u_prime_target);

  CompletionReport out;
  out.u_prime_size = u_prime.size();
  out.stage1_threshold = completion_threshold(n, r);
  out.stage2_limit = 1.0 / p;

  std::vector<std::uint8_t> excluded(n, 0);
  for (Vertex v : w) excluded.at(v) = 1;
  for (Vertex v : core) excluded.at(v) = 1;
  for (Vertex v : u_prime) excluded[v] = 1;
  const auto into_u = neighbor_counts(graph, u_prime);
  std::vector<Vertex> b;
  for (Vertex v = 0; v < n; ++v)
    if (!excluded[v] && into_u[v] >= r) b.push_back(v);
  out.stage1_count = b.size();
  out.stage1_ok = static_cast<double>(b.size()) >= out.stage1_threshold;

  const auto b_prime_target = static_cast<std::size_t>(std::floor(out.stage1_threshold));
  std::vector<Vertex> b_prime(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(std::min(b.size(), b_prime_target)));
  out.b_prime_size = b_prime.size();

  std::fill(excluded.begin(), excluded.end(), 0);
  for (Vertex v : b) excluded[v] = 1;
  for (Vertex v : giant) excluded[v] = 1;
  for (Vertex v : core) excluded[v] = 1;
  const auto into_b = neighbor_counts(graph, b_prime);
  for (Vertex v = 0; v < n; ++v)
    if (!excluded[v] && into_b[v] < r) ++out.stage2_uninfected;
  out.stage2_ok = static_cast<double>(out.stage2_uninfected) <= out.stage2_limit;
  return out;
}

Lemma3Report lemma3_check(const Regime& regime, double omega0, std::size_t trials, std::uint64_t seed,
                          unsigned workers) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  Lemma3Report out;
  out.a = regime.seed_size(omega0);
  out.omega0 = regime.effective_omega0(out.a);
  out.trials = trials;
  const double t0 = regime.crit.t0, ac = regime.crit.ac;
  out.hypotheses_ok = out.omega0 > 0.0 && out.omega0 <= t0 - ac;
  const double target = t0 + ac / 2.0 + out.omega0 / 2.0;

  const auto hits = run_trials(trials, workers, [&](std::size_t i) {
    const TrialOutcome o = run_trial(regime, out.a, derive_seed(seed, {i}));
    return static_cast<int>(o.t0_reached && static_cast<double>(*o.infected_at_t0) >= target);
  });
  std::size_t success = 0;
  for (int h : hits) success += static_cast<std::size_t>(h);
  out.success_fraction = static_cast<double>(success) / static_cast<double>(trials);
  out.failure_fraction = 1.0 - out.success_fraction;
  out.bound = bound_early_phase(std::max(out.omega0, 0.0), t0);
  out.pass_line = out.bound + 5.0 * binomial_stderr(out.bound, trials);
  out.pass = out.failure_fraction <= out.pass_line;
  return out;
}

namespace {

std::optional<GiantRun> evaluate_giant_run(const Regime& regime, std::size_t a, std::uint64_t seed, double rho) {
  const TrialInstance inst = simulate_instance(regime, a, seed);
  const std::size_t steps = floor_t0(regime.crit.t0);
  if (inst.trace.stopping_time <= steps) return std::nullopt;

  GiantRun run;
  run.seed = seed;
  run.stopping_time = inst.trace.stopping_time;
  const std::vector<Vertex> checked = inst.trace.checked_set_at(steps);

  // Reserved set: the ceil(a/2) = ceil(a_c/2 + omega0/2) lowest-index
  // vertices of A(t0) \ Z(t0).
  std::vector<std::uint8_t> is_checked(regime.n, 0);
  for (Vertex v : checked) is_checked[v] = 1;
  const auto reserve_target = static_cast<std::size_t>(std::ceil(static_cast<double>(a) / 2.0));
  std::vector<Vertex> reserved;
  for (Vertex v = 0; v < regime.n && reserved.size() < reserve_target; ++v)
    if (inst.trace.infection_step[v] <= steps && !is_checked[v]) reserved.push_back(v);
  run.reserved = reserved.size();

  const std::vector<Vertex> near = near_infected_set(inst.graph, checked, regime.r, reserved);
  run.near_size = near.size();
  const double near_threshold = 3.0 * regime.r / (4.0 * regime.p);
  run.near_ok = static_cast<double>(near.size()) >= near_threshold;

  const auto w_target = static_cast<std::size_t>(std::floor(near_threshold));
  const std::span<const Vertex> w(near.data(), std::min(near.size(), w_target));
  run.w_size = w.size();
  const GiantComponent giant = giant_component(inst.graph, w);
  run.giant_size = giant.size;
  run.giant_ok = static_cast<double>(giant.size) >= 0.9 * rho * static_cast<double>(w.size()) && !w.empty();

  if (giant.size >= static_cast<std::size_t>(std::floor(0.5 / regime.p))) {
    std::vector<Vertex> core = checked;
    core.insert(core.end(), reserved.begin(), reserved.end());
    run.completion = completion_check(inst.graph, giant.component, w, core, regime.r, regime.p);
  }
  return run;
}

}  // namespace

GiantCheckReport giant_check(const Regime& regime, std::size_t a, std::size_t runs, std::uint64_t seed,
                             unsigned workers) {
  if (runs == 0) throw std::invalid_argument("runs must be positive");
  GiantCheckReport report;
  report.a = a;
  report.near_threshold = 3.0 * regime.r / (4.0 * regime.p);
  report.near_reference = regime.r / regime.p;
  report.rho = rho_giant(3.0 * regime.r / 4.0);

  const std::size_t max_attempts = 20 * runs;
  std::size_t next = 0;
  while (report.details.size() < runs && next < max_attempts) {
    const std::size_t batch = std::min(runs - report.details.size() + runs / 8 + 1, max_attempts - next);
    const std::size_t first = next;
    auto results = run_trials(batch, workers, [&](std::size_t i) {
      return evaluate_giant_run(regime, a, derive_seed(seed, {first + i}), report.rho);
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
      ++report.attempts;
      if (!results[i]) continue;
      report.details.push_back(std::move(*results[i]));
      if (report.details.size() == runs) break;
    }
    next += batch;
  }

  CompensatedSum near_sum;
  for (const auto& run : report.details) {
    near_sum.add(static_cast<double>(run.near_size));
    report.near_ok += run.near_ok;
    report.giant_ok += run.giant_ok;
    if (run.completion) {
      report.stage1_ok += run.completion->stage1_ok;
      report.stage2_ok += run.completion->stage2_ok;
    }
  }
  report.runs = report.details.size();
  if (report.runs > 0) report.near_mean = near_sum.value() / static_cast<double>(report.runs);
  return report;
}

}  // namespace bootperc
