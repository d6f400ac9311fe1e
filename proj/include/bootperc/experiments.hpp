#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bootperc/critical.hpp"
#include "bootperc/graph.hpp"
#include "bootperc/percolation.hpp"
#include "bootperc/rng.hpp"

namespace bootperc {

/// (n, p, r) together with its critical quantities.
struct Regime {
  std::size_t n = 0;
  double p = 0.0;
  unsigned r = 2;
  CriticalQuantities crit;

  /// Throws DegenerateRegime / std::invalid_argument like compute_critical.
  static Regime make(std::size_t n, double p, unsigned r);

  /// a = round(a_c + omega0), clamped to [0, n].
  std::size_t seed_size(double omega0) const;
  /// a - a_c for an integer seed size.
  double effective_omega0(std::size_t a) const { return static_cast<double>(a) - crit.ac; }
};

enum class Classification { Subcritical, Supercritical, Ambiguous };

const char* to_string(Classification c);

/// Subcritical iff final_size < t_c, supercritical iff final_size > n/2.
Classification classify(std::size_t final_size, std::size_t tc, std::size_t n);

struct TrialOutcome {
  std::uint64_t seed = 0;
  std::size_t final_size = 0;
  std::size_t stopping_time = 0;
  Classification classification = Classification::Ambiguous;
  bool t0_reached = false;                    // T > t0
  std::optional<std::size_t> infected_at_t0;  // |A(floor(t0))| when T > t0
};

/// Uniform a-subset of {0, ..., n-1}, sorted (Floyd's algorithm).
std::vector<Vertex> random_subset(std::size_t n, std::size_t a, Rng& rng);

/// A sampled graph, a uniformly random A(0) of size a, and the exploration.
struct TrialInstance {
  Graph graph;
  std::vector<Vertex> seeds;
  ExplorationTrace trace;
};

TrialInstance simulate_instance(const Regime& regime, std::size_t a, std::uint64_t seed);

TrialOutcome run_trial(const Regime& regime, std::size_t a, std::uint64_t seed);
TrialOutcome run_trial(std::size_t n, double p, unsigned r, std::size_t a, std::uint64_t seed);

struct SweepCell {
  double omega0 = 0.0;            // as requested
  double omega0_effective = 0.0;  // a - a_c
  std::size_t a = 0;
  std::size_t trials = 0;
  double frac_sub = 0.0;
  double frac_super = 0.0;
  double frac_ambig = 0.0;
  double mean_final = 0.0;
  /// Tail bound on the failure probability; absent for bound-exempt cells.
  std::optional<double> bound;
  bool bound_exempt = true;
  double failure_fraction = 0.0;  // 1 - frac_sub below a_c, 1 - frac_super above
  double pass_line = 1.0;         // bound + 5 binomial standard errors
  bool bound_ok = true;
  std::vector<TrialOutcome> outcomes;
};

struct SweepReport {
  std::size_t n = 0;
  double p = 0.0;
  unsigned r = 2;
  double t0 = 0.0;
  std::size_t tc = 0;
  double ac = 0.0;
  std::uint64_t seed = 0;
  std::vector<SweepCell> cells;

  /// Fraction of all trials in the band [t_c, n/2].
  double ambiguous_fraction() const;
};

/// Runs trials_per_cell trials at a = round(a_c + omega0) for each omega0.
/// Trial i of cell c uses seed derive_seed(seed, {c, i}); results do not
/// depend on `workers`. Throws std::invalid_argument on an empty grid.
SweepReport sweep_omega0(const Regime& regime, std::span<const double> omega0_grid, std::size_t trials_per_cell,
                         std::uint64_t seed, unsigned workers = 1);

/// v outside Z ∪ exclude with at least r-1 neighbours in Z, sorted.
std::vector<Vertex> near_infected_set(const Graph& graph, std::span<const Vertex> checked, unsigned r,
                                      std::span<const Vertex> exclude);

struct GiantComponent {
  std::vector<Vertex> component;  // sorted
  std::size_t size = 0;
};

/// Largest connected component of the subgraph induced on W (ties go to the
/// component holding the smallest vertex). Empty W gives an empty result.
GiantComponent giant_component(const Graph& graph, std::span<const Vertex> subset);

struct CompletionReport {
  std::size_t u_prime_size = 0;
  std::size_t stage1_count = 0;       // |B|
  double stage1_threshold = 0.0;      // n / (2^r r! sqrt(e))
  bool stage1_ok = false;
  std::size_t b_prime_size = 0;
  std::size_t stage2_uninfected = 0;  // vertices with < r neighbours in B'
  double stage2_limit = 0.0;          // 1 / p
  bool stage2_ok = false;
};

/// The two final spreading stages of the supercritical argument.
///
/// U' is the floor(1/(2p)) smallest vertices of `giant`. Stage 1 counts B,
/// the vertices outside W ∪ core with >= r neighbours in U'. Stage 2 takes
/// B', the floor(n / (2^r r! sqrt(e))) smallest vertices of B (all of B if
/// fewer), and counts vertices outside B ∪ U ∪ core with < r neighbours in B'.
/// Throws std::invalid_argument if the giant is smaller than floor(1/(2p)).
CompletionReport completion_check(const Graph& graph, std::span<const Vertex> giant, std::span<const Vertex> w,
                                  std::span<const Vertex> core, unsigned r, double p);

struct Lemma3Report {
  std::size_t a = 0;
  double omega0 = 0.0;  // effective
  std::size_t trials = 0;
  double success_fraction = 0.0;  // T > t0 and |A(t0)| >= t0 + a_c/2 + omega0/2
  double failure_fraction = 0.0;
  double bound = 1.0;  // exp(-omega0^2 / (9.5 t0))
  double pass_line = 1.0;
  bool hypotheses_ok = false;  // 0 < omega0 <= t0 - a_c
  bool pass = false;
};

Lemma3Report lemma3_check(const Regime& regime, double omega0, std::size_t trials, std::uint64_t seed,
                          unsigned workers = 1);

/// One supercritical run pushed through the near-infected / giant /
/// completion pipeline at step floor(t0).
struct GiantRun {
  std::uint64_t seed = 0;
  std::size_t stopping_time = 0;
  std::size_t reserved = 0;    // |A|, lowest-index unchecked infected vertices
  std::size_t near_size = 0;   // near_infected_set(Z(t0), r, A)
  std::size_t w_size = 0;
  std::size_t giant_size = 0;
  bool near_ok = false;        // near_size >= 3r / (4p)
  bool giant_ok = false;       // giant_size >= 0.9 rho(3r/4) |W|
  std::optional<CompletionReport> completion;
};

struct GiantCheckReport {
  std::size_t a = 0;
  std::size_t runs = 0;
  std::size_t attempts = 0;
  double near_threshold = 0.0;  // 3r / (4p)
  double near_reference = 0.0;  // r / p
  double near_mean = 0.0;
  double rho = 0.0;             // rho(3r/4)
  std::size_t near_ok = 0;
  std::size_t giant_ok = 0;
  std::size_t stage1_ok = 0;
  std::size_t stage2_ok = 0;
  std::vector<GiantRun> details;
};

/// Collects `runs` trials with T > floor(t0) (scanning trial indices in
/// order, at most 20 * runs attempts) and evaluates each one.
GiantCheckReport giant_check(const Regime& regime, std::size_t a, std::size_t runs, std::uint64_t seed,
                             unsigned workers = 1);

}  // namespace bootperc
