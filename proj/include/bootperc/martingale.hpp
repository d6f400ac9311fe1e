#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bootperc/percolation.hpp"

namespace bootperc {

/// pi(t) for one run: pi_hat(t) up to the stopping time T, frozen at
/// pi_hat(T) afterwards. Both sequences cover t = 0..horizon.
struct PiProcess {
  std::vector<double> pi_hat;
  std::vector<double> pi;
  std::size_t stopping_time = 0;

  /// `pi_hat_table` must cover t = 0..horizon.
  static PiProcess from_table(std::span<const double> pi_hat_table, std::size_t stopping_time);

  std::size_t horizon() const noexcept { return pi.empty() ? 0 : pi.size() - 1; }
};

/// Tracing horizon used when none is given: min(floor(t0) + 1, n).
std::size_t default_martingale_horizon(double t0, std::size_t n);

/// The step martingale M(t, n-a), t = 0..horizon, recovered from a trace
/// by inverting |A(t)| = a + M (1 - pi(t)) + (n - a) pi(t).
struct MartingaleTrace {
  std::vector<double> step_values;
  /// Smallest t with a + M(t)(1 - pi_hat(t)) + (n - a) pi_hat(t) = t, if it
  /// falls inside the horizon.
  std::optional<std::size_t> t_prime;
  /// Largest |M(tau, iota) - M((tau, iota) - 1)| over the realised rounds.
  double max_abs_step_diff = 0.0;
  /// Every realised round difference is within 1 / (1 - pi_hat(tau - 1)).
  bool differences_within_bound = true;
};

/// a + M (1 - pi) + (n - a) pi.
inline double infected_from_martingale(double m, double pi, std::size_t a, std::size_t n) {
  return static_cast<double>(a) + m * (1.0 - pi) + static_cast<double>(n - a) * pi;
}

/// Throws std::domain_error if pi(t) = 1 anywhere within the horizon, and
/// std::invalid_argument if a or n disagree with the trace.
MartingaleTrace martingale_from_trace(const ExplorationTrace& trace, const PiProcess& pi, std::size_t a,
                                      std::size_t n);

enum class RoundKind {
  Flip,     // X went 0 -> 1 in this round
  Drift,    // X stayed 0; only pi moved
  Settled,  // X was already 1; contributes exactly 0
};

/// One class of rounds (tau, iota) inside step tau that share a difference value.
struct RoundDifference {
  std::size_t step = 0;
  RoundKind kind = RoundKind::Drift;
  double value = 0.0;
  std::size_t multiplicity = 0;
  double bound = 0.0;  // 1 / (1 - pi_hat(step - 1))
};

/// Per-round increments of M grouped by kind within each step 1..horizon.
/// Summing value * multiplicity over all entries telescopes to
/// M(horizon, n-a) - M(0, n-a).
std::vector<RoundDifference> round_differences(const ExplorationTrace& trace, const PiProcess& pi, std::size_t n);

/// CSV with header "t,pi_t,M_t,infected_size".
void write_martingale_csv(std::ostream& out, const ExplorationTrace& trace, const PiProcess& pi,
                          const MartingaleTrace& martingale);

struct MartingaleCheckSpec {
  std::size_t n = 0;
  double p = 0.0;
  unsigned r = 2;
  std::size_t a = 0;
  std::size_t t_probe = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Sample statistics of M(t_probe ∧ T, n-a) over independent graphs with
/// A(0) = {0, ..., a-1} fixed.
struct MartingaleCheckReport {
  std::size_t trials = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double z = 0.0;
  double var = 0.0;
  /// n pi_hat(t_probe) / (1 - pi_hat(t_probe))^3.
  double ceiling = 0.0;
  /// var exceeds the ceiling by more than three normal-theory standard
  /// errors of a sample variance.
  bool variance_flagged = false;
  /// Runs with a realised round difference above 1 / (1 - pi_hat(tau - 1)).
  std::size_t difference_violations = 0;
  double max_difference_ratio = 0.0;  // max |diff| (1 - pi_hat(tau - 1))
  /// Runs whose T' (within the horizon) disagrees with T.
  std::size_t stopping_time_mismatches = 0;
  std::vector<double> samples;
};

/// Martingale property: E[M] = M(0) = 0, so |z| should be small.
MartingaleCheckReport empirical_martingale_check(const MartingaleCheckSpec& spec);

/// Same sampling; the fields of interest are var, ceiling and the flag.
MartingaleCheckReport empirical_variance_check(const MartingaleCheckSpec& spec);

}  // namespace bootperc
