#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bootperc {

/// The requested (n, p, r) leaves no room for the minimisation defining
/// a_c: either floor(t0) < r, or floor(t0) > n.
class DegenerateRegime : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// P[Bin(t, p) >= r], absolute error below 1e-12.
///
/// Sums whichever tail is lighter in log space: the r lower terms (then
/// complements) when r <= t p, otherwise the upper terms directly until they
/// stop contributing.
double binom_tail_geq(std::uint64_t t, double p, std::uint64_t r);

/// pi_hat(t) = P[Bin(t, p) >= r] for t = 0..horizon.
std::vector<double> pi_hat_table(std::size_t horizon, double p, unsigned r);

/// t0 = (r! / (n p^r))^(1/(r-1)), evaluated in log space.
double compute_t0(double n, double p, unsigned r);

/// floor(t0), tolerant of last-bit rounding when t0 is an exact integer.
std::size_t floor_t0(double t0);

/// Human-readable notes when (n, p, r) sits outside the comfortable range of
/// the asymptotic theory: np < 10 or p n^(1/r) > 0.5. Never fatal.
std::vector<std::string> regime_warnings(double n, double p, unsigned r);

struct CriticalQuantities {
  double t0 = 0.0;
  std::size_t tc = 0;
  double ac = 0.0;
  double tc_asymptotic = 0.0;
  double ac_asymptotic = 0.0;
  std::vector<double> pi_hat_table;  // t = 0..floor(t0)
  std::vector<double> f_table;       // (n pi_hat(t) - t) / (1 - pi_hat(t)), t = 0..floor(t0)
};

/// Minimises f(t) = (n pi_hat(t) - t)/(1 - pi_hat(t)) over integer
/// t in {0, ..., floor(t0)}; a_c = -min f and t_c is the smallest minimiser.
/// Throws DegenerateRegime when floor(t0) < r or floor(t0) > n, and
/// std::invalid_argument for n < 1, p outside (0, 1) or r < 2.
CriticalQuantities compute_critical(std::size_t n, double p, unsigned r);

/// Continuous-t counterpart of a_c, using the regularised incomplete beta
/// extension of pi_hat. Diagnostic only.
struct RealRelaxation {
  double t_star = 0.0;
  double ac_real = 0.0;
  double gap = 0.0;  // ac_real - ac
};
RealRelaxation real_relaxation(std::size_t n, double p, unsigned r, const CriticalQuantities& crit);

/// Unique rho in (0, 1) with 1 - rho = exp(-c rho); requires c > 1.
double rho_giant(double c);

/// exp(-omega0^2 / (10 t0)), clamped to [0, 1].
double bound_theorem1(double omega0, double t0);
/// exp(-omega0^2 / (10 t0)) + exp(-(ac + omega0) / 4), clamped to [0, 1].
double bound_theorem2(double omega0, double t0, double ac);
/// exp(-omega0^2 / (9.5 t0)), the early-phase failure bound.
double bound_early_phase(double omega0, double t0);
/// One-sided martingale deviation bound at step t:
/// exp(-lambda^2 (1 - pi_hat)^3 / (2 (n pi_hat + lambda/3))).
double bound_lemma2(double lambda, std::uint64_t t, double n, double p, unsigned r);

struct ChernoffBounds {
  double lower_tail = 1.0;
  double upper_tail = 1.0;
};
/// Binomial deviation bounds: exp(-l^2 / (2 mean)) and exp(-l^2 / (2 (mean + l/3))).
ChernoffBounds chernoff_bounds(double mean, double lambda);

}  // namespace bootperc
