#include "bootperc/critical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

namespace bootperc {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
}

// log C(t, k) + k log p + (t - k) log(1 - p), with the binomial coefficient
// as a k-term sum so the error does not scale with lgamma(t).
double log_pmf(std::uint64_t t, std::uint64_t k, double log_p, double log_q) {
  double log_choose = -std::lgamma(static_cast<double>(k) + 1.0);
  if (k <= 64) {
    for (std::uint64_t j = 0; j < k; ++j) log_choose += std::log(static_cast<double>(t - j));
  } else {
    log_choose = std::lgamma(static_cast<double>(t) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                 std::lgamma(static_cast<double>(t - k) + 1.0);
  }
  return log_choose + static_cast<double>(k) * log_p + static_cast<double>(t - k) * log_q;
}

}  // namespace

double binom_tail_geq(std::uint64_t t, double p, std::uint64_t r) {
  check_probability(p);
  if (r == 0) return 1.0;
  if (r > t) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_odds = log_p - log_q;
  const double mean = static_cast<double>(t) * p;

  if (static_cast<double>(r) <= mean) {
    // Lower tail is the light side: 1 - sum_{k < r} pmf(k).
    double log_term = static_cast<double>(t) * log_q;
    double lower = 0.0;
    for (std::uint64_t k = 0; k < r; ++k) {
      lower += std::exp(log_term);
      log_term += std::log(static_cast<double>(t - k)) - std::log(static_cast<double>(k + 1)) + log_odds;
    }
    return clamp01(1.0 - lower);
  }

  // Upper tail: terms decrease geometrically once k exceeds the mean.
  double term = std::exp(log_pmf(t, r, log_p, log_q));
  const double odds = p / (1.0 - p);
  double upper = 0.0;
  for (std::uint64_t k = r; k <= t; ++k) {
    upper += term;
    if (term <= upper * 1e-18) break;
    term *= static_cast<double>(t - k) / static_cast<double>(k + 1) * odds;
  }
  return clamp01(upper);
}

std::vector<double> pi_hat_table(std::size_t horizon, double p, unsigned r) {
  std::vector<double> table(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t) table[t] = binom_tail_geq(t, p, r);
  return table;
}

double compute_t0(double n, double p, unsigned r) {
  if (!(n >= 1.0)) throw std::invalid_argument("n must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  if (r < 2) throw std::invalid_argument("r must be at least 2");
  const double log_base = std::lgamma(r + 1.0) - std::log(n) - r * std::log(p);
  return std::exp(log_base / (r - 1.0));
}

std::size_t floor_t0(double t0) {
  // t0 comes out of exp/log and can land a few ulps under an exact integer.
  return static_cast<std::size_t>(std::floor(t0 * (1.0 + 1e-12)));
}

std::vector<std::string> regime_warnings(double n, double p, unsigned r) {
  std::vector<std::string> out;
  if (n * p < 10.0) {
    std::ostringstream msg;
    msg << "np = " << n * p << " < 10: p is not comfortably above 1/n";
    out.push_back(msg.str());
  }
  const double scaled = p * std::pow(n, 1.0 / r);
  if (scaled > 0.5) {
    std::ostringstream msg;
    msg << "p n^(1/r) = " << scaled << " > 0.5: p is not comfortably below n^(-1/r)";
    out.push_back(msg.str());
  }
  return out;
}

CriticalQuantities compute_critical(std::size_t n, double p, unsigned r) {
  CriticalQuantities q;
  q.t0 = compute_t0(static_cast<double>(n), p, r);
  const double log_t1 = (std::lgamma(static_cast<double>(r)) - std::log(static_cast<double>(n)) - r * std::log(p)) / (r - 1.0);
  q.tc_asymptotic = std::exp(log_t1);
  q.ac_asymptotic = (1.0 - 1.0 / r) * q.tc_asymptotic;

  if (!(q.t0 <= static_cast<double>(n) + 1.0))
    throw DegenerateRegime("t0 exceeds n: the minimisation range runs past the process length");
  const std::size_t top = floor_t0(q.t0);
  if (top < r) throw DegenerateRegime("floor(t0) < r: no vertex can be infected within t0 steps");
  if (top > n) throw DegenerateRegime("t0 exceeds n: the minimisation range runs past the process length");

  q.pi_hat_table = pi_hat_table(top, p, r);
  q.f_table.resize(top + 1);
  const auto nd = static_cast<double>(n);
  double best = 0.0;
  for (std::size_t t = 0; t <= top; ++t) {
    const double ph = q.pi_hat_table[t];
    q.f_table[t] = (nd * ph - static_cast<double>(t)) / (1.0 - ph);
    if (t == 0 || q.f_table[t] < best) {
      best = q.f_table[t];
      q.tc = t;
    }
  }
  q.ac = -best;
  return q;
}

RealRelaxation real_relaxation(std::size_t n, double p, unsigned r, const CriticalQuantities& crit) {
  const auto nd = static_cast<double>(n);
  auto f = [&](double t) {
    // Continuous extension P[Bin(t, p) >= r] = I_p(r, t - r + 1), t > r - 1.
    const double ph = t > r - 1.0 ? boost::math::ibeta(static_cast<double>(r), t - r + 1.0, p) : 0.0;
    return (nd * ph - t) / (1.0 - ph);
  };
  double lo = std::max(static_cast<double>(crit.tc) - 1.0, static_cast<double>(r) - 0.5);
  double hi = std::min(static_cast<double>(crit.tc) + 1.0, crit.t0);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
    if (fa < fb) {
      hi = b; b = a; fb = fa;
      a = hi - inv_phi * (hi - lo); fa = f(a);
    } else {
      lo = a; a = b; fa = fb;
      b = lo + inv_phi * (hi - lo); fb = f(b);
    }
  }
  RealRelaxation out;
  out.t_star = 0.5 * (lo + hi);
  out.ac_real = -std::min(f(out.t_star), -crit.ac);
  out.gap = out.ac_real - crit.ac;
  return out;
}

double rho_giant(double c) {
  if (!(c > 1.0)) throw std::invalid_argument("rho_giant needs c > 1");
  // g(rho) = 1 - rho - e^{-c rho}; g(1 - 1/c) >= 0 since e^{c-1} >= c, g(1) < 0.
  auto g = [c](double rho) { return -std::expm1(-c * rho) - rho; };
  double lo = 1.0 - 1.0 / c, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  double rho = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double slope = c * std::exp(-c * rho) - 1.0;
    if (slope == 0.0) break;
    const double next = rho - g(rho) / slope;
    if (!(next > 0.0 && next < 1.0)) break;
    rho = next;
  }
  return rho;
}

double bound_theorem1(double omega0, double t0) {
  return clamp01(std::exp(-omega0 * omega0 / (10.0 * t0)));
}

double bound_theorem2(double omega0, double t0, double ac) {
  return clamp01(std::exp(-omega0 * omega0 / (10.0 * t0)) + std::exp(-(ac + omega0) / 4.0));
}

double bound_early_phase(double omega0, double t0) {
  return clamp01(std::exp(-omega0 * omega0 / (9.5 * t0)));
}

double bound_lemma2(double lambda, std::uint64_t t, double n, double p, unsigned r) {
  const double ph = binom_tail_geq(t, p, r);
  const double q = 1.0 - ph;
  return clamp01(std::exp(-lambda * lambda * q * q * q / (2.0 * (n * ph + lambda / 3.0))));
}

ChernoffBounds chernoff_bounds(double mean, double lambda) {
  return {clamp01(std::exp(-lambda * lambda / (2.0 * mean))),
          clamp01(std::exp(-lambda * lambda / (2.0 * (mean + lambda / 3.0))))};
}

}  // namespace bootperc
