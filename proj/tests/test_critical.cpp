#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "bootperc/critical.hpp"

using namespace bootperc;
using boost::multiprecision::cpp_bin_float_50;

namespace {

// Exact sum of P[Bin(t, p) = k] for k >= r in 50-digit arithmetic.
double exact_tail(unsigned t, double p, unsigned r) {
  const cpp_bin_float_50 pp(p), qq = 1 - cpp_bin_float_50(p);
  cpp_bin_float_50 sum = 0, binom = 1;
  for (unsigned k = 0; k <= t; ++k) {
    if (k > 0) binom = binom * (t - k + 1) / k;
    if (k >= r) sum += binom * pow(pp, k) * pow(qq, t - k);
  }
  return sum.convert_to<double>();
}

// f(t) on 0..floor(t0) in 50-digit arithmetic; returns (smallest argmin, -min).
std::pair<std::size_t, double> exact_critical(std::size_t n, double p, unsigned r, std::size_t top) {
  std::size_t arg = 0;
  cpp_bin_float_50 best = 0;
  for (std::size_t t = 0; t <= top; ++t) {
    const cpp_bin_float_50 ph = exact_tail(static_cast<unsigned>(t), p, r);
    const cpp_bin_float_50 f = (cpp_bin_float_50(n) * ph - t) / (1 - ph);
    if (t == 0 || f < best) {
      best = f;
      arg = t;
    }
  }
  return {arg, -best.convert_to<double>()};
}

}  // namespace

TEST_CASE("binomial tail examples") {
  CHECK(binom_tail_geq(1, 0.3, 2) == 0.0);
  CHECK(binom_tail_geq(2, 0.5, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(binom_tail_geq(10, 0.1, 2) == doctest::Approx(0.2639010709).epsilon(1e-9));
  CHECK(binom_tail_geq(0, 0.5, 2) == 0.0);
}

TEST_CASE("binomial tail matches extended-precision summation for t <= 30, r <= 5") {
  for (double p : {0.01, 0.1, 0.3, 0.5})
    for (unsigned r = 2; r <= 5; ++r)
      for (unsigned t = 0; t <= 30; ++t) {
        CAPTURE(p);
        CAPTURE(r);
        CAPTURE(t);
        CHECK(std::abs(binom_tail_geq(t, p, r) - exact_tail(t, p, r)) <= 1e-12);
      }
}

TEST_CASE("binomial tail matches the regularized incomplete beta for large t") {
  for (std::uint64_t t : {100u, 1000u, 10000u, 100000u})
    for (double p : {1e-4, 1e-3, 1e-2})
      for (unsigned r : {2u, 3u, 5u, 12u}) {
        const double ref = t < r ? 0.0 : boost::math::ibeta(double(r), double(t - r + 1), p);
        CAPTURE(t);
        CAPTURE(p);
        CAPTURE(r);
        CHECK(std::abs(binom_tail_geq(t, p, r) - ref) <= 1e-12);
        if (ref > 1e-250) CHECK(binom_tail_geq(t, p, r) == doctest::Approx(ref).epsilon(1e-10));
      }
}

TEST_CASE("binomial tail is monotone in t and p") {
  for (unsigned r : {2u, 3u})
    for (double p : {1e-3, 0.05, 0.4}) {
      double prev = 0.0;
      for (std::uint64_t t = 0; t < 400; ++t) {
        const double v = binom_tail_geq(t, p, r);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        CHECK(binom_tail_geq(t, p * 1.1, r) >= v);
        prev = v;
      }
    }
}

TEST_CASE("t0") {
  CHECK(compute_t0(200, 0.1, 2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(compute_t0(1e6, 1e-4, 2) == doctest::Approx(200.0).epsilon(1e-13));
  CHECK(compute_t0(1e6, 1e-3, 3) == doctest::Approx(std::sqrt(6000.0)).epsilon(1e-12));
  CHECK(floor_t0(7.999999999999988) == 8);
  CHECK(floor_t0(7.9999) == 7);
  CHECK_THROWS_AS(compute_t0(100, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(compute_t0(100, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(compute_t0(100, 0.1, 1), std::invalid_argument);
}

TEST_CASE("critical quantities, small regime") {
  const auto q = compute_critical(10000, 0.005, 2);
  CHECK(q.t0 == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(q.tc == 5);
  CHECK(q.ac == doctest::Approx(2.5255314676835400).epsilon(1e-12));
  const double f_ref[] = {0.0, -1.0, -1.75004375109378, -2.25266838696193, -2.51035529764627,
                          -2.52553146768354, -2.30057077493667, -1.83779525145840, -1.13947630767066};
  REQUIRE(q.f_table.size() == 9);
  for (std::size_t t = 0; t < 9; ++t) CHECK(q.f_table[t] == doctest::Approx(f_ref[t]).epsilon(1e-12));

  const auto [tc, ac] = exact_critical(10000, 0.005, 2, 8);
  CHECK(q.tc == tc);
  CHECK(q.ac == doctest::Approx(ac).epsilon(1e-12));
}

TEST_CASE("critical quantities, n = 1e6, p = 1e-4, r = 2") {
  const auto q = compute_critical(1000000, 1e-4, 2);
  CHECK(q.tc == 102);
  CHECK(q.ac == doctest::Approx(50.8347295573573).epsilon(1e-10));
  CHECK(q.ac / 50.0 == doctest::Approx(1.0).epsilon(0.1));
  CHECK(q.ac_asymptotic == doctest::Approx(50.0).epsilon(1e-12));
  const auto [tc, ac] = exact_critical(1000000, 1e-4, 2, 200);
  CHECK(q.tc == tc);
  CHECK(q.ac == doctest::Approx(ac).epsilon(1e-11));
}

TEST_CASE("a_c is the value of -f at the smallest minimiser") {
  struct Case {
    std::size_t n;
    double p;
    unsigned r;
  };
  for (const Case c : {Case{200000, std::pow(2e5, -0.7), 2}, Case{1000000, 1e-3, 3}, Case{50000, 0.002, 2},
                       Case{100000000, std::pow(1e8, -0.7), 2}}) {
    const auto q = compute_critical(c.n, c.p, c.r);
    const double ph = q.pi_hat_table[q.tc];
    CHECK(q.ac == doctest::Approx((q.tc - double(c.n) * ph) / (1.0 - ph)).epsilon(1e-15));
    for (std::size_t t = 0; t < q.f_table.size(); ++t) {
      if (t < q.tc) CHECK(q.f_table[t] > q.f_table[q.tc]);
      CHECK(q.f_table[t] >= q.f_table[q.tc]);
    }
    CHECK(q.ac > 0.0);
    CHECK(double(q.tc) <= q.t0);
  }
}

TEST_CASE("critical quantities approach their asymptotic forms") {
  const double n = 1e8;
  const auto q = compute_critical(100000000, std::pow(n, -0.7), 2);
  CHECK(q.ac / q.ac_asymptotic == doctest::Approx(1.0).epsilon(0.05));
  CHECK(double(q.tc) / q.tc_asymptotic == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("degenerate regimes") {
  CHECK_THROWS_AS(compute_critical(10, 0.9, 2), DegenerateRegime);
  CHECK_THROWS_AS(compute_critical(100, 1e-9, 2), DegenerateRegime);
  CHECK_THROWS_AS(compute_critical(100, 0.0, 2), std::invalid_argument);
  CHECK_FALSE(regime_warnings(10, 0.9, 2).empty());
  CHECK(regime_warnings(200000, std::pow(2e5, -0.7), 2).empty());
  CHECK(regime_warnings(1000, 0.005, 2).size() == 1);
}

TEST_CASE("real relaxation sits at or below the integer minimum") {
  const auto q = compute_critical(200000, std::pow(2e5, -0.7), 2);
  const auto rel = real_relaxation(200000, std::pow(2e5, -0.7), 2, q);
  CHECK(rel.gap >= -1e-9);
  CHECK(rel.gap < 1.0);
  CHECK(std::abs(rel.t_star - double(q.tc)) < 2.0);
}

TEST_CASE("giant component density") {
  for (double c : {1.01, 1.1, 1.5, 2.0, 5.0, 50.0}) {
    const double rho = rho_giant(c);
    CHECK(std::abs(1.0 - rho - std::exp(-c * rho)) < 1e-12);
    CHECK(rho > 0.0);
  }
  CHECK(rho_giant(1.1) == doctest::Approx(0.176134143631810).epsilon(1e-12));
  CHECK(rho_giant(1.5) == doctest::Approx(0.582811643865811).epsilon(1e-12));
  CHECK(rho_giant(2.0) == doctest::Approx(0.796812130020020).epsilon(1e-12));
  CHECK(rho_giant(5.0) == doctest::Approx(0.993022846348855).epsilon(1e-12));
  CHECK(rho_giant(50.0) > 0.999);
  for (unsigned r = 2; r <= 12; ++r) CHECK(rho_giant(0.75 * r) > 0.5);
  CHECK_THROWS_AS(rho_giant(1.0), std::invalid_argument);
  CHECK_THROWS_AS(rho_giant(0.5), std::invalid_argument);
}

TEST_CASE("theorem and lemma bounds") {
  CHECK(bound_theorem1(0.0, 100.0) == 1.0);
  CHECK(bound_theorem1(std::sqrt(10.0 * 100.0 * std::log(100.0)), 100.0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(bound_theorem2(57.0, 266.0, 66.0) == doctest::Approx(0.294808710654607).epsilon(1e-12));
  CHECK(bound_early_phase(std::sqrt(9.5 * 50.0), 50.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  CHECK(bound_lemma2(50.0, 100, 1e6, 1e-4, 2) == doctest::Approx(5.7083357613259e-9).epsilon(1e-9));
  CHECK(bound_lemma2(1e9, 100, 1e6, 1e-4, 2) == 0.0);
  CHECK(bound_lemma2(6.0, 1, 1e6, 1e-4, 2) == doctest::Approx(std::exp(-9.0)).epsilon(1e-14));

  const auto low = chernoff_bounds(100.0, 20.0);
  CHECK(low.lower_tail == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(chernoff_bounds(100.0, 30.0).upper_tail == doctest::Approx(0.016724022988470).epsilon(1e-12));
  const auto none = chernoff_bounds(100.0, 0.0);
  CHECK(none.lower_tail == 1.0);
  CHECK(none.upper_tail == 1.0);
  double prev = 1.0;
  for (double lambda = 1.0; lambda < 200.0; lambda += 7.0) {
    const auto b = chernoff_bounds(100.0, lambda);
    CHECK(b.upper_tail <= prev);
    CHECK(b.lower_tail <= b.upper_tail);
    prev = b.upper_tail;
  }
}
