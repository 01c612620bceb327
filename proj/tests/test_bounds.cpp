#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tracker/bounds.hpp"

using namespace tracker;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("unweighted bound: pinned values and the vacuous flag") {
  // eps = 1/2, ES = 16: 2 exp(-16/16) = 2/e.
  BoundReport r = chernoff_bound(0.5, 16.0);
  CHECK(r.bound == doctest::Approx(0.7357588823428847).epsilon(1e-14));
  CHECK_FALSE(r.vacuous);
  CHECK(r.lambda_sq_sum == 0.0);

  // A small mean sum gives a bound above 1, which carries no information.
  BoundReport v = chernoff_bound(0.1, 2.0);
  CHECK(v.bound > 1.0);
  CHECK(v.vacuous);
}

TEST_CASE("unweighted bound: domain is (0, 1/2] by eps and positive mean sums") {
  CHECK_THROWS_AS((void)chernoff_bound(0.6, 10.0), std::domain_error);
  CHECK_THROWS_AS((void)chernoff_bound(0.0, 10.0), std::domain_error);
  CHECK_THROWS_AS((void)chernoff_bound(-0.1, 10.0), std::domain_error);
  CHECK_THROWS_AS((void)chernoff_bound(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)chernoff_bound(0.5, -3.0), std::invalid_argument);
  // The endpoint eps = 1/2 itself is allowed.
  CHECK_NOTHROW((void)chernoff_bound(0.5, 1.0));
}

TEST_CASE("weighted bound: pinned value, vacuous regime and validation") {
  // eps = 1, EV = 3, sum of squared weights 3: 2 exp(-9/3) = 2 e^-3.
  BoundReport r = azuma_bound(1.0, 3.0, 3.0);
  CHECK(r.bound == doctest::Approx(0.09957413673572789).epsilon(1e-14));
  CHECK_FALSE(r.vacuous);

  BoundReport v = azuma_bound(0.5, 1.5, 3.0);
  CHECK(v.bound == doctest::Approx(2.0 * std::exp(-0.1875)).epsilon(1e-14));
  CHECK(v.vacuous);

  CHECK_THROWS_AS((void)azuma_bound(0.0, 3.0, 3.0), std::domain_error);
  CHECK_THROWS_AS((void)azuma_bound(1.0, 0.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS((void)azuma_bound(1.0, 3.0, 0.0), std::invalid_argument);
}

TEST_CASE("bounds shrink strictly as eps or the mean sum grow") {
  double prev = 2.0;
  for (double eps : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    double cur = chernoff_bound(eps, 40.0).bound;
    CHECK(cur < prev);
    prev = cur;
  }
  prev = 2.0;
  for (double es : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    double cur = chernoff_bound(0.5, es).bound;
    CHECK(cur < prev);
    prev = cur;
  }
  prev = 2.0;
  for (double ev : {1.0, 2.0, 4.0, 8.0}) {
    double cur = azuma_bound(0.8, ev, 10.0).bound;
    CHECK(cur < prev);
    prev = cur;
  }
  // More dispersion (larger sum of squared weights) weakens the bound.
  CHECK(azuma_bound(0.8, 4.0, 20.0).bound > azuma_bound(0.8, 4.0, 10.0).bound);
}

TEST_CASE("success lower bound saturates at large horizons") {
  std::array<double, 3> c{1.0, 1.0, 1.0};
  SuccessLowerBound s =
      known_transitions_success(1e6, 0.2, 0.6, 0.05, c, TailExponent::gap_minus_2b);
  // Every failure term is below the rounding floor of 1.0 at this horizon.
  CHECK(s.raw == 1.0);
  CHECK(s.clamped == 1.0);

  SuccessLowerBound sc =
      known_transitions_success(1e4, 0.2, 0.6, 0.05, c, TailExponent::scaled_gap_minus_2b);
  CHECK(sc.raw < 1.0);
  CHECK(sc.raw > 0.9999);
}

TEST_CASE("success lower bound clamps to zero at small horizons") {
  std::array<double, 3> c{1.0, 1.0, 1.0};
  SuccessLowerBound s =
      known_transitions_success(10.0, 0.2, 0.6, 0.05, c, TailExponent::gap_minus_2b);
  CHECK(s.raw < 0.0);
  CHECK(s.clamped == 0.0);
}

TEST_CASE("success lower bound is non-decreasing along a horizon ladder") {
  std::array<double, 3> c{1.0, 1.0, 1.0};
  double prev = -1.0;
  for (double t : {1e3, 1e4, 1e5, 1e6}) {
    SuccessLowerBound s =
        known_transitions_success(t, 0.2, 0.6, 0.05, c, TailExponent::gap_minus_2b);
    CHECK(s.clamped >= prev);
    prev = s.clamped;
  }
  CHECK(prev > 0.99);
}

TEST_CASE("success lower bound rejects bad inputs") {
  std::array<double, 3> ok{1.0, 1.0, 1.0};
  std::array<double, 3> bad{1.0, 0.0, 1.0};
  CHECK_THROWS_AS(
      (void)known_transitions_success(1.0, 0.2, 0.6, 0.05, ok, TailExponent::gap_minus_2b),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)known_transitions_success(1e4, 0.2, 0.6, 0.05, bad, TailExponent::gap_minus_2b),
      std::invalid_argument);
}

TEST_CASE("tail check validates its inputs") {
  std::vector<Summand> coins(10);
  CHECK_THROWS_AS((void)empirical_tail_vs_bound(coins, 0.5, 999, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)empirical_tail_vs_bound({}, 0.5, 2000, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)empirical_tail_vs_bound(coins, 0.0, 2000, 1), std::domain_error);

  std::vector<Summand> bad_mean{{SummandKind::bernoulli, 1.5, 1.0}};
  CHECK_THROWS_AS((void)empirical_tail_vs_bound(bad_mean, 0.5, 2000, 1), std::invalid_argument);
  std::vector<Summand> bad_weight{{SummandKind::bernoulli, 0.5, -1.0}};
  CHECK_THROWS_AS((void)empirical_tail_vs_bound(bad_weight, 0.5, 2000, 1), std::invalid_argument);
  std::vector<Summand> zero_ev{{SummandKind::constant, 0.0, 1.0}};
  CHECK_THROWS_AS((void)empirical_tail_vs_bound(zero_ev, 0.5, 2000, 1), std::invalid_argument);
}

TEST_CASE("a degenerate always-one coin never deviates") {
  std::vector<Summand> one{{SummandKind::bernoulli, 1.0, 1.0}};
  TailCheckResult r = empirical_tail_vs_bound(one, 0.5, 2000, 7);
  CHECK(r.exceed_count == 0);
  CHECK(r.empirical == 0.0);
  CHECK_FALSE(r.weighted);
  CHECK(r.pass);
}

TEST_CASE("fifty fair coins sit far below the unweighted bound") {
  std::vector<Summand> coins(50);  // defaults: Bernoulli(1/2), unit weight
  TailCheckResult r = empirical_tail_vs_bound(coins, 0.5, 20000, 4242);
  CHECK_FALSE(r.weighted);
  CHECK(r.bound == doctest::Approx(2.0 * std::exp(-0.25 * 25.0 / 4.0)).epsilon(1e-14));
  // True exceedance probability is about 3e-4; leave slack for sampling noise.
  CHECK(r.empirical <= 0.002);
  CHECK(r.pass);
}

TEST_CASE("an eps above one half forces the weighted form") {
  std::vector<Summand> coins(20);
  TailCheckResult r = empirical_tail_vs_bound(coins, 0.6, 20000, 99);
  CHECK(r.weighted);
  CHECK(r.bound == doctest::Approx(std::min(1.0, 2.0 * std::exp(-0.36 * 100.0 / 20.0)))
                       .epsilon(1e-14));
  // True exceedance probability is about 0.0118.
  CHECK(r.empirical > 0.0);
  CHECK(r.empirical < 0.05);
  CHECK(r.pass);
}

TEST_CASE("bounded uniform summands cannot exceed a full-range deviation") {
  std::vector<Summand> u(3, Summand{SummandKind::uniform, 0.5, 1.0});
  TailCheckResult r = empirical_tail_vs_bound(u, 1.0, 5000, 11);
  CHECK(r.weighted);
  CHECK(r.bound == doctest::Approx(2.0 * std::exp(-2.25 / 3.0)).epsilon(1e-14));
  CHECK(r.exceed_count == 0);  // |V - 1.5| = 1.5 needs V at an endpoint of [0, 3]
  CHECK(r.pass);
}

TEST_CASE("tail check is deterministic in the seed") {
  std::vector<Summand> coins(30);
  TailCheckResult a = empirical_tail_vs_bound(coins, 0.4, 10000, 123);
  TailCheckResult b = empirical_tail_vs_bound(coins, 0.4, 10000, 123);
  CHECK(a.exceed_count == b.exceed_count);
  CHECK(a.empirical == b.empirical);
  CHECK(a.bound == b.bound);
  CHECK(a.pass == b.pass);
}

TEST_SUITE_END();
