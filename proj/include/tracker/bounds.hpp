#pragma once

#include <array>
#include <cstdint>
#include <span>

// Concentration bound evaluators for sums of independent [0, 1] rewards,
// plus a closed-form lower bound on the probability that a full run keeps
// both the sample budget and the tracking tolerance.
//
// For S = sum of Bernoulli rewards with mean sum ES:
//   P(|S - ES| >= eps * ES) <= 2 exp(-eps^2 * ES / 4),   0 < eps <= 1/2.
// For weighted sums V = sum lambda_j X_j with EV > 0:
//   P(|V - EV| >= eps * EV) <= 2 exp(-eps^2 (EV)^2 / sum lambda_j^2).

namespace tracker {

struct BoundReport {
  double eps = 0;
  double mean_sum = 0;       // ES, or EV for the weighted form
  double lambda_sq_sum = 0;  // 0 for the unweighted form
  double bound = 0;
  bool vacuous = false;      // bound >= 1 carries no information
};

/// Unweighted Bernoulli form. Throws std::domain_error unless 0 < eps <= 1/2;
/// throws std::invalid_argument unless mean_sum is finite and positive.
BoundReport chernoff_bound(double eps, double mean_sum);

/// Weighted form. Requires eps > 0, ev > 0, lambda_sq_sum > 0, all finite.
BoundReport azuma_bound(double eps, double ev, double lambda_sq_sum);

/// Empirical tail frequency of |S - ES| >= eps * ES against the applicable
/// bound, estimated by Monte Carlo over independent trials.
enum class SummandKind { bernoulli, uniform, constant };

struct Summand {
  SummandKind kind = SummandKind::bernoulli;
  double mean = 0.5;    // Bernoulli parameter or the constant value; uniform is on [0, 1]
  double lambda = 1.0;  // weight
};

struct TailCheckResult {
  double empirical = 0;   // observed exceedance frequency
  double bound = 0;       // applicable analytic bound (possibly clamped to 1)
  double std_err = 0;     // binomial standard error of the frequency
  std::uint64_t exceed_count = 0;
  std::uint64_t trials = 0;
  bool weighted = false;  // true when the weighted form was applied
  bool pass = false;      // empirical <= bound + 3 * std_err
};

/// Requires at least 1000 trials. Uses the unweighted form when every
/// summand is Bernoulli with unit weight and eps <= 1/2, the weighted form
/// otherwise. Deterministic in the seed and parallelized over trials.
TailCheckResult empirical_tail_vs_bound(std::span<const Summand> summands, double eps,
                                        std::uint64_t trials, std::uint64_t seed);

/// Closed-form lower bound on the probability that a run of horizon t keeps
/// the sample budget and tracks every post-warmup epoch mean:
///   1 - t exp(-c[0] t^(gamma-beta)) - exp(-c[1] t^(1-beta)) - 2t exp(-c[2] t^e)
/// with the tail exponent e chosen by the caller (the two supported readings
/// differ in how the warmup discount enters).
enum class TailExponent {
  gap_minus_2b,          // e = gamma - beta - 2b
  scaled_gap_minus_2b,   // e = gamma * (1 - beta) - 2b
};

struct SuccessLowerBound {
  double raw = 0;      // the expression itself, may be negative at small t
  double clamped = 0;  // max(raw, 0)
};

SuccessLowerBound known_transitions_success(double t, double beta, double gamma, double b,
                                            const std::array<double, 3>& c, TailExponent e);

}  // namespace tracker
