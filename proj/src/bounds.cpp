#include "tracker/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "tracker/rng.hpp"

namespace tracker {

BoundReport chernoff_bound(double eps, double mean_sum) {
  if (!(eps > 0.0) || !(eps <= 0.5))
    throw std::domain_error("chernoff_bound: eps must lie in (0, 1/2]");
  if (!std::isfinite(mean_sum) || !(mean_sum > 0.0))
    throw std::invalid_argument("chernoff_bound: mean_sum must be finite and positive");
  BoundReport r;
  r.eps = eps;
  r.mean_sum = mean_sum;
  r.bound = 2.0 * std::exp(-eps * eps * mean_sum / 4.0);
  r.vacuous = r.bound >= 1.0;
  return r;
}

BoundReport azuma_bound(double eps, double ev, double lambda_sq_sum) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::domain_error("azuma_bound: eps must be positive");
  if (!std::isfinite(ev) || !(ev > 0.0))
    throw std::invalid_argument("azuma_bound: ev must be finite and positive");
  if (!std::isfinite(lambda_sq_sum) || !(lambda_sq_sum > 0.0))
    throw std::invalid_argument("azuma_bound: lambda_sq_sum must be finite and positive");
  BoundReport r;
  r.eps = eps;
  r.mean_sum = ev;
  r.lambda_sq_sum = lambda_sq_sum;
  r.bound = 2.0 * std::exp(-eps * eps * ev * ev / lambda_sq_sum);
  r.vacuous = r.bound >= 1.0;
  return r;
}

TailCheckResult empirical_tail_vs_bound(std::span<const Summand> summands, double eps,
                                        std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1000)
    throw std::invalid_argument("empirical_tail_vs_bound: need at least 1000 trials");
  if (summands.empty())
    throw std::invalid_argument("empirical_tail_vs_bound: need at least one summand");
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::domain_error("empirical_tail_vs_bound: eps must be positive");

  double ev = 0.0;
  double lambda_sq = 0.0;
  bool plain_bernoulli = true;
  for (const Summand& s : summands) {
    double m = s.kind == SummandKind::uniform ? 0.5 : s.mean;
    if (!(m >= 0.0) || !(m <= 1.0))
      throw std::invalid_argument("empirical_tail_vs_bound: summand mean outside [0, 1]");
    if (!(s.lambda > 0.0) || !std::isfinite(s.lambda))
      throw std::invalid_argument("empirical_tail_vs_bound: weights must be positive");
    ev += s.lambda * m;
    lambda_sq += s.lambda * s.lambda;
    if (s.kind != SummandKind::bernoulli || s.lambda != 1.0) plain_bernoulli = false;
  }
  if (!(ev > 0.0))
    throw std::invalid_argument("empirical_tail_vs_bound: expected sum must be positive");

  TailCheckResult res;
  res.trials = trials;
  res.weighted = !(plain_bernoulli && eps <= 0.5);
  if (res.weighted) {
    res.bound = std::min(1.0, azuma_bound(eps, ev, lambda_sq).bound);
  } else {
    res.bound = std::min(1.0, chernoff_bound(eps, ev).bound);
  }

  const double tail = eps * ev;
  const std::size_t n = summands.size();
  CounterRng rng(seed, kStreamTailCheck);
  std::uint64_t exceed = 0;

#pragma omp parallel for schedule(static) reduction(+ : exceed)
  for (std::int64_t i = 0; i < std::int64_t(trials); ++i) {
    double sum = 0.0;
    std::uint64_t cell = std::uint64_t(i) * n;
    for (std::size_t j = 0; j < n; ++j) {
      const Summand& s = summands[j];
      double x = 0.0;
      switch (s.kind) {
        case SummandKind::bernoulli:
          x = rng.bernoulli_at(cell + j, s.mean) ? 1.0 : 0.0;
          break;
        case SummandKind::uniform:
          x = rng.uniform_at(cell + j);
          break;
        case SummandKind::constant:
          x = s.mean;
          break;
      }
      sum += s.lambda * x;
    }
    if (std::abs(sum - ev) >= tail) ++exceed;
  }

  res.exceed_count = exceed;
  res.empirical = double(exceed) / double(trials);
  res.std_err = std::sqrt(res.empirical * (1.0 - res.empirical) / double(trials));
  res.pass = res.empirical <= res.bound + 3.0 * res.std_err;
  return res;
}

SuccessLowerBound known_transitions_success(double t, double beta, double gamma, double b,
                                            const std::array<double, 3>& c, TailExponent e) {
  if (!(t >= 2.0) || !std::isfinite(t))
    throw std::invalid_argument("known_transitions_success: need t >= 2");
  for (double ci : c)
    if (!std::isfinite(ci) || !(ci > 0.0))
      throw std::invalid_argument("known_transitions_success: constants must be positive");
  double expo = e == TailExponent::gap_minus_2b ? gamma - beta - 2.0 * b
                                                : gamma * (1.0 - beta) - 2.0 * b;
  SuccessLowerBound out;
  out.raw = 1.0 - t * std::exp(-c[0] * std::pow(t, gamma - beta)) -
            std::exp(-c[1] * std::pow(t, 1.0 - beta)) -
            2.0 * t * std::exp(-c[2] * std::pow(t, expo));
  out.clamped = out.raw > 0.0 ? out.raw : 0.0;
  return out;
}

}  // namespace tracker
