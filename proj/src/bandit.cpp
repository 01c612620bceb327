#include "tracker/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tracker/estimators.hpp"
#include "tracker/rng.hpp"

namespace tracker {

namespace {

void validate(const BanditConfig& cfg) {
  if (cfg.arms.empty()) throw std::invalid_argument("run_bandit: need at least one arm");
  if (cfg.horizon < 1) throw std::invalid_argument("run_bandit: horizon must be >= 1");
  if (!(cfg.beta > 0.0) || !(cfg.beta < 1.0))
    throw std::invalid_argument("run_bandit: beta must lie in (0, 1)");
  if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0))
    throw std::invalid_argument("run_bandit: delta must lie in (0, 1)");
  for (const MeanProfile& arm : cfg.arms) {
    if (arm.horizon != cfg.horizon)
      throw std::invalid_argument("run_bandit: arm horizon differs from config horizon");
    if (arm.transitions.size() < 2 || arm.transitions.front() != 1 ||
        arm.transitions.back() != cfg.horizon ||
        arm.means.size() + 1 != arm.transitions.size())
      throw std::invalid_argument("run_bandit: arm profile is structurally invalid");
    for (std::size_t i = 0; i + 1 < arm.transitions.size(); ++i)
      if (arm.transitions[i] >= arm.transitions[i + 1])
        throw std::invalid_argument("run_bandit: arm transitions must increase");
    for (double m : arm.means)
      if (!std::isfinite(m) || m <= 0.0 || m > 1.0)
        throw std::invalid_argument("run_bandit: arm means must lie in (0, 1]");
  }
}

std::uint32_t argmax(std::span<const double> v) {
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

BanditTrace run_bandit(const BanditConfig& cfg) {
  validate(cfg);
  const std::uint64_t t = cfg.horizon;
  const std::uint32_t K = std::uint32_t(cfg.arms.size());

  BanditTrace tr;
  tr.horizon = t;
  tr.arm_count = K;
  tr.chosen.resize(t);
  tr.explored.resize(t);
  tr.reward.resize(t);
  tr.exploit_choice.resize(t);
  tr.best.resize(t);
  tr.regret.resize(t);
  tr.cum_regret.resize(t);
  tr.estimates.resize(t * K);

  CounterRng coins(cfg.seed, kStreamExploration);
  CounterRng picks(cfg.seed, kStreamArmChoice);
  SamplingSchedule schedule{cfg.beta};

  std::vector<double> est(K, 0.0);
  std::vector<std::uint64_t> updates(K, 0);
  std::vector<double> means(K);
  double cum = 0.0;

  for (std::uint64_t j = 1; j <= t; ++j) {
    for (std::uint32_t a = 0; a < K; ++a) means[a] = cfg.arms[a].mean_at(j);
    std::uint32_t exploit = argmax(est);
    bool explore = coins.bernoulli_at(j, schedule.epsilon(j));
    std::uint32_t arm = explore
                            ? std::uint32_t(picks.uniform_at(j) * double(K))
                            : exploit;
    if (arm >= K) arm = K - 1;  // uniform_at < 1, so only an fp guard
    double x = reward_at_stream(cfg.arms[arm], cfg.family, cfg.seed,
                                arm_reward_stream(arm), j);
    if (explore) {
      updates[arm] += 1;
      est[arm] = recursive_update(est[arm], updates[arm], x, cfg.delta);
    }
    std::uint32_t best = argmax(means);

    std::size_t i = j - 1;
    tr.chosen[i] = arm;
    tr.explored[i] = explore ? 1 : 0;
    tr.reward[i] = x;
    tr.exploit_choice[i] = exploit;
    tr.best[i] = best;
    tr.regret[i] = means[best] - means[arm];
    cum += tr.regret[i];
    tr.cum_regret[i] = cum;
    std::copy(est.begin(), est.end(), tr.estimates.begin() + std::int64_t(i) * K);
  }
  return tr;
}

std::vector<TransitionLatch> latch_delays(const BanditTrace& trace,
                                          std::span<const MeanProfile> arms) {
  const std::uint64_t t = trace.horizon;
  std::set<std::uint64_t> transition_rounds;
  for (const MeanProfile& arm : arms)
    for (std::size_t k = 1; k + 1 < arm.transitions.size(); ++k)
      transition_rounds.insert(arm.transitions[k]);

  std::vector<TransitionLatch> out;
  for (std::uint64_t s : transition_rounds) {
    if (s < 1 || s > t) continue;
    TransitionLatch tl;
    tl.transition_round = s;
    tl.new_best = trace.best[s - 1];
    tl.best_changed = s > 1 && trace.best[s - 2] != tl.new_best;

    // The stretch to evaluate runs until the true best arm next changes.
    std::uint64_t e = t + 1;
    for (std::uint64_t r = s + 1; r <= t; ++r)
      if (trace.best[r - 1] != tl.new_best) {
        e = r;
        break;
      }
    tl.stretch_end = e;

    std::uint64_t last_wrong = 0;
    for (std::uint64_t r = e - 1; r >= s; --r) {
      if (trace.exploit_choice[r - 1] != tl.new_best) {
        last_wrong = r;
        break;
      }
      if (r == s) break;
    }
    if (last_wrong == 0) {
      tl.delay = 0;
      tl.latched = true;
    } else if (last_wrong == e - 1) {
      tl.delay = e - s;
      tl.latched = false;
    } else {
      tl.delay = last_wrong - s + 1;
      tl.latched = true;
    }
    out.push_back(tl);
  }
  return out;
}

}  // namespace tracker
