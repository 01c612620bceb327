#include "tracker/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tracker/rng.hpp"

namespace tracker {

const char* reward_kind_name(RewardKind kind) {
  switch (kind) {
    case RewardKind::bernoulli: return "bernoulli";
    case RewardKind::beta: return "beta";
    case RewardKind::constant: return "constant";
  }
  return "?";
}

double reward_at_stream(const MeanProfile& profile, const RewardFamily& family,
                        std::uint64_t seed, std::uint64_t stream, std::uint64_t round) {
  double m = profile.mean_at(round);
  CounterRng rewards(seed, stream);
  switch (family.kind) {
    case RewardKind::constant:
      return m;
    case RewardKind::bernoulli:
      return rewards.bernoulli_at(round, m) ? 1.0 : 0.0;
    case RewardKind::beta: {
      if (m >= 1.0) return 1.0;
      // Rejection sampling needs a variable number of uniforms, so the round
      // owns a sequential sub-stream seeded from its counter cell.
      SplitMix64 sub(rewards.bits_at(round));
      return sub.beta(family.concentration * m, family.concentration * (1.0 - m));
    }
  }
  return m;
}

double reward_at(const MeanProfile& profile, const RewardFamily& family,
                 std::uint64_t seed, std::uint64_t round) {
  return reward_at_stream(profile, family, seed, kStreamRewards, round);
}

namespace {

void check_inputs(const MeanProfile& profile, const SamplingSchedule& schedule) {
  if (profile.horizon == 0 || profile.transitions.empty() || profile.means.empty())
    throw std::invalid_argument("generate_path: empty profile");
  if (!(schedule.beta > 0.0) || !(schedule.beta < 1.0))
    throw std::invalid_argument("generate_path: beta must lie in (0, 1)");
}

}  // namespace

SamplePath generate_path_serial(const MeanProfile& profile, const SamplingSchedule& schedule,
                                const RewardFamily& family, std::uint64_t seed) {
  check_inputs(profile, schedule);
  const std::uint64_t t = profile.horizon;
  const bool materialize = t <= kMaterializeLimit;
  CounterRng coins(seed, kStreamExploration);

  SamplePath path;
  path.horizon = t;
  path.seed = seed;
  if (materialize) {
    path.rewards.resize(t);
    path.explored.resize(t);
  }
  for (std::uint64_t j = 1; j <= t; ++j) {
    bool z = coins.bernoulli_at(j, schedule.epsilon(j));
    if (z) {
      path.times.push_back(j);
      path.sampled_rewards.push_back(reward_at(profile, family, seed, j));
    }
    if (materialize) {
      path.explored[j - 1] = z ? 1 : 0;
      path.rewards[j - 1] = reward_at(profile, family, seed, j);
    }
  }
  return path;
}

SamplePath generate_path(const MeanProfile& profile, const SamplingSchedule& schedule,
                         const RewardFamily& family, std::uint64_t seed) {
  check_inputs(profile, schedule);
  const std::uint64_t t = profile.horizon;
  const bool materialize = t <= kMaterializeLimit;
  CounterRng coins(seed, kStreamExploration);

  SamplePath path;
  path.horizon = t;
  path.seed = seed;

  // Two-pass blocked scan over the coins: count hits per block, prefix-sum,
  // then write sampled rounds into their final slots. The layout does not
  // depend on the number of threads.
  const std::uint64_t block = 1 << 16;
  const std::uint64_t nblocks = (t + block - 1) / block;
  std::vector<std::uint64_t> counts(nblocks, 0);

#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < std::int64_t(nblocks); ++bi) {
    std::uint64_t lo = std::uint64_t(bi) * block + 1;
    std::uint64_t hi = std::min(t, lo + block - 1);
    std::uint64_t c = 0;
    for (std::uint64_t j = lo; j <= hi; ++j)
      if (coins.bernoulli_at(j, schedule.epsilon(j))) ++c;
    counts[bi] = c;
  }

  std::vector<std::uint64_t> offsets(nblocks + 1, 0);
  for (std::uint64_t bi = 0; bi < nblocks; ++bi) offsets[bi + 1] = offsets[bi] + counts[bi];
  const std::uint64_t w = offsets[nblocks];
  path.times.resize(w);
  path.sampled_rewards.resize(w);
  if (materialize) {
    path.rewards.resize(t);
    path.explored.resize(t);
  }

#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < std::int64_t(nblocks); ++bi) {
    std::uint64_t lo = std::uint64_t(bi) * block + 1;
    std::uint64_t hi = std::min(t, lo + block - 1);
    std::uint64_t at = offsets[bi];
    for (std::uint64_t j = lo; j <= hi; ++j) {
      bool z = coins.bernoulli_at(j, schedule.epsilon(j));
      if (z) {
        path.times[at] = j;
        path.sampled_rewards[at] = reward_at(profile, family, seed, j);
        ++at;
      }
      if (materialize) {
        path.explored[j - 1] = z ? 1 : 0;
        path.rewards[j - 1] = reward_at(profile, family, seed, j);
      }
    }
  }
  return path;
}

std::uint64_t count_samples_upto(const SamplePath& path, std::uint64_t r) {
  if (r < 1 || r > path.horizon)
    throw std::out_of_range("count_samples_upto: round outside [1, horizon]");
  auto it = std::upper_bound(path.times.begin(), path.times.end(), r);
  return std::uint64_t(it - path.times.begin());
}

SamplingCountDiagnostic sampling_count_diagnostic(const SamplePath& path, double beta) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::invalid_argument("sampling_count_diagnostic: beta must lie in (0, 1)");
  SamplingCountDiagnostic d;
  const std::uint64_t t = path.horizon;
  double threshold = std::pow(std::log(double(t)), 2.0 / (1.0 - beta));
  double r0 = std::ceil(threshold);
  if (!(r0 >= 1.0)) r0 = 1.0;
  if (r0 > double(t)) {
    d.r_min = t + 1;
    return d;  // nothing to check at this horizon
  }
  d.r_min = std::uint64_t(r0);
  d.checked = true;
  d.min_ratio = std::numeric_limits<double>::infinity();
  d.max_ratio = 0.0;

  const double upper_coef = 4.0 / (1.0 - beta);
  std::size_t idx = 0;  // samples with time < current r get counted incrementally
  while (idx < path.times.size() && path.times[idx] < d.r_min) ++idx;
  std::uint64_t count = idx;
  for (std::uint64_t r = d.r_min; r <= t; ++r) {
    while (idx < path.times.size() && path.times[idx] <= r) {
      ++idx;
      ++count;
    }
    double scale = std::pow(double(r), 1.0 - beta);
    double ratio = double(count) / scale;
    if (ratio < d.min_ratio) d.min_ratio = ratio;
    if (ratio > d.max_ratio) d.max_ratio = ratio;
    if (double(count) < scale / 4.0 || double(count) > upper_coef * scale)
      d.violations.push_back(r);
  }
  return d;
}

}  // namespace tracker
