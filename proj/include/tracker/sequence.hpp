#pragma once

#include <cstdint>
#include <vector>

#include "tracker/model.hpp"

// Reward sequence and sampling-time generation. A path records which rounds
// were sampled (the coin Z_j succeeds with probability j^-beta) and the
// rewards seen at those rounds. Rewards and coins come from independent
// counter-addressed streams, so any single round can be regenerated in
// isolation and parallel generation matches serial generation exactly.

namespace tracker {

enum class RewardKind { bernoulli, beta, constant };

struct RewardFamily {
  RewardKind kind = RewardKind::bernoulli;
  // Beta shapes are concentration * m and concentration * (1 - m), keeping
  // the mean at m. Ignored by the other families.
  double concentration = 8.0;
};

const char* reward_kind_name(RewardKind kind);

/// One generated path. rewards/explored hold the full per-round sequences
/// only when the horizon is small enough to materialize (see
/// kMaterializeLimit); the sampled view is always present and is all the
/// estimators need.
struct SamplePath {
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> times;     // sampled rounds T(1) < ... < T(w)
  std::vector<double> sampled_rewards;  // reward at each sampled round
  std::vector<double> rewards;          // all rounds, 1-based at index j-1; empty if lazy
  std::vector<std::uint8_t> explored;   // coin per round; empty if lazy

  std::uint64_t sample_count() const { return times.size(); }
  bool materialized() const { return !rewards.empty(); }
};

/// Horizon above which full per-round arrays are not stored.
inline constexpr std::uint64_t kMaterializeLimit = 10'000'000;

/// Reward for round j under the given profile and family, as a pure function
/// of the seed. Exposed so lazy consumers can regenerate single rounds.
double reward_at(const MeanProfile& profile, const RewardFamily& family,
                 std::uint64_t seed, std::uint64_t round);

/// Same draw on an explicit stream, for callers that keep several reward
/// sequences alive under one seed (one per bandit arm).
double reward_at_stream(const MeanProfile& profile, const RewardFamily& family,
                        std::uint64_t seed, std::uint64_t stream, std::uint64_t round);

SamplePath generate_path(const MeanProfile& profile, const SamplingSchedule& schedule,
                         const RewardFamily& family, std::uint64_t seed);

/// Single-threaded reference with identical output.
SamplePath generate_path_serial(const MeanProfile& profile, const SamplingSchedule& schedule,
                                const RewardFamily& family, std::uint64_t seed);

/// Number of sampled rounds with T(l) <= r. Throws std::out_of_range unless
/// 1 <= r <= horizon.
std::uint64_t count_samples_upto(const SamplePath& path, std::uint64_t r);

/// Empirical check of the two-sided growth envelope for the sample count:
///   r^(1-beta) / 4  <=  #E(r)  <=  4 r^(1-beta) / (1 - beta)
/// for every integer r >= (ln t)^(2/(1-beta)). Reports the violating rounds
/// and the extreme ratios #E(r) / r^(1-beta) seen over the checked range.
struct SamplingCountDiagnostic {
  std::uint64_t r_min = 0;                // first checked round
  std::vector<std::uint64_t> violations;  // rounds breaking either side
  double min_ratio = 0;
  double max_ratio = 0;
  bool checked = false;                   // false when r_min exceeds the horizon
  bool ok() const { return violations.empty(); }
};

SamplingCountDiagnostic sampling_count_diagnostic(const SamplePath& path, double beta);

}  // namespace tracker
