#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tracker/model.hpp"
#include "tracker/sequence.hpp"

// Epsilon-decay bandit built on the recursive estimator. Each round either
// explores (probability j^-beta, then a uniformly random arm) or exploits
// the arm whose running estimate is highest. Estimates fold in rewards only
// on exploration rounds, so exploration doubles as the sampling schedule of
// the single-arm analysis. Rewards on exploit rounds are recorded in the
// trace but leave the estimates untouched; regret is measured against the
// true means (pseudo-regret), so the exploit choice drives it directly.

namespace tracker {

struct BanditConfig {
  std::uint64_t horizon = 0;
  std::vector<MeanProfile> arms;  // one profile per arm, all on the same horizon
  double beta = 0;                // exploration decay
  double delta = 0;               // estimator forgetting exponent
  RewardFamily family;
  std::uint64_t seed = 1;
};

/// Round-major record of a run. Arm indices are 0-based. estimates holds
/// arm_count entries per round, the post-update values of that round.
struct BanditTrace {
  std::uint64_t horizon = 0;
  std::uint32_t arm_count = 0;
  std::vector<std::uint32_t> chosen;
  std::vector<std::uint8_t> explored;
  std::vector<double> reward;
  std::vector<std::uint32_t> exploit_choice;  // argmax of estimates before the round
  std::vector<std::uint32_t> best;            // argmax of true means
  std::vector<double> regret;                 // m_best - m_chosen at the round
  std::vector<double> cum_regret;
  std::vector<double> estimates;

  double estimate(std::uint64_t round, std::uint32_t arm) const {
    return estimates[(round - 1) * arm_count + arm];
  }
};

/// Run one bandit path. Throws std::invalid_argument on a structurally bad
/// configuration (mismatched horizons, empty arms, exponents outside (0, 1)).
BanditTrace run_bandit(const BanditConfig& cfg);

/// How quickly the exploit choice re-latches onto the true best arm after a
/// mean transition. For each transition round s (union over arms, interior
/// only): delay d is the smallest number of rounds such that every exploit
/// choice from s + d up to the next change of the true best arm picks that
/// best arm; latched reports whether such a stretch exists at all.
struct TransitionLatch {
  std::uint64_t transition_round = 0;
  std::uint32_t new_best = 0;
  bool best_changed = false;  // the transition actually moved the argmax
  bool latched = false;
  std::uint64_t delay = 0;    // rounds from the transition to stable re-latch
  std::uint64_t stretch_end = 0;  // first round after the evaluated stretch
};

std::vector<TransitionLatch> latch_delays(const BanditTrace& trace,
                                          std::span<const MeanProfile> arms);

}  // namespace tracker
