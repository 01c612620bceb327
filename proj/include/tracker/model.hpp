#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

// Problem description types: a piecewise constant mean profile over rounds
// 1..t, the exponent set steering the estimators and their guarantees, and
// the decaying sampling rate. Validation distinguishes malformed inputs
// (non-finite, non-positive, structurally broken) from violated parameter
// constraints so callers can report each kind precisely.

namespace tracker {

/// Exponents shared across the pipeline.
///   gamma0  lower bound on epoch length scale: every epoch spans >= t^gamma0
///   gamma   warmup scale: estimates are judged only from t^gamma into an epoch
///   beta    sampling decay: round j is sampled with probability j^-beta
///   delta   forgetting exponent of the recursive estimator
///   b       tracking tolerance exponent: relative error target t^-b
///   mu0     floor on the epoch means
struct ParamSet {
  double gamma0 = 0;
  double gamma = 0;
  double beta = 0;
  double delta = 0;
  double b = 0;
  double mu0 = 0;
};

/// Piecewise constant mean profile. transitions holds s_1 < ... < s_M with
/// s_1 = 1 and s_M = horizon. Epoch k (0-based) covers rounds
/// [transitions[k], transitions[k+1]) and the final epoch also includes the
/// closing round itself, so every round in [1, horizon] has a mean.
struct MeanProfile {
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> transitions;
  std::vector<double> means;

  std::size_t epoch_count() const { return means.size(); }

  /// 0-based epoch index of round j in [1, horizon]. Round == horizon maps
  /// to the final epoch.
  std::size_t epoch_of(std::uint64_t round) const;

  /// Mean in force at round j.
  double mean_at(std::uint64_t round) const { return means[epoch_of(round)]; }
};

/// Decaying exploration rate eps_j = j^-beta, evaluated as exp(-beta ln j)
/// so accuracy is uniform across the full range of j.
struct SamplingSchedule {
  double beta = 0;
  double epsilon(std::uint64_t j) const {
    return j == 1 ? 1.0 : std::exp(-beta * std::log(double(j)));
  }
};

struct Violation {
  std::string constraint;  // short name of the broken rule
  std::string detail;      // offending values, epoch index where relevant
};

struct ValidationResult {
  std::vector<Violation> malformed;   // bad inputs, checked first
  std::vector<Violation> violations;  // constraint inequalities
  bool ok() const { return malformed.empty() && violations.empty(); }
  std::string summary() const;
};

/// Check the exponent constraints:
///   0 < beta < gamma < gamma0 <= 1
///   0 < delta < (gamma - beta) / (1 - beta)
///   0 < b < delta * gamma * (1 - beta) / 2
///   0 < mu0 <= 1
/// Comparisons are exact; no epsilon slack is applied.
ValidationResult validate_params(const ParamSet& p);

/// Check a profile structurally and against the regime of a parameter set:
/// every epoch must span at least t^gamma0 rounds and every mean must be at
/// least mu0. Malformed parameters make the profile check fail closed.
ValidationResult validate_profile(const MeanProfile& profile, const ParamSet& p);

}  // namespace tracker
