#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tracker/estimators.hpp"
#include "tracker/model.hpp"
#include "tracker/sequence.hpp"

// Monte Carlo verification of the high-probability tracking claim. A single
// trial is "good" when it keeps the sample budget
//   w <= 4 t^(1-beta) / (1 - beta)
// and every post-warmup estimate stays within relative tolerance t^-b of its
// epoch mean, for every sampled round strictly before the next transition.
// The harness runs independent trials, tallies failures by cause, and wraps
// the good-trial frequency in a Wilson 95% interval.

namespace tracker {

struct GoodEventReport {
  bool sample_budget_ok = false;
  bool tracking_ok = false;
  std::uint64_t samples_observed = 0;  // w for the trial
  double budget_threshold = 0;         // 4 t^(1-beta) / (1-beta)
  double tolerance = 0;                // t^-b
  std::vector<double> epoch_max_rel_dev;  // per epoch, post-warmup entries only
  bool has_violation = false;
  std::uint32_t first_violation_epoch = 0;  // 0-based, valid when has_violation
  std::uint64_t first_violation_l = 0;
  std::uint64_t empty_window_epochs = 0;
  bool good() const { return sample_budget_ok && tracking_ok; }
};

/// Judge one trace against the good event. Throws std::invalid_argument when
/// the trace does not belong to the profile (rounds or epochs out of range).
GoodEventReport check_good_event(const TrackingTrace& trace, const MeanProfile& profile,
                                 const ParamSet& params);

struct ExperimentConfig {
  MeanProfile profile;
  ParamSet params;
  RewardFamily family;
  EstimatorKind estimator = EstimatorKind::recursive;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
};

struct TrialOutcome {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  bool good = false;
  bool budget_ok = false;
  bool tracking_ok = false;
  std::uint64_t samples = 0;
  std::uint64_t empty_windows = 0;
  double max_rel_dev = 0;  // over post-warmup entries of all epochs
  bool has_violation = false;
  std::uint32_t first_violation_epoch = 0;
  std::uint64_t first_violation_l = 0;
};

struct WilsonInterval {
  double lo = 0;
  double hi = 1;
};

/// Wilson score interval at 95% coverage.
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t n);

struct MonteCarloSummary {
  std::uint64_t trials = 0;
  std::uint64_t good = 0;
  double p_hat = 0;
  double ci_lo = 0;
  double ci_hi = 1;
  // Failure taxonomy. A trial can carry several labels, so the counts can
  // exceed trials - good.
  std::uint64_t fail_budget = 0;
  std::uint64_t fail_tracking = 0;
  std::uint64_t fail_empty_window = 0;
  std::vector<std::uint64_t> tracking_fail_by_epoch;  // trials violating in each epoch
  double wallclock_ms = 0;
};

/// Seed for trial i, derived so that trials are mutually independent and a
/// subset of trials can be reproduced in isolation.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i);

/// Read the TRACKER_THREADS cap, falling back to the OpenMP default.
int worker_count();

/// Run the experiment. Validates the configuration first and throws
/// std::invalid_argument describing every broken rule when it is rejected.
/// Trials run in parallel; results are identical to the serial reference for
/// any thread count. Pass per_trial to also collect one row per trial.
MonteCarloSummary run_monte_carlo(const ExperimentConfig& cfg,
                                  std::vector<TrialOutcome>* per_trial = nullptr);

/// Single-threaded reference implementation with identical output
/// (wallclock aside).
MonteCarloSummary run_monte_carlo_serial(const ExperimentConfig& cfg,
                                         std::vector<TrialOutcome>* per_trial = nullptr);

enum class SweepAxis { horizon, delta, beta, b };

const char* sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(const std::string& name);

struct SweepPoint {
  double value = 0;
  ExperimentConfig config;  // the resolved configuration at this point
  bool skipped = false;
  std::string skip_reason;
  MonteCarloSummary summary;  // valid when not skipped
};

/// Re-run the experiment along one axis. Horizon sweeps rescale transition
/// rounds proportionally (endpoints pinned at 1 and the new horizon); other
/// axes replace the exponent. Points whose configuration fails validation
/// are reported as skipped instead of aborting the sweep. Every point reuses
/// the same master seed so results differ only through the axis.
std::vector<SweepPoint> sweep(const ExperimentConfig& base, SweepAxis axis,
                              std::span<const double> values);

}  // namespace tracker
