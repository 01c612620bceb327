#include "tracker/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "tracker/rng.hpp"

namespace tracker {

GoodEventReport check_good_event(const TrackingTrace& trace, const MeanProfile& profile,
                                 const ParamSet& params) {
  GoodEventReport rep;
  const std::uint64_t t = profile.horizon;
  const std::size_t epochs = profile.epoch_count();
  rep.samples_observed = trace.entries.size();
  rep.budget_threshold = 4.0 * std::pow(double(t), 1.0 - params.beta) / (1.0 - params.beta);
  rep.tolerance = std::pow(double(t), -params.b);
  rep.sample_budget_ok = double(rep.samples_observed) <= rep.budget_threshold;
  rep.epoch_max_rel_dev.assign(epochs, 0.0);
  rep.empty_window_epochs = trace.empty_window_epochs.size();
  rep.tracking_ok = true;

  for (const TraceEntry& e : trace.entries) {
    if (e.round < 1 || e.round > t || e.epoch >= epochs)
      throw std::invalid_argument("check_good_event: trace does not match profile");
    if (e.in_warmup) continue;
    // The tracking condition covers rounds strictly before the next
    // transition; only the closing round itself can sit at one.
    if (e.round == t) continue;
    double m = profile.means[e.epoch];
    double rel = std::abs(e.estimate - m) / m;
    if (rel > rep.epoch_max_rel_dev[e.epoch]) rep.epoch_max_rel_dev[e.epoch] = rel;
    if (rel > rep.tolerance) {
      if (!rep.has_violation) {
        rep.has_violation = true;
        rep.first_violation_epoch = e.epoch;
        rep.first_violation_l = e.l;
      }
      rep.tracking_ok = false;
    }
  }
  return rep;
}

WilsonInterval wilson95(std::uint64_t successes, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("wilson95: need n >= 1");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double z2 = z * z;
  double nn = double(n);
  double p = double(successes) / nn;
  double denom = 1.0 + z2 / nn;
  double center = (p + z2 / (2.0 * nn)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  WilsonInterval ci;
  ci.lo = std::max(0.0, center - half);
  ci.hi = std::min(1.0, center + half);
  return ci;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i) {
  // One mix step separates trial streams; a second keeps low trial indices
  // from producing related bases.
  return mix64(master ^ mix64(0x54524C53ull + i * kGolden));
}

int worker_count() {
  int max = omp_get_max_threads();
  if (const char* env = std::getenv("TRACKER_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return int(std::min<long>(v, max));
  }
  return max;
}

namespace {

void validate_or_throw(const ExperimentConfig& cfg) {
  ValidationResult pr = validate_params(cfg.params);
  ValidationResult fr = validate_profile(cfg.profile, cfg.params);
  std::string msg = pr.summary() + fr.summary();
  if (cfg.family.kind == RewardKind::beta && !(cfg.family.concentration > 0.0))
    msg += "malformed: beta family concentration must be positive\n";
  if (cfg.trials < 1) msg += "malformed: trials must be >= 1\n";
  if (!msg.empty()) throw std::invalid_argument("configuration rejected:\n" + msg);
}

TrialOutcome run_one_trial(const ExperimentConfig& cfg, std::uint64_t i,
                           std::vector<double>& epoch_dev_scratch) {
  TrialOutcome out;
  out.trial = i;
  out.seed = trial_seed(cfg.seed, i);
  SamplingSchedule schedule{cfg.params.beta};
  SamplePath path = generate_path(cfg.profile, schedule, cfg.family, out.seed);
  TrackingTrace trace =
      cfg.estimator == EstimatorKind::recursive
          ? run_recursive(path, cfg.params.delta, cfg.profile, cfg.params.gamma)
          : run_oracle(path, cfg.profile, cfg.params.gamma);
  GoodEventReport rep = check_good_event(trace, cfg.profile, cfg.params);
  out.good = rep.good();
  out.budget_ok = rep.sample_budget_ok;
  out.tracking_ok = rep.tracking_ok;
  out.samples = rep.samples_observed;
  out.empty_windows = rep.empty_window_epochs;
  out.max_rel_dev = 0.0;
  epoch_dev_scratch = rep.epoch_max_rel_dev;
  for (double d : rep.epoch_max_rel_dev) out.max_rel_dev = std::max(out.max_rel_dev, d);
  out.has_violation = rep.has_violation;
  out.first_violation_epoch = rep.first_violation_epoch;
  out.first_violation_l = rep.first_violation_l;
  return out;
}

MonteCarloSummary aggregate(const ExperimentConfig& cfg,
                            const std::vector<TrialOutcome>& outcomes,
                            const std::vector<std::uint8_t>& epoch_violated,
                            double wallclock_ms) {
  MonteCarloSummary s;
  const std::size_t epochs = cfg.profile.epoch_count();
  s.trials = cfg.trials;
  s.tracking_fail_by_epoch.assign(epochs, 0);
  s.wallclock_ms = wallclock_ms;
  for (const TrialOutcome& o : outcomes) {
    if (o.good) ++s.good;
    if (!o.budget_ok) ++s.fail_budget;
    if (!o.tracking_ok) ++s.fail_tracking;
    if (o.empty_windows > 0) ++s.fail_empty_window;
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    for (std::size_t k = 0; k < epochs; ++k)
      if (epoch_violated[i * epochs + k]) ++s.tracking_fail_by_epoch[k];
  s.p_hat = double(s.good) / double(s.trials);
  WilsonInterval ci = wilson95(s.good, s.trials);
  s.ci_lo = ci.lo;
  s.ci_hi = ci.hi;
  return s;
}

MonteCarloSummary run_impl(const ExperimentConfig& cfg, std::vector<TrialOutcome>* per_trial,
                           bool parallel) {
  validate_or_throw(cfg);
  const std::size_t epochs = cfg.profile.epoch_count();
  const double tol = std::pow(double(cfg.profile.horizon), -cfg.params.b);
  std::vector<TrialOutcome> outcomes(cfg.trials);
  std::vector<std::uint8_t> epoch_violated(cfg.trials * epochs, 0);

  double t0 = omp_get_wtime();
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::int64_t i = 0; i < std::int64_t(cfg.trials); ++i) {
      std::vector<double> devs;
      outcomes[i] = run_one_trial(cfg, std::uint64_t(i), devs);
      for (std::size_t k = 0; k < epochs; ++k)
        epoch_violated[std::uint64_t(i) * epochs + k] = devs[k] > tol ? 1 : 0;
    }
  } else {
    for (std::uint64_t i = 0; i < cfg.trials; ++i) {
      std::vector<double> devs;
      outcomes[i] = run_one_trial(cfg, i, devs);
      for (std::size_t k = 0; k < epochs; ++k)
        epoch_violated[i * epochs + k] = devs[k] > tol ? 1 : 0;
    }
  }
  double wallclock_ms = (omp_get_wtime() - t0) * 1000.0;

  MonteCarloSummary s = aggregate(cfg, outcomes, epoch_violated, wallclock_ms);
  if (per_trial) *per_trial = std::move(outcomes);
  return s;
}

}  // namespace

MonteCarloSummary run_monte_carlo(const ExperimentConfig& cfg,
                                  std::vector<TrialOutcome>* per_trial) {
  return run_impl(cfg, per_trial, true);
}

MonteCarloSummary run_monte_carlo_serial(const ExperimentConfig& cfg,
                                         std::vector<TrialOutcome>* per_trial) {
  return run_impl(cfg, per_trial, false);
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::horizon: return "t";
    case SweepAxis::delta: return "delta";
    case SweepAxis::beta: return "beta";
    case SweepAxis::b: return "b";
  }
  return "?";
}

std::optional<SweepAxis> parse_sweep_axis(const std::string& name) {
  if (name == "t" || name == "horizon") return SweepAxis::horizon;
  if (name == "delta") return SweepAxis::delta;
  if (name == "beta") return SweepAxis::beta;
  if (name == "b") return SweepAxis::b;
  return std::nullopt;
}

namespace {

/// Rescale transitions onto a new horizon, keeping relative positions.
MeanProfile rescale_profile(const MeanProfile& base, std::uint64_t new_t) {
  MeanProfile p;
  p.horizon = new_t;
  p.means = base.means;
  p.transitions.resize(base.transitions.size());
  const double span_old = double(base.horizon - 1);
  const double span_new = double(new_t - 1);
  for (std::size_t i = 0; i < base.transitions.size(); ++i) {
    double frac = double(base.transitions[i] - 1) / span_old;
    p.transitions[i] = 1 + std::uint64_t(std::llround(frac * span_new));
  }
  p.transitions.front() = 1;
  p.transitions.back() = new_t;
  return p;
}

}  // namespace

std::vector<SweepPoint> sweep(const ExperimentConfig& base, SweepAxis axis,
                              std::span<const double> values) {
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (double v : values) {
    SweepPoint pt;
    pt.value = v;
    pt.config = base;
    switch (axis) {
      case SweepAxis::horizon: {
        if (!(v >= 2.0) || v != std::floor(v)) {
          pt.skipped = true;
          pt.skip_reason = "horizon must be an integer >= 2";
          points.push_back(std::move(pt));
          continue;
        }
        pt.config.profile = rescale_profile(base.profile, std::uint64_t(v));
        break;
      }
      case SweepAxis::delta: pt.config.params.delta = v; break;
      case SweepAxis::beta: pt.config.params.beta = v; break;
      case SweepAxis::b: pt.config.params.b = v; break;
    }
    ValidationResult pr = validate_params(pt.config.params);
    ValidationResult fr = validate_profile(pt.config.profile, pt.config.params);
    if (!pr.ok() || !fr.ok()) {
      pt.skipped = true;
      pt.skip_reason = pr.summary() + fr.summary();
      points.push_back(std::move(pt));
      continue;
    }
    pt.summary = run_monte_carlo(pt.config);
    points.push_back(std::move(pt));
  }
  return points;
}

}  // namespace tracker
