// Command line front end.
//
//   tracker simulate  one path, estimator trace, good-event report
//   tracker mc        Monte Carlo over trials, optional parameter sweep
//   tracker bounds    concentration bound tables
//   tracker bandit    bandit run with latch-delay report
//
// Every command writes CSV artifacts plus a manifest.json with digests into
// --out. Exit codes: 0 on success, 2 for invalid configuration or flags,
// 3 for IO or internal failures.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tracker/bandit.hpp"
#include "tracker/bounds.hpp"
#include "tracker/config.hpp"
#include "tracker/csv.hpp"
#include "tracker/harness.hpp"
#include "tracker/manifest.hpp"

namespace fs = std::filesystem;
using namespace tracker;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommandArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t trials = 0;
  bool trials_set = false;
  std::string axis;
  std::vector<double> values;
  bool per_trial = false;
  bool debug_path = false;
};

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

/// Exit 2 when the experiment configuration breaks any rule, with one line
/// per broken rule on stderr.
void require_valid(const ExperimentConfig& cfg) {
  ValidationResult pr = validate_params(cfg.params);
  ValidationResult fr = validate_profile(cfg.profile, cfg.params);
  if (pr.ok() && fr.ok()) return;
  std::fprintf(stderr, "configuration rejected:\n%s%s", pr.summary().c_str(),
               fr.summary().c_str());
  std::exit(kExitConfig);
}

RunConfig load_and_override(const CommandArgs& a) {
  RunConfig rc = load_config(a.config_path);
  if (a.seed_set) {
    rc.experiment.seed = a.seed;
    if (rc.bandit) rc.bandit->seed = a.seed;
    rc.resolved["seed"] = a.seed;
  }
  if (a.trials_set) {
    rc.experiment.trials = a.trials;
    rc.resolved["trials"] = a.trials;
  }
  return rc;
}

RunManifest start_manifest(const std::string& command, const RunConfig& rc) {
  RunManifest m;
  m.command = command;
  m.resolved_config = rc.resolved;
  m.master_seed = rc.experiment.seed;
  m.started_at = utc_timestamp();
  return m;
}

void write_trace_csv(const fs::path& file, const TrackingTrace& trace,
                     const MeanProfile& profile) {
  CsvWriter csv(file.string());
  csv.row({"l", "round", "estimate", "epoch", "mean", "abs_dev", "rel_dev", "in_warmup"});
  for (const TraceEntry& e : trace.entries) {
    double m = profile.means[e.epoch];
    double abs_dev = std::abs(e.estimate - m);
    csv.row({fmt_u64(e.l), fmt_u64(e.round), csv_double(e.estimate),
             fmt_u64(e.epoch + 1), csv_double(m), csv_double(abs_dev),
             csv_double(abs_dev / m), e.in_warmup ? "1" : "0"});
  }
}

void write_good_event_json(const fs::path& file, const GoodEventReport& rep,
                           const TrackingTrace& trace) {
  nlohmann::json j;
  j["good"] = rep.good();
  j["sample_budget_ok"] = rep.sample_budget_ok;
  j["tracking_ok"] = rep.tracking_ok;
  j["samples_observed"] = rep.samples_observed;
  j["budget_threshold"] = rep.budget_threshold;
  j["tolerance"] = rep.tolerance;
  j["epoch_max_rel_dev"] = rep.epoch_max_rel_dev;
  if (rep.has_violation)
    j["first_violation"] = {{"epoch", rep.first_violation_epoch + 1},
                            {"l", rep.first_violation_l}};
  else
    j["first_violation"] = nullptr;
  std::vector<std::uint32_t> empty1;
  for (std::uint32_t k : trace.empty_window_epochs) empty1.push_back(k + 1);
  j["empty_window_epochs"] = empty1;
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

int cmd_simulate(const CommandArgs& a) {
  RunConfig rc = load_and_override(a);
  require_valid(rc.experiment);
  fs::create_directories(a.out_dir);
  RunManifest man = start_manifest("simulate", rc);

  const ExperimentConfig& cfg = rc.experiment;
  SamplingSchedule schedule{cfg.params.beta};
  SamplePath path = generate_path(cfg.profile, schedule, cfg.family, cfg.seed);
  TrackingTrace trace =
      cfg.estimator == EstimatorKind::recursive
          ? run_recursive(path, cfg.params.delta, cfg.profile, cfg.params.gamma)
          : run_oracle(path, cfg.profile, cfg.params.gamma);
  GoodEventReport rep = check_good_event(trace, cfg.profile, cfg.params);

  fs::path trace_file = fs::path(a.out_dir) / "trace.csv";
  write_trace_csv(trace_file, trace, cfg.profile);
  man.add_output(trace_file);

  fs::path report_file = fs::path(a.out_dir) / "good_event.json";
  write_good_event_json(report_file, rep, trace);
  man.add_output(report_file);

  if (a.debug_path) {
    if (!path.materialized()) {
      std::fprintf(stderr, "--debug-path needs a horizon small enough to materialize\n");
      return kExitConfig;
    }
    fs::path path_file = fs::path(a.out_dir) / "path.csv";
    CsvWriter csv(path_file.string());
    csv.row({"round", "explored", "reward"});
    for (std::uint64_t j = 1; j <= path.horizon; ++j)
      csv.row({fmt_u64(j), path.explored[j - 1] ? "1" : "0", csv_double(path.rewards[j - 1])});
    man.add_output(path_file);
  }

  man.finished_at = utc_timestamp();
  write_manifest(man, a.out_dir);
  std::printf("simulate: %llu samples, good=%s\n",
              static_cast<unsigned long long>(rep.samples_observed),
              rep.good() ? "yes" : "no");
  return kExitOk;
}

std::vector<std::string> summary_header() {
  return {"axis", "value", "skipped", "skip_reason", "t", "epochs", "family", "estimator",
          "gamma0", "gamma", "beta", "delta", "b", "mu0", "trials", "seed", "good",
          "p_hat", "ci_lo", "ci_hi", "fail_budget", "fail_tracking", "fail_empty_window",
          "wallclock_ms"};
}

std::vector<std::string> summary_row(const std::string& axis, double value, bool skipped,
                                     const std::string& reason, const ExperimentConfig& cfg,
                                     const MonteCarloSummary& s) {
  std::string skip_flat = reason;
  for (char& c : skip_flat)
    if (c == '\n') c = ';';
  return {axis, csv_double(value), skipped ? "1" : "0", csv_field(skip_flat),
          fmt_u64(cfg.profile.horizon), fmt_u64(cfg.profile.epoch_count()),
          reward_kind_name(cfg.family.kind), estimator_kind_name(cfg.estimator),
          csv_double(cfg.params.gamma0), csv_double(cfg.params.gamma),
          csv_double(cfg.params.beta), csv_double(cfg.params.delta),
          csv_double(cfg.params.b), csv_double(cfg.params.mu0), fmt_u64(cfg.trials),
          fmt_u64(cfg.seed), skipped ? "" : fmt_u64(s.good),
          skipped ? "" : csv_double(s.p_hat), skipped ? "" : csv_double(s.ci_lo),
          skipped ? "" : csv_double(s.ci_hi), skipped ? "" : fmt_u64(s.fail_budget),
          skipped ? "" : fmt_u64(s.fail_tracking), skipped ? "" : fmt_u64(s.fail_empty_window),
          skipped ? "" : csv_double(s.wallclock_ms)};
}

void write_per_trial_csv(const fs::path& file, const std::vector<TrialOutcome>& rows) {
  CsvWriter csv(file.string());
  csv.row({"trial", "seed", "good", "budget_ok", "tracking_ok", "samples", "empty_windows",
           "max_rel_dev", "first_violation_epoch", "first_violation_l"});
  for (const TrialOutcome& o : rows)
    csv.row({fmt_u64(o.trial), fmt_u64(o.seed), o.good ? "1" : "0", o.budget_ok ? "1" : "0",
             o.tracking_ok ? "1" : "0", fmt_u64(o.samples), fmt_u64(o.empty_windows),
             csv_double(o.max_rel_dev),
             o.has_violation ? fmt_u64(o.first_violation_epoch + 1) : "",
             o.has_violation ? fmt_u64(o.first_violation_l) : ""});
}

int cmd_mc(const CommandArgs& a) {
  RunConfig rc = load_and_override(a);
  fs::create_directories(a.out_dir);
  RunManifest man = start_manifest("mc", rc);
  fs::path summary_file = fs::path(a.out_dir) / "summary.csv";

  if (!a.axis.empty()) {
    if (a.per_trial) {
      std::fprintf(stderr, "--per-trial cannot be combined with --axis\n");
      return kExitConfig;
    }
    auto axis = parse_sweep_axis(a.axis);
    if (!axis) {
      std::fprintf(stderr, "unknown sweep axis \"%s\" (use t, delta, beta or b)\n",
                   a.axis.c_str());
      return kExitConfig;
    }
    if (a.values.empty()) {
      std::fprintf(stderr, "--axis needs --values\n");
      return kExitConfig;
    }
    std::vector<SweepPoint> points = sweep(rc.experiment, *axis, a.values);
    CsvWriter csv(summary_file.string());
    csv.row(summary_header());
    for (const SweepPoint& pt : points)
      csv.row(summary_row(sweep_axis_name(*axis), pt.value, pt.skipped, pt.skip_reason,
                          pt.config, pt.summary));
  } else {
    require_valid(rc.experiment);
    std::vector<TrialOutcome> per_trial;
    MonteCarloSummary s =
        run_monte_carlo(rc.experiment, a.per_trial ? &per_trial : nullptr);
    CsvWriter csv(summary_file.string());
    csv.row(summary_header());
    csv.row(summary_row("", 0.0, false, "", rc.experiment, s));
    if (a.per_trial) {
      fs::path per_file = fs::path(a.out_dir) / "per_trial.csv";
      write_per_trial_csv(per_file, per_trial);
      man.add_output(per_file);
    }
    std::printf("mc: %llu/%llu good, p_hat=%.4f ci=[%.4f, %.4f]\n",
                static_cast<unsigned long long>(s.good),
                static_cast<unsigned long long>(s.trials), s.p_hat, s.ci_lo, s.ci_hi);
  }

  man.add_output(summary_file);
  man.finished_at = utc_timestamp();
  write_manifest(man, a.out_dir);
  return kExitOk;
}

struct BoundsArgs {
  std::string out_dir;
  std::vector<double> eps;
  std::vector<double> mean_sum;
  std::vector<double> ev;
  std::vector<double> lambda_sq;
  std::vector<double> success_t;
  double beta = 0.1, gamma = 0.5, b = 0.05;
  double c2 = 1.0, c3 = 1.0, c41 = 1.0;
  std::string exponent = "gap";
};

int cmd_bounds(const BoundsArgs& a) {
  if (a.ev.size() != a.lambda_sq.size()) {
    std::fprintf(stderr, "--ev and --lambda-sq need the same number of values\n");
    return kExitConfig;
  }
  fs::create_directories(a.out_dir);
  RunManifest man;
  man.command = "bounds";
  man.resolved_config = nlohmann::json::object();
  man.started_at = utc_timestamp();

  fs::path bounds_file = fs::path(a.out_dir) / "bounds.csv";
  {
    CsvWriter csv(bounds_file.string());
    csv.row({"kind", "eps", "mean_sum", "ev", "lambda_sq", "bound", "vacuous", "error"});
    for (double eps : a.eps) {
      for (double ms : a.mean_sum) {
        try {
          BoundReport r = chernoff_bound(eps, ms);
          csv.row({"chernoff", csv_double(eps), csv_double(ms), "", "",
                   csv_double(r.bound), r.vacuous ? "1" : "0", ""});
        } catch (const std::exception& e) {
          csv.row({"chernoff", csv_double(eps), csv_double(ms), "", "", "", "",
                   csv_field(e.what())});
        }
      }
      for (std::size_t i = 0; i < a.ev.size(); ++i) {
        try {
          BoundReport r = azuma_bound(eps, a.ev[i], a.lambda_sq[i]);
          csv.row({"azuma", csv_double(eps), "", csv_double(a.ev[i]),
                   csv_double(a.lambda_sq[i]), csv_double(r.bound), r.vacuous ? "1" : "0",
                   ""});
        } catch (const std::exception& e) {
          csv.row({"azuma", csv_double(eps), "", csv_double(a.ev[i]),
                   csv_double(a.lambda_sq[i]), "", "", csv_field(e.what())});
        }
      }
    }
  }
  man.add_output(bounds_file);

  if (!a.success_t.empty()) {
    TailExponent e;
    if (a.exponent == "gap") e = TailExponent::gap_minus_2b;
    else if (a.exponent == "scaled") e = TailExponent::scaled_gap_minus_2b;
    else {
      std::fprintf(stderr, "unknown --exponent \"%s\" (use gap or scaled)\n",
                   a.exponent.c_str());
      return kExitConfig;
    }
    fs::path success_file = fs::path(a.out_dir) / "success.csv";
    CsvWriter csv(success_file.string());
    csv.row({"t", "beta", "gamma", "b", "c2", "c3", "c41", "exponent", "raw", "clamped"});
    for (double t : a.success_t) {
      SuccessLowerBound s =
          known_transitions_success(t, a.beta, a.gamma, a.b, {a.c2, a.c3, a.c41}, e);
      csv.row({csv_double(t), csv_double(a.beta), csv_double(a.gamma), csv_double(a.b),
               csv_double(a.c2), csv_double(a.c3), csv_double(a.c41), a.exponent,
               csv_double(s.raw), csv_double(s.clamped)});
    }
    man.add_output(success_file);
  }

  man.finished_at = utc_timestamp();
  write_manifest(man, a.out_dir);
  return kExitOk;
}

int cmd_bandit(const CommandArgs& a) {
  RunConfig rc = load_and_override(a);
  if (!rc.bandit) {
    std::fprintf(stderr, "config has no \"bandit\" section\n");
    return kExitConfig;
  }
  fs::create_directories(a.out_dir);
  RunManifest man = start_manifest("bandit", rc);

  BanditTrace trace = run_bandit(*rc.bandit);
  const std::uint32_t K = trace.arm_count;

  fs::path bandit_file = fs::path(a.out_dir) / "bandit.csv";
  {
    CsvWriter csv(bandit_file.string());
    std::vector<std::string> header = {"round", "chosen", "explored", "reward",
                                       "best", "regret", "cum_regret"};
    for (std::uint32_t k = 0; k < K; ++k) header.push_back("est_" + std::to_string(k));
    csv.row(header);
    for (std::uint64_t j = 1; j <= trace.horizon; ++j) {
      std::size_t i = j - 1;
      std::vector<std::string> row = {fmt_u64(j), std::to_string(trace.chosen[i]),
                                      trace.explored[i] ? "1" : "0",
                                      csv_double(trace.reward[i]),
                                      std::to_string(trace.best[i]),
                                      csv_double(trace.regret[i]),
                                      csv_double(trace.cum_regret[i])};
      for (std::uint32_t k = 0; k < K; ++k) row.push_back(csv_double(trace.estimate(j, k)));
      csv.row(row);
    }
  }
  man.add_output(bandit_file);

  fs::path latch_file = fs::path(a.out_dir) / "latch.csv";
  {
    double budget = std::pow(double(trace.horizon), rc.experiment.params.gamma);
    CsvWriter csv(latch_file.string());
    csv.row({"transition_round", "new_best", "best_changed", "latched", "delay",
             "relatch_budget", "within_budget"});
    for (const TransitionLatch& tl : latch_delays(trace, rc.bandit->arms))
      csv.row({fmt_u64(tl.transition_round), std::to_string(tl.new_best),
               tl.best_changed ? "1" : "0", tl.latched ? "1" : "0", fmt_u64(tl.delay),
               csv_double(budget),
               (tl.latched && double(tl.delay) <= budget) ? "1" : "0"});
  }
  man.add_output(latch_file);

  man.finished_at = utc_timestamp();
  write_manifest(man, a.out_dir);
  std::printf("bandit: %u arms over %llu rounds, final cum_regret=%.3f\n", K,
              static_cast<unsigned long long>(trace.horizon),
              trace.cum_regret.empty() ? 0.0 : trace.cum_regret.back());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean tracking for piecewise stationary reward streams"};
  app.require_subcommand(1);

  CommandArgs sim_args, mc_args, bandit_args;
  BoundsArgs bounds_args;

  CLI::App* sim = app.add_subcommand("simulate", "one path and estimator trace");
  sim->add_option("--config", sim_args.config_path, "JSON run configuration")->required();
  sim->add_option("--out", sim_args.out_dir, "output directory")->required();
  sim->add_option("--seed", sim_args.seed, "override the config seed")
      ->each([&](const std::string&) { sim_args.seed_set = true; });
  sim->add_flag("--debug-path", sim_args.debug_path, "also dump the full path as CSV");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo runs, optionally along one axis");
  mc->add_option("--config", mc_args.config_path, "JSON run configuration")->required();
  mc->add_option("--out", mc_args.out_dir, "output directory")->required();
  mc->add_option("--trials", mc_args.trials, "override the trial count")
      ->each([&](const std::string&) { mc_args.trials_set = true; });
  mc->add_option("--seed", mc_args.seed, "override the config seed")
      ->each([&](const std::string&) { mc_args.seed_set = true; });
  mc->add_option("--axis", mc_args.axis, "sweep axis: t, delta, beta or b");
  mc->add_option("--values", mc_args.values, "sweep values")->delimiter(',');
  mc->add_flag("--per-trial", mc_args.per_trial, "also write one row per trial");

  CLI::App* bounds = app.add_subcommand("bounds", "concentration bound tables");
  bounds->add_option("--out", bounds_args.out_dir, "output directory")->required();
  bounds->add_option("--eps", bounds_args.eps, "deviation fractions")->delimiter(',');
  bounds->add_option("--mean-sum", bounds_args.mean_sum, "expected sums, unweighted rows")
      ->delimiter(',');
  bounds->add_option("--ev", bounds_args.ev, "expected weighted sums")->delimiter(',');
  bounds->add_option("--lambda-sq", bounds_args.lambda_sq,
                     "summed squared weights, paired with --ev")
      ->delimiter(',');
  bounds->add_option("--success-t", bounds_args.success_t,
                     "horizons for the run-success lower bound")
      ->delimiter(',');
  bounds->add_option("--beta", bounds_args.beta, "sampling decay for --success-t");
  bounds->add_option("--gamma", bounds_args.gamma, "warmup scale for --success-t");
  bounds->add_option("--b", bounds_args.b, "tolerance exponent for --success-t");
  bounds->add_option("--c2", bounds_args.c2, "budget term constant");
  bounds->add_option("--c3", bounds_args.c3, "count term constant");
  bounds->add_option("--c41", bounds_args.c41, "tracking term constant");
  bounds->add_option("--exponent", bounds_args.exponent,
                     "tail exponent form: gap or scaled");

  CLI::App* bandit = app.add_subcommand("bandit", "bandit run with latch report");
  bandit->add_option("--config", bandit_args.config_path, "JSON run configuration")
      ->required();
  bandit->add_option("--out", bandit_args.out_dir, "output directory")->required();
  bandit->add_option("--seed", bandit_args.seed, "override the config seed")
      ->each([&](const std::string&) { bandit_args.seed_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (mc->parsed()) return cmd_mc(mc_args);
    if (bounds->parsed()) return cmd_bounds(bounds_args);
    if (bandit->parsed()) return cmd_bandit(bandit_args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
