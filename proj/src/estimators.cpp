#include "tracker/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tracker {

const char* estimator_kind_name(EstimatorKind kind) {
  return kind == EstimatorKind::recursive ? "recursive" : "oracle";
}

double alpha(std::uint64_t l, double delta) {
  if (l < 1) throw std::domain_error("alpha: step index must be >= 1");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::domain_error("alpha: delta must lie in (0, 1)");
  return 1.0 - std::pow(double(l), -delta);
}

double recursive_update(double prev, std::uint64_t l, double reward, double delta) {
  if (!(reward >= 0.0) || !(reward <= 1.0))
    throw std::invalid_argument("recursive_update: reward outside [0, 1]");
  double a = alpha(l, delta);
  return a * prev + (1.0 - a) * reward;
}

namespace {

/// Start of the post-warmup region of epoch k: epoch start plus t^gamma.
double warmup_end(const MeanProfile& profile, std::size_t k, double gamma) {
  return double(profile.transitions[k]) + std::pow(double(profile.horizon), gamma);
}

void annotate(TraceEntry& e, const MeanProfile& profile, double gamma) {
  e.epoch = std::uint32_t(profile.epoch_of(e.round));
  e.in_warmup = double(e.round) < warmup_end(profile, e.epoch, gamma);
}

}  // namespace

TrackingTrace run_recursive(const SamplePath& path, double delta,
                            const MeanProfile& profile, double gamma) {
  TrackingTrace trace;
  trace.kind = EstimatorKind::recursive;
  trace.delta = delta;
  trace.gamma = gamma;
  trace.entries.resize(path.times.size());
  double y = 0.0;
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    std::uint64_t l = i + 1;
    y = recursive_update(y, l, path.sampled_rewards[i], delta);
    TraceEntry& e = trace.entries[i];
    e.l = l;
    e.round = path.times[i];
    e.estimate = y;
    annotate(e, profile, gamma);
  }
  return trace;
}

TrackingTrace run_oracle(const SamplePath& path, const MeanProfile& profile, double gamma) {
  TrackingTrace trace;
  trace.kind = EstimatorKind::oracle;
  trace.delta = std::numeric_limits<double>::quiet_NaN();
  trace.gamma = gamma;

  // Window average per epoch over sampled rounds in [s_k, s_k + t^gamma).
  std::size_t epochs = profile.epoch_count();
  std::vector<double> window_avg(epochs, 0.0);
  std::vector<std::uint64_t> window_n(epochs, 0);
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    std::uint64_t r = path.times[i];
    std::size_t k = profile.epoch_of(r);
    if (r >= profile.transitions[k] && double(r) < warmup_end(profile, k, gamma)) {
      window_avg[k] += path.sampled_rewards[i];
      window_n[k] += 1;
    }
  }
  for (std::size_t k = 0; k < epochs; ++k) {
    if (window_n[k] > 0)
      window_avg[k] /= double(window_n[k]);
    else
      trace.empty_window_epochs.push_back(std::uint32_t(k));
  }

  trace.entries.resize(path.times.size());
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    TraceEntry& e = trace.entries[i];
    e.l = i + 1;
    e.round = path.times[i];
    annotate(e, profile, gamma);
    e.estimate = e.in_warmup ? 0.0 : window_avg[e.epoch];
  }
  return trace;
}

WeightVector expand_weights(std::uint64_t l, double delta) {
  if (l < 1) throw std::domain_error("expand_weights: step index must be >= 1");
  WeightVector wv;
  wv.l = l;
  wv.delta = delta;
  wv.weights.resize(l);
  double suffix = 1.0;  // running product of alpha_i for i = j+1 .. l
  for (std::uint64_t j = l; j >= 1; --j) {
    double a = alpha(j, delta);
    wv.weights[j - 1] = (1.0 - a) * suffix;
    suffix *= a;
  }
  return wv;
}

double weight_square_sum(std::uint64_t l, double delta) {
  WeightVector wv = expand_weights(l, delta);
  double s = 0.0;
  for (double w : wv.weights) s += w * w;
  return s;
}

std::vector<double> weight_square_prefix(std::uint64_t l_max, double delta) {
  if (l_max < 1) throw std::domain_error("weight_square_prefix: need l_max >= 1");
  std::vector<double> s(l_max);
  s[0] = 1.0;
  for (std::uint64_t l = 2; l <= l_max; ++l) {
    double a = alpha(l, delta);
    double one_minus = 1.0 - a;
    s[l - 1] = a * a * s[l - 2] + one_minus * one_minus;
  }
  return s;
}

double alpha_product(std::uint64_t u, std::uint64_t l, double delta) {
  if (u > l) throw std::invalid_argument("alpha_product: need u <= l");
  if (u == l) return 1.0;
  if (l - u > 1000) {
    // Long spans underflow a direct product; accumulate logs instead.
    double acc = 0.0;
    for (std::uint64_t j = u + 1; j <= l; ++j) {
      double a = alpha(j, delta);
      if (a == 0.0) return 0.0;
      acc += std::log(a);
    }
    return std::exp(acc);
  }
  double prod = 1.0;
  for (std::uint64_t j = u + 1; j <= l; ++j) prod *= alpha(j, delta);
  return prod;
}

std::vector<double> expected_trace(std::span<const std::uint64_t> times,
                                   const MeanProfile& profile, double delta) {
  std::vector<double> nu(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    WeightVector wv = expand_weights(i + 1, delta);
    double v = 0.0;
    for (std::size_t j = 0; j <= i; ++j)
      v += wv.weights[j] * profile.mean_at(times[j]);
    nu[i] = v;
  }
  return nu;
}

}  // namespace tracker
