#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tracker/model.hpp"
#include "tracker/sequence.hpp"

// Two estimators of the current epoch mean, evaluated along the sampled
// rounds of a path.
//
// The recursive estimator forgets geometrically:
//   Y_0 = 0,  Y_l = alpha_l * Y_{l-1} + (1 - alpha_l) * X_{T(l)},
//   alpha_l = 1 - l^-delta  (so alpha_1 = 0 and Y_1 is the first reward).
// Unrolling the recursion writes Y_l as a convex combination of the rewards
// seen so far with weights theta[j] = (1 - alpha_j) * prod_{i=j+1..l} alpha_i.
//
// The oracle estimator knows the transition rounds: inside each epoch it
// averages the rewards sampled during the first t^gamma rounds of the epoch
// (the warmup window) and reports that average for the rest of the epoch.
// Entries still inside a warmup window report 0.

namespace tracker {

enum class EstimatorKind { recursive, oracle };

const char* estimator_kind_name(EstimatorKind kind);

/// alpha_l = 1 - l^-delta. Requires l >= 1 and delta in (0, 1).
double alpha(std::uint64_t l, double delta);

/// One fold of the recursion. Requires the reward in [0, 1].
double recursive_update(double prev, std::uint64_t l, double reward, double delta);

struct TraceEntry {
  std::uint64_t l = 0;      // 1-based sample index
  std::uint64_t round = 0;  // T(l)
  double estimate = 0;
  std::uint32_t epoch = 0;  // 0-based epoch of the round
  bool in_warmup = false;   // round falls within t^gamma of its epoch start
};

struct TrackingTrace {
  EstimatorKind kind = EstimatorKind::recursive;
  double delta = 0;  // recursive only
  double gamma = 0;  // warmup scale used for annotation
  std::vector<TraceEntry> entries;
  // Epochs (0-based) whose warmup window contained no sampled round; their
  // post-warmup oracle estimate is reported as 0 and flagged here.
  std::vector<std::uint32_t> empty_window_epochs;
};

TrackingTrace run_recursive(const SamplePath& path, double delta,
                            const MeanProfile& profile, double gamma);

TrackingTrace run_oracle(const SamplePath& path, const MeanProfile& profile, double gamma);

/// Weights theta[j-1] for j = 1..l such that Y_l = sum theta[j-1] * X_{T(j)}.
/// Computed in one backward pass with a running suffix product.
struct WeightVector {
  std::uint64_t l = 0;
  double delta = 0;
  std::vector<double> weights;
};

WeightVector expand_weights(std::uint64_t l, double delta);

/// Sum of squared weights at step l, evaluated from the expansion.
double weight_square_sum(std::uint64_t l, double delta);

/// Sums of squared weights for every step 1..l_max in one linear pass, using
/// the self-similarity of consecutive weight vectors: scaling step l-1's
/// weights by alpha_l and appending 1 - alpha_l gives step l's weights, so
///   S_l = alpha_l^2 * S_{l-1} + (1 - alpha_l)^2,  S_1 = 1.
/// Entry [l-1] holds S_l.
std::vector<double> weight_square_prefix(std::uint64_t l_max, double delta);

/// Product of alpha_j for j in (u, l], exact in log space for long spans.
double alpha_product(std::uint64_t u, std::uint64_t l, double delta);

/// Deterministic trajectory the recursive estimator would follow if every
/// sampled reward equaled its epoch mean: nu_l = sum_j theta[j] * m(T(j)).
/// Quadratic in the number of samples; intended for small inputs and tests.
std::vector<double> expected_trace(std::span<const std::uint64_t> times,
                                   const MeanProfile& profile, double delta);

}  // namespace tracker
