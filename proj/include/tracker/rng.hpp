#pragma once

#include <cstdint>
#include <cmath>

// Counter-based pseudo-random numbers.
//
// Every draw is a pure function of (seed, stream, counter), so any worker can
// evaluate any index without shared state and parallel runs reproduce serial
// runs bit for bit. The generator is SplitMix64 driven in counter mode: the
// state at counter i is base + i * GOLDEN and the output is the SplitMix64
// finalizer applied to that state.

namespace tracker {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Stream tags. Arbitrary distinct constants; mixed into the stream base so
// that draws for rewards, exploration coins, arm picks and bound checks are
// mutually independent even under the same seed.
inline constexpr std::uint64_t kStreamRewards = 0x52455741ull;
inline constexpr std::uint64_t kStreamExploration = 0x4558504Cull;
inline constexpr std::uint64_t kStreamArmChoice = 0x41524D43ull;
inline constexpr std::uint64_t kStreamTailCheck = 0x5441494Cull;

/// Derive the reward stream tag for one bandit arm.
constexpr std::uint64_t arm_reward_stream(std::uint32_t arm) {
  return mix64(kStreamRewards + 0x9E37ull * (std::uint64_t(arm) + 1));
}

/// Stateless uniform stream addressed by counter.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix64(seed ^ mix64(stream))) {}

  std::uint64_t bits_at(std::uint64_t i) const { return mix64(base_ + i * kGolden); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t i) const {
    return double(bits_at(i) >> 11) * 0x1.0p-53;
  }

  bool bernoulli_at(std::uint64_t i, double p) const { return uniform_at(i) < p; }

 private:
  std::uint64_t base_;
};

/// Sequential SplitMix64, used where a draw needs a variable number of
/// uniforms (rejection sampling). Seed it from one counter cell so each
/// counter index owns an independent sub-stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return mix64(state_ += kGolden); }

  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1), safe as a log argument.
  double uniform_pos() {
    double u = uniform();
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double normal() {
    // Box-Muller, cosine branch only. One normal per two uniforms keeps the
    // draw count deterministic.
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Marsaglia-Tsang gamma draw, unit scale. Valid for shape > 0.
  double gamma(double shape) {
    if (shape < 1.0) {
      // Boost the shape above 1 and correct with a power of a uniform.
      double g = gamma(shape + 1.0);
      return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Beta draw as a ratio of gammas.
  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::uint64_t state_;
};

}  // namespace tracker
