#pragma once

#include <cstdint>

namespace scorelab {

/// Counter-based pseudo-random generator (SplitMix64 stream over a running
/// counter). Output depends only on (key, counter), so streams can be split
/// hierarchically and replayed independently of thread scheduling; identical
/// seeds give bit-identical sequences.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x5c72fd4a9d3b1e4dULL)) {}

  /// Derive an independent child stream; the parent is unaffected.
  [[nodiscard]] CounterRng split(std::uint64_t lane) const {
    CounterRng child(*this);
    child.key_ = mix(key_ ^ (kGamma * (lane + 1)));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return mix(key_ + kGamma * ++counter_); }

  /// Uniform variate in the open interval (0,1); never returns 0 or 1.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal variate via the inverse CDF.
  double next_normal();

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Quantile of the standard normal distribution (Wichura's PPND16 algorithm,
/// accurate to about 1e-15 over (0,1)).
double inverse_normal_cdf(double p);

/// Standard normal CDF.
double normal_cdf(double z);

inline double CounterRng::next_normal() { return inverse_normal_cdf(next_uniform()); }

}  // namespace scorelab
