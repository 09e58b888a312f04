#pragma once

#include <cstdint>
#include <random>

namespace mkldd {

/// Seedable generator with platform-independent output: the engine is
/// std::mt19937_64 (fully specified by the standard) and every derived
/// draw is computed here rather than through <random> distributions, whose
/// algorithms vary between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi); exactly lo when lo == hi.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n);

  /// Poisson draw; large means are split into chunks of at most 16.
  std::uint64_t poisson(double mean);

  /// Independent stream seed for sub-task `index` of a run seeded `master`
  /// (splitmix64 finalizer).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mkldd
