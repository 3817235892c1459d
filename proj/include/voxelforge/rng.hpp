#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace voxelforge {

// Seeded random source. The engine is std::mt19937_64; the derived
// distributions are written out here so that a seed reproduces the same
// stream with any standard library (std:: distributions are
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, one variate per call.
  double normal(double mean, double stddev);

  // Independent child stream, deterministic in the parent's state.
  Rng split() { return Rng(engine_()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace voxelforge
