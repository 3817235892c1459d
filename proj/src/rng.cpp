#include "voxelforge/rng.hpp"

#include <cmath>
#include <numbers>

namespace voxelforge {

std::size_t Rng::index(std::size_t n) {
  const auto range = static_cast<std::uint64_t>(n);
  // Reject the low values that would bias the modulo.
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t draw = engine_();
    if (draw >= threshold) return static_cast<std::size_t>(draw % range);
  }
}

double Rng::normal(double mean, double stddev) {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace voxelforge
