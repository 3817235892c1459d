#pragma once

#include <string>
#include <string_view>

#include "voxelforge/config.hpp"

namespace voxelforge::development {

// Which interoceptive signal, if any, drives stiffness change.
enum class DevelopmentRule { None, Stress, Pressure };

std::string_view to_string(DevelopmentRule rule);
// Accepts "none", "stress", "pressure"; throws std::invalid_argument otherwise.
DevelopmentRule parse_rule(std::string_view name);

// Actuation damping: 1 for the softest material, 0 for the stiffest.
// Throws std::domain_error when k lies outside [k_min, k_max].
double xi(double k, double k_min, double k_max);

// Rest-length multiplier of a voxel at actuation time t:
//   1 + A sin(2 pi f t + phase) xi(k)
double voxel_length(double t, double phase, double k, const LatticeConfig& config);

// One forward-difference development update, clamped to [k_min, k_max].
// signal_delta is the change of the filtered stress (Stress rule) or
// pressure (Pressure rule) since the previous update.
inline double develop(double k, double alpha, double signal_delta, DevelopmentRule rule,
                      double k_min, double k_max) {
  if (rule == DevelopmentRule::None) return k;
  const double next = k + alpha * signal_delta;
  if (next < k_min) return k_min;
  if (next > k_max) return k_max;
  return next;
}

}  // namespace voxelforge::development
