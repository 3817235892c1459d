#include "voxelforge/development.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace voxelforge::development {

std::string_view to_string(DevelopmentRule rule) {
  switch (rule) {
    case DevelopmentRule::None:
      return "none";
    case DevelopmentRule::Stress:
      return "stress";
    case DevelopmentRule::Pressure:
      return "pressure";
  }
  return "none";
}

DevelopmentRule parse_rule(std::string_view name) {
  if (name == "none") return DevelopmentRule::None;
  if (name == "stress") return DevelopmentRule::Stress;
  if (name == "pressure") return DevelopmentRule::Pressure;
  throw std::invalid_argument("unknown development rule '" + std::string(name) +
                              "' (expected none, stress or pressure)");
}

double xi(double k, double k_min, double k_max) {
  if (!(k >= k_min && k <= k_max)) {
    throw std::domain_error("stiffness " + std::to_string(k) + " outside [k_min, k_max]");
  }
  return (k_max - k) / (k_max - k_min);
}

double voxel_length(double t, double phase, double k, const LatticeConfig& config) {
  const double wave =
      std::sin(2.0 * std::numbers::pi * config.actuation_frequency * t + phase);
  return 1.0 + config.actuation_amplitude * wave * xi(k, config.k_min, config.k_max);
}

}  // namespace voxelforge::development
