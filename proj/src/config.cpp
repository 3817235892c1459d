#include "voxelforge/config.hpp"

#include <cmath>

namespace voxelforge {

namespace {

struct Problems {
  std::vector<std::string> keys;
  std::string message;

  void add(std::vector<std::string> offending, const std::string& what) {
    for (auto& k : offending) keys.push_back(std::move(k));
    if (!message.empty()) message += "; ";
    message += what;
  }
};

}  // namespace

void LatticeConfig::validate() const {
  Problems p;
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) p.add({key}, std::string(key) + " must be > 0");
  };
  auto non_negative = [&](const char* key, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) p.add({key}, std::string(key) + " must be >= 0");
  };

  positive("voxel_edge_length", voxel_edge_length);
  positive("density", density);
  non_negative("gravity", gravity);
  positive("ground_stiffness", ground_stiffness);
  non_negative("friction_coefficient", friction_coefficient);
  non_negative("damping_ratio", damping_ratio);
  if (!(dt_safety_factor > 0.0 && dt_safety_factor < 1.0)) {
    p.add({"dt_safety_factor"}, "dt_safety_factor must lie in (0, 1)");
  }
  non_negative("settle_duration", settle_duration);
  if (sim_cycles < 0) p.add({"sim_cycles"}, "sim_cycles must be >= 0");
  if (!(actuation_amplitude >= 0.0 && actuation_amplitude <= 0.2)) {
    p.add({"actuation_amplitude"}, "actuation_amplitude must lie in [0, 0.2]");
  }
  positive("actuation_frequency", actuation_frequency);
  positive("k_min", k_min);
  positive("k_max", k_max);
  if (!(k_min < k_max)) p.add({"k_min", "k_max"}, "k_min must be < k_max");
  non_negative("signal_filter_time_constant", signal_filter_time_constant);
  non_negative("shear_stiffness_ratio", shear_stiffness_ratio);
  positive("trajectory_interval", trajectory_interval);

  if (!p.keys.empty()) throw ConfigError(std::move(p.keys), p.message);
}

}  // namespace voxelforge
