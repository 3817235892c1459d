#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace voxelforge {

// Raised by validate(); carries the offending configuration keys so a
// front end can point at them.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::vector<std::string> keys, const std::string& message)
      : std::invalid_argument(message), keys_(std::move(keys)) {}

  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

// Physical and actuation parameters of the voxel lattice. Field names double
// as the flat JSON configuration keys.
struct LatticeConfig {
  double voxel_edge_length = 0.01;  // m
  double density = 1e4;             // kg/m^3
  double gravity = 9.81;            // m/s^2, acts along -z
  double ground_stiffness = 1e6;    // N/m per contacting voxel
  double friction_coefficient = 1.0;
  double damping_ratio = 0.5;
  double dt_safety_factor = 0.1;
  double settle_duration = 0.5;  // s
  int sim_cycles = 25;
  double actuation_amplitude = 0.145;
  double actuation_frequency = 5.0;  // Hz
  double k_min = 1e4;                // Pa
  double k_max = 1e10;               // Pa
  double signal_filter_time_constant = 0.2;  // s, 0 disables smoothing
  // Face-diagonal (shear) springs get this fraction of the face stiffness.
  double shear_stiffness_ratio = 0.5;
  double trajectory_interval = 0.01;  // s between recorded CoM samples

  void validate() const;

  double voxel_mass() const {
    return density * voxel_edge_length * voxel_edge_length * voxel_edge_length;
  }
  double actuation_duration() const { return sim_cycles / actuation_frequency; }
};

}  // namespace voxelforge
