#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "voxelforge/config.hpp"
#include "voxelforge/development.hpp"
#include "voxelforge/phenotype.hpp"
#include "voxelforge/vec3.hpp"

namespace voxelforge::physics {

using development::DevelopmentRule;

class InvalidBody : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Spring {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  // Face springs join face-adjacent voxels (rest L); shear springs join
  // voxels sharing an edge (rest sqrt(2) L) and resist in-plane shear.
  bool face = true;
};

// Static part of a simulated body: one point mass per voxel, springs between
// neighbours, and the per-voxel genetic fields in voxel order.
struct Body {
  Dims dims;
  std::vector<std::array<int, 3>> cells;
  std::vector<Spring> springs;
  std::vector<std::uint32_t> face_degree;  // incident face springs per voxel
  std::vector<double> k_congenital;
  std::vector<double> alpha;
  std::vector<double> phase;
  std::vector<double> sin_phase;
  std::vector<double> cos_phase;
  double mass = 0.0;

  std::size_t voxel_count() const { return cells.size(); }
};

enum class Phase { Settle, Actuate };

// Dynamic state. Per-voxel vectors follow Body voxel order.
struct SimState {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  std::vector<double> stiffness;
  std::vector<double> stress;    // filtered, Pa
  std::vector<double> pressure;  // filtered, Pa
  std::vector<double> prev_stress;
  std::vector<double> prev_pressure;
  std::vector<double> peak_stress;
  std::vector<double> peak_pressure;
  double time = 0.0;
  double actuation_time = 0.0;  // advances only while actuating
  double dt = 0.0;
  bool unstable = false;

  // Per-step scratch, kept here so stepping does not allocate.
  std::vector<Vec3> forces;
  std::vector<double> psi;
  std::vector<double> spring_force;   // elastic axial force, tension > 0
  std::vector<double> ground_normal;  // N per voxel
  std::vector<double> raw_stress;
  std::vector<double> raw_pressure;
  std::vector<double> spring_stiffness;  // N/m
  std::vector<double> spring_damping;    // N s/m
  bool constants_dirty = true;
  double dt_reference_stiffness = 0.0;
};

struct Lattice {
  Body body;
  SimState state;
};

struct SimResult {
  double displacement_xy = 0.0;  // voxel lengths
  std::vector<double> trajectory_time;
  std::vector<Vec3> trajectory;  // centre of mass
  std::vector<double> final_stiffness;
  std::vector<double> peak_stress;
  std::vector<double> peak_pressure;
  bool unstable = false;
  double wall_time = 0.0;  // s, excluded from equality
};

// Series combination of two moduli over one voxel length, in N/m.
inline double series_stiffness(double e_i, double e_j, double edge_length) {
  return 2.0 * e_i * e_j / (e_i + e_j) * edge_length;
}

// Point masses on lattice coordinates scaled by L, lowest voxel resting on
// the ground (z = L/2), zero velocity, congenital stiffness, zero signals.
// Throws InvalidBody for an empty or disconnected voxel set.
Lattice build_lattice(const Phenotype& phenotype, const LatticeConfig& config);

// safety * 2 / sqrt(k_stiffest / m) over all springs and the ground contact.
double stable_dt(const Body& body, const SimState& state, const LatticeConfig& config);

// Rest-length multipliers for the current step (all 1 while settling).
void compute_psi(const Body& body, SimState& state, const LatticeConfig& config, Phase phase);

// Spring, damping, gravity, ground and friction forces at the current
// positions/velocities and state.psi. Fills state.forces, spring_force and
// ground_normal. Uses state.dt for the friction cap.
void accumulate_forces(const Body& body, SimState& state, const LatticeConfig& config);

// Raw per-voxel interoceptive signals from the last accumulate_forces:
//   stress_i   = mean over incident face springs of |F| / L^2
//   pressure_i = (sum over incident face springs of max(0, -F) + N_i) / (6 L^2)
void compute_signals(const Body& body, const SimState& state, const LatticeConfig& config,
                     std::span<double> stress, std::span<double> pressure);

// One integration step: forces, semi-implicit Euler, filtered signals,
// development, clock. Sets state.unstable on a non-finite result.
void step(const Body& body, SimState& state, const LatticeConfig& config, DevelopmentRule rule,
          Phase phase);

// Settle without actuation or development, record the start CoM, actuate
// for sim_cycles / f seconds under `rule`.
SimResult simulate(const Phenotype& phenotype, const LatticeConfig& config, DevelopmentRule rule);

Vec3 center_of_mass(const SimState& state);

// Energies. Potential includes springs (at state.psi), gravity and ground.
double kinetic_energy(const Body& body, const SimState& state);
double potential_energy(const Body& body, const SimState& state, const LatticeConfig& config);

// Spring element helpers: force on the `b` end and stored energy.
Vec3 spring_force_on_b(const Vec3& a, const Vec3& b, double stiffness, double rest_length);
double spring_energy(const Vec3& a, const Vec3& b, double stiffness, double rest_length);

}  // namespace voxelforge::physics
