#include "voxelforge/physics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace voxelforge::physics {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
// Positions beyond this many metres from the origin count as a blow-up.
constexpr double kRunawayDistance = 1e3;

constexpr std::array<std::array<int, 3>, 3> kFaceOffsets = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
constexpr std::array<std::array<int, 3>, 6> kShearOffsets = {
    {{1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1}, {0, 1, 1}, {0, 1, -1}}};

double spring_rest_scale(const Spring& s) { return s.face ? 1.0 : kSqrt2; }

double spring_constant(const SimState& state, const LatticeConfig& config,
                       const Spring& s) {
  const double k = series_stiffness(state.stiffness[s.a], state.stiffness[s.b],
                                    config.voxel_edge_length);
  return s.face ? k : k * config.shear_stiffness_ratio;
}

double max_spring_constant(const Body& body, const SimState& state,
                           const LatticeConfig& config) {
  double k = config.ground_stiffness;
  for (const Spring& s : body.springs) k = std::max(k, spring_constant(state, config, s));
  return k;
}

double dt_for(double stiffest, double mass, const LatticeConfig& config) {
  return config.dt_safety_factor * 2.0 / std::sqrt(stiffest / mass);
}

// Refreshes cached spring constants after a stiffness change and re-derives
// dt once the stiffest element has drifted by more than 2x either way.
void refresh_constants(const Body& body, SimState& state, const LatticeConfig& config) {
  const double reduced_mass = 0.5 * body.mass;
  double stiffest = config.ground_stiffness;
  for (std::size_t i = 0; i < body.springs.size(); ++i) {
    const double k = spring_constant(state, config, body.springs[i]);
    state.spring_stiffness[i] = k;
    state.spring_damping[i] = 2.0 * config.damping_ratio * std::sqrt(k * reduced_mass);
    stiffest = std::max(stiffest, k);
  }
  const double drift = stiffest / state.dt_reference_stiffness;
  if (state.dt_reference_stiffness <= 0.0 || drift > 2.0 || drift < 0.5) {
    state.dt = dt_for(stiffest, body.mass, config);
    state.dt_reference_stiffness = stiffest;
  }
  state.constants_dirty = false;
}

}  // namespace

Lattice build_lattice(const Phenotype& phenotype, const LatticeConfig& config) {
  const auto& voxels = phenotype.voxels();
  if (voxels.empty()) throw InvalidBody("cannot build a lattice from an empty geometry");
  if (connected_components(phenotype.dims(), phenotype.geometry()).size() != 1) {
    throw InvalidBody("geometry must be a single connected component");
  }

  Lattice lattice;
  Body& body = lattice.body;
  const Dims& dims = phenotype.dims();
  body.dims = dims;
  body.mass = config.voxel_mass();

  std::vector<std::int32_t> voxel_of(dims.count(), -1);
  int lowest = std::numeric_limits<int>::max();
  for (std::size_t v = 0; v < voxels.size(); ++v) {
    const std::size_t cell = voxels[v];
    voxel_of[cell] = static_cast<std::int32_t>(v);
    body.cells.push_back(dims.coords(cell));
    body.k_congenital.push_back(phenotype.stiffness()[cell]);
    body.alpha.push_back(phenotype.alpha()[cell]);
    body.phase.push_back(phenotype.phase()[cell]);
    body.sin_phase.push_back(std::sin(body.phase.back()));
    body.cos_phase.push_back(std::cos(body.phase.back()));
    lowest = std::min(lowest, body.cells.back()[2]);
  }

  body.face_degree.assign(voxels.size(), 0);
  auto connect = [&](const auto& offsets, bool face) {
    for (std::size_t v = 0; v < voxels.size(); ++v) {
      const auto [x, y, z] = body.cells[v];
      for (const auto& d : offsets) {
        const int nx = x + d[0], ny = y + d[1], nz = z + d[2];
        if (!dims.contains(nx, ny, nz)) continue;
        const std::int32_t other = voxel_of[dims.index(nx, ny, nz)];
        if (other < 0) continue;
        body.springs.push_back(
            {static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(other), face});
        if (face) {
          ++body.face_degree[v];
          ++body.face_degree[static_cast<std::size_t>(other)];
        }
      }
    }
  };
  connect(kFaceOffsets, true);
  connect(kShearOffsets, false);

  SimState& state = lattice.state;
  const double edge = config.voxel_edge_length;
  const std::size_t n = voxels.size();
  state.positions.reserve(n);
  for (const auto& [x, y, z] : body.cells) {
    state.positions.push_back({x * edge, y * edge, (z - lowest) * edge + 0.5 * edge});
  }
  state.velocities.assign(n, Vec3{});
  state.stiffness = body.k_congenital;
  for (double k : state.stiffness) {
    if (!(k >= config.k_min && k <= config.k_max)) {
      throw InvalidBody("congenital stiffness outside [k_min, k_max]");
    }
  }
  state.stress.assign(n, 0.0);
  state.pressure.assign(n, 0.0);
  state.prev_stress.assign(n, 0.0);
  state.prev_pressure.assign(n, 0.0);
  state.peak_stress.assign(n, 0.0);
  state.peak_pressure.assign(n, 0.0);
  state.forces.assign(n, Vec3{});
  state.psi.assign(n, 1.0);
  state.ground_normal.assign(n, 0.0);
  state.raw_stress.assign(n, 0.0);
  state.raw_pressure.assign(n, 0.0);
  state.spring_force.assign(body.springs.size(), 0.0);
  state.spring_stiffness.assign(body.springs.size(), 0.0);
  state.spring_damping.assign(body.springs.size(), 0.0);
  state.dt_reference_stiffness = 0.0;
  refresh_constants(body, state, config);
  return lattice;
}

double stable_dt(const Body& body, const SimState& state, const LatticeConfig& config) {
  return dt_for(max_spring_constant(body, state, config), body.mass, config);
}

void compute_psi(const Body& body, SimState& state, const LatticeConfig& config, Phase phase) {
  if (phase == Phase::Settle) {
    std::fill(state.psi.begin(), state.psi.end(), 1.0);
    return;
  }
  // The amplitude ramps in linearly over the first cycle; otherwise the
  // rest lengths would jump from 1 to 1 + A sin(phase) xi at onset.
  const double envelope = std::min(1.0, state.actuation_time * config.actuation_frequency);
  // sin(wt + phase) expanded so that only two trig calls are made per step.
  const double wt = 2.0 * std::numbers::pi * config.actuation_frequency * state.actuation_time;
  const double sin_wt = std::sin(wt);
  const double cos_wt = std::cos(wt);
  const double amplitude = envelope * config.actuation_amplitude;
  const double inv_range = 1.0 / (config.k_max - config.k_min);
  for (std::size_t i = 0; i < body.voxel_count(); ++i) {
    const double wave = sin_wt * body.cos_phase[i] + cos_wt * body.sin_phase[i];
    const double damping = (config.k_max - state.stiffness[i]) * inv_range;
    state.psi[i] = 1.0 + amplitude * wave * damping;
  }
}

void accumulate_forces(const Body& body, SimState& state, const LatticeConfig& config) {
  if (state.constants_dirty) refresh_constants(body, state, config);
  const double edge = config.voxel_edge_length;
  const double m = body.mass;
  const std::size_t n = body.voxel_count();

  const Vec3 weight{0.0, 0.0, -m * config.gravity};
  std::fill(state.forces.begin(), state.forces.end(), weight);

  for (std::size_t s = 0; s < body.springs.size(); ++s) {
    const Spring& spring = body.springs[s];
    const Vec3 d = state.positions[spring.b] - state.positions[spring.a];
    const double length = norm(d);
    const double rest =
        edge * spring_rest_scale(spring) * 0.5 * (state.psi[spring.a] + state.psi[spring.b]);
    const double elastic = state.spring_stiffness[s] * (length - rest);
    Vec3 axis{};
    if (length > 0.0) axis = d * (1.0 / length);
    const double closing = dot(state.velocities[spring.b] - state.velocities[spring.a], axis);
    const Vec3 f = axis * (elastic + state.spring_damping[s] * closing);
    state.forces[spring.a] += f;
    state.forces[spring.b] -= f;
    state.spring_force[s] = elastic;
  }

  const double ground_damping =
      2.0 * config.damping_ratio * std::sqrt(config.ground_stiffness * m);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = state.positions[i];
    const Vec3& v = state.velocities[i];
    const double penetration = 0.5 * edge * state.psi[i] - p.z;
    if (penetration <= 0.0) {
      state.ground_normal[i] = 0.0;
      continue;
    }
    const double normal =
        std::max(0.0, config.ground_stiffness * penetration - ground_damping * v.z);
    state.ground_normal[i] = normal;
    state.forces[i].z += normal;
  }

  // Coulomb friction against the tangential velocity this step would
  // produce. Sticking when the force that cancels it is within mu N.
  const double m_over_dt = m / state.dt;
  for (std::size_t i = 0; i < n; ++i) {
    const double normal = state.ground_normal[i];
    if (normal <= 0.0) continue;
    const Vec3& v = state.velocities[i];
    const double fx = -(m_over_dt * v.x + state.forces[i].x);
    const double fy = -(m_over_dt * v.y + state.forces[i].y);
    const double needed = std::sqrt(fx * fx + fy * fy);
    const double limit = config.friction_coefficient * normal;
    const double scale = needed <= limit ? 1.0 : limit / needed;
    state.forces[i].x += scale * fx;
    state.forces[i].y += scale * fy;
  }
}

void compute_signals(const Body& body, const SimState& state, const LatticeConfig& config,
                     std::span<double> stress, std::span<double> pressure) {
  const double area = config.voxel_edge_length * config.voxel_edge_length;
  std::fill(stress.begin(), stress.end(), 0.0);
  std::fill(pressure.begin(), pressure.end(), 0.0);
  for (std::size_t s = 0; s < body.springs.size(); ++s) {
    const Spring& spring = body.springs[s];
    if (!spring.face) continue;
    const double f = state.spring_force[s];
    const double load = std::fabs(f) / area;
    const double compression = std::max(0.0, -f) / area;
    stress[spring.a] += load;
    stress[spring.b] += load;
    pressure[spring.a] += compression;
    pressure[spring.b] += compression;
  }
  for (std::size_t i = 0; i < body.voxel_count(); ++i) {
    if (body.face_degree[i] > 0) stress[i] /= body.face_degree[i];
    pressure[i] = (pressure[i] + state.ground_normal[i] / area) / 6.0;
  }
}

void step(const Body& body, SimState& state, const LatticeConfig& config, DevelopmentRule rule,
          Phase phase) {
  if (state.unstable) return;
  if (state.constants_dirty) refresh_constants(body, state, config);
  const double dt = state.dt;
  const std::size_t n = body.voxel_count();

  compute_psi(body, state, config, phase);
  accumulate_forces(body, state, config);

  const double inv_mass_dt = dt / body.mass;
  for (std::size_t i = 0; i < n; ++i) {
    state.velocities[i] += state.forces[i] * inv_mass_dt;
    state.positions[i] += state.velocities[i] * dt;
    const Vec3& p = state.positions[i];
    if (!is_finite(p) || !is_finite(state.velocities[i]) ||
        std::fabs(p.x) > kRunawayDistance || std::fabs(p.y) > kRunawayDistance ||
        std::fabs(p.z) > kRunawayDistance) {
      state.unstable = true;
    }
  }
  if (state.unstable) return;

  compute_signals(body, state, config, state.raw_stress, state.raw_pressure);
  const double tau = config.signal_filter_time_constant;
  const double blend = tau > 0.0 ? -std::expm1(-dt / tau) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    state.stress[i] += blend * (state.raw_stress[i] - state.stress[i]);
    state.pressure[i] += blend * (state.raw_pressure[i] - state.pressure[i]);
    state.peak_stress[i] = std::max(state.peak_stress[i], state.stress[i]);
    state.peak_pressure[i] = std::max(state.peak_pressure[i], state.pressure[i]);
  }

  if (rule != DevelopmentRule::None) {
    const bool stress_driven = rule == DevelopmentRule::Stress;
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = stress_driven ? state.stress[i] - state.prev_stress[i]
                                         : state.pressure[i] - state.prev_pressure[i];
      const double k = development::develop(state.stiffness[i], body.alpha[i], delta, rule,
                                            config.k_min, config.k_max);
      if (k != state.stiffness[i]) {
        state.stiffness[i] = k;
        state.constants_dirty = true;
      }
    }
  }
  state.prev_stress = state.stress;
  state.prev_pressure = state.pressure;

  state.time += dt;
  if (phase == Phase::Actuate) state.actuation_time += dt;
}

Vec3 center_of_mass(const SimState& state) {
  Vec3 sum{};
  for (const Vec3& p : state.positions) sum += p;
  return sum * (1.0 / static_cast<double>(state.positions.size()));
}

SimResult simulate(const Phenotype& phenotype, const LatticeConfig& config,
                   DevelopmentRule rule) {
  const auto started = std::chrono::steady_clock::now();
  Lattice lattice = build_lattice(phenotype, config);
  const Body& body = lattice.body;
  SimState& state = lattice.state;

  SimResult result;
  double next_sample = 0.0;
  auto sample = [&](bool force) {
    if (!force && state.time < next_sample) return;
    result.trajectory_time.push_back(state.time);
    result.trajectory.push_back(center_of_mass(state));
    next_sample = state.time + config.trajectory_interval;
  };

  sample(true);
  while (state.time < config.settle_duration && !state.unstable) {
    step(body, state, config, DevelopmentRule::None, Phase::Settle);
    sample(false);
  }
  const Vec3 start = center_of_mass(state);

  const double duration = config.actuation_duration();
  while (state.actuation_time < duration && !state.unstable) {
    step(body, state, config, rule, Phase::Actuate);
    sample(false);
  }
  if (!state.unstable && result.trajectory_time.back() != state.time) sample(true);

  result.unstable = state.unstable;
  if (!state.unstable) {
    const Vec3 end = center_of_mass(state);
    result.displacement_xy = std::hypot(end.x - start.x, end.y - start.y) /
                             config.voxel_edge_length;
  }
  result.final_stiffness = state.stiffness;
  result.peak_stress = state.peak_stress;
  result.peak_pressure = state.peak_pressure;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

double kinetic_energy(const Body& body, const SimState& state) {
  double sum = 0.0;
  for (const Vec3& v : state.velocities) sum += dot(v, v);
  return 0.5 * body.mass * sum;
}

Vec3 spring_force_on_b(const Vec3& a, const Vec3& b, double stiffness, double rest_length) {
  const Vec3 d = b - a;
  const double length = norm(d);
  if (length == 0.0) return {};
  return d * (-stiffness * (length - rest_length) / length);
}

double spring_energy(const Vec3& a, const Vec3& b, double stiffness, double rest_length) {
  const double stretch = norm(b - a) - rest_length;
  return 0.5 * stiffness * stretch * stretch;
}

double potential_energy(const Body& body, const SimState& state, const LatticeConfig& config) {
  const double edge = config.voxel_edge_length;
  auto psi = [&](std::size_t i) { return state.psi.empty() ? 1.0 : state.psi[i]; };
  double energy = 0.0;
  for (const Spring& s : body.springs) {
    const double k = spring_constant(state, config, s);
    const double rest = edge * spring_rest_scale(s) * 0.5 * (psi(s.a) + psi(s.b));
    energy += spring_energy(state.positions[s.a], state.positions[s.b], k, rest);
  }
  for (std::size_t i = 0; i < body.voxel_count(); ++i) {
    const double z = state.positions[i].z;
    energy += body.mass * config.gravity * z;
    const double penetration = 0.5 * edge * psi(i) - z;
    if (penetration > 0.0) energy += 0.5 * config.ground_stiffness * penetration * penetration;
  }
  return energy;
}

}  // namespace voxelforge::physics
