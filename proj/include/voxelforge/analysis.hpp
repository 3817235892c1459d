#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "voxelforge/config.hpp"
#include "voxelforge/development.hpp"
#include "voxelforge/genome.hpp"
#include "voxelforge/phenotype.hpp"

namespace voxelforge {
class Rng;
}

namespace voxelforge::analysis {

using development::DevelopmentRule;

using Voxel = std::array<int, 3>;
using VoxelSet = std::vector<Voxel>;

VoxelSet voxel_set(const Phenotype& phenotype);

// Symmetric Hausdorff distance between voxel centres, in voxel lengths.
// Throws std::invalid_argument if either set is empty.
double hausdorff(const VoxelSet& a, const VoxelSet& b);

// Minimum of hausdorff(a, R b) over the 8 compositions of a yz rotation
// (0, 90 deg) followed by an xy rotation (0, 90, 180, 270 deg), all about
// the lattice centre. Identity is among them.
double min_rotation_hausdorff(const VoxelSet& a, const VoxelSet& b, const Dims& dims);

// The 8 rotated copies of `b`, in doubled centred coordinates (2 p - (n - 1))
// so that rotations about a half-integer centre stay integral.
std::array<VoxelSet, 8> rotations_doubled(const VoxelSet& b, const Dims& dims);

// An evolved robot with everything needed to re-simulate it.
struct ChampionRecord {
  genome::Genome genome;
  Phenotype phenotype;
  double train_fitness = 0.0;  // voxel lengths
  DevelopmentRule rule = DevelopmentRule::None;
  std::vector<double> final_stiffness;  // voxels() order
};

// Per-voxel test stiffness in voxels() order.
using StiffnessSampler = std::function<std::vector<double>(const Phenotype&, Rng&)>;

// Independent log-uniform draw over [k_min, k_max] per voxel.
StiffnessSampler log_uniform_stiffness(double k_min, double k_max);

// Test fitness / train fitness for each of n_samples stiffness redraws, with
// development disabled and geometry, gain and phase untouched. Samples are
// drawn sequentially from rng, then simulated on up to `jobs` threads.
// Throws std::invalid_argument when train_fitness <= 0 or n_samples < 1.
std::vector<double> robustness_experiment(const ChampionRecord& champion, std::size_t n_samples,
                                          Rng& rng, const LatticeConfig& config,
                                          const StiffnessSampler& sampler, unsigned jobs = 1);
std::vector<double> robustness_experiment(const ChampionRecord& champion, std::size_t n_samples,
                                          Rng& rng, const LatticeConfig& config);

// |k_final / k_congenital - 1| per voxel.
std::vector<double> relative_changes(std::span<const double> k_congenital,
                                     std::span<const double> k_final);

double mean(std::span<const double> values);
double population_variance(std::span<const double> values);

// Mean and population variance of the relative lifetime stiffness change.
double m_body(std::span<const double> k_congenital, std::span<const double> k_final);
double v_body(std::span<const double> k_congenital, std::span<const double> k_final);

// Population variance of gains normalised to [0, 1] by group-level bounds.
double v_gain(std::span<const double> alphas, double alpha_min, double alpha_max);

struct GainBounds {
  double min = 0.0;
  double max = 0.0;
};
GainBounds gain_bounds(const std::vector<std::vector<double>>& groups);

struct BootstrapResult {
  double observed_difference = 0.0;  // mean(a) - mean(b)
  double raw_p = 1.0;
  double corrected_p = 1.0;  // raw_p * n_comparisons, capped at 1
};

// Two-sided test of equal means: both samples are shifted to the pooled
// mean, resampled with replacement, and the resampled difference compared
// with the observed one. p = (1 + #{|d*| >= |d|}) / (1 + n_resamples).
BootstrapResult bootstrap_test(std::span<const double> a, std::span<const double> b,
                               std::size_t n_resamples, std::size_t n_comparisons, Rng& rng);

// "***" below 0.001, "**" below 0.01, "*" below 0.05, otherwise "ns".
std::string significance_stars(double p);

}  // namespace voxelforge::analysis
