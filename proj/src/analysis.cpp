#include "voxelforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "voxelforge/evolution.hpp"
#include "voxelforge/physics.hpp"
#include "voxelforge/rng.hpp"

namespace voxelforge::analysis {

namespace {

std::int64_t squared_distance(const Voxel& p, const Voxel& q) {
  std::int64_t sum = 0;
  for (std::size_t d = 0; d < 3; ++d) {
    const std::int64_t delta = static_cast<std::int64_t>(p[d]) - q[d];
    sum += delta * delta;
  }
  return sum;
}

// Largest over `from` of the smallest squared distance into `to`.
std::int64_t directed_squared(const VoxelSet& from, const VoxelSet& to) {
  std::int64_t worst = 0;
  for (const Voxel& p : from) {
    std::int64_t nearest = std::numeric_limits<std::int64_t>::max();
    for (const Voxel& q : to) {
      nearest = std::min(nearest, squared_distance(p, q));
      if (nearest <= worst) break;  // cannot raise the maximum
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

std::int64_t hausdorff_squared(const VoxelSet& a, const VoxelSet& b) {
  return std::max(directed_squared(a, b), directed_squared(b, a));
}

void require_nonempty(const VoxelSet& a, const VoxelSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff of an empty voxel set");
}

VoxelSet doubled(const VoxelSet& s, const Dims& dims) {
  VoxelSet out;
  out.reserve(s.size());
  for (const Voxel& p : s) {
    out.push_back({2 * p[0] - (dims.x - 1), 2 * p[1] - (dims.y - 1), 2 * p[2] - (dims.z - 1)});
  }
  return out;
}

void check_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("stiffness fields differ in length");
  if (a.empty()) throw std::invalid_argument("empty stiffness field");
}

double resampled_mean(std::span<const double> values, double shift, Rng& rng) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += values[rng.index(values.size())];
  return sum / static_cast<double>(values.size()) + shift;
}

}  // namespace

VoxelSet voxel_set(const Phenotype& phenotype) {
  VoxelSet out;
  out.reserve(phenotype.voxel_count());
  for (std::size_t cell : phenotype.voxels()) out.push_back(phenotype.dims().coords(cell));
  return out;
}

double hausdorff(const VoxelSet& a, const VoxelSet& b) {
  require_nonempty(a, b);
  return std::sqrt(static_cast<double>(hausdorff_squared(a, b)));
}

std::array<VoxelSet, 8> rotations_doubled(const VoxelSet& b, const Dims& dims) {
  std::array<VoxelSet, 8> out;
  const VoxelSet base = doubled(b, dims);
  std::size_t r = 0;
  for (int yz = 0; yz < 2; ++yz) {
    for (int xy = 0; xy < 4; ++xy, ++r) {
      out[r].reserve(base.size());
      for (Voxel p : base) {
        if (yz == 1) p = {p[0], -p[2], p[1]};
        for (int q = 0; q < xy; ++q) p = {-p[1], p[0], p[2]};
        out[r].push_back(p);
      }
    }
  }
  return out;
}

double min_rotation_hausdorff(const VoxelSet& a, const VoxelSet& b, const Dims& dims) {
  require_nonempty(a, b);
  const VoxelSet da = doubled(a, dims);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const VoxelSet& rb : rotations_doubled(b, dims)) {
    best = std::min(best, hausdorff_squared(da, rb));
  }
  // Doubled coordinates scale squared distances by exactly 4.
  return std::sqrt(static_cast<double>(best)) / 2.0;
}

StiffnessSampler log_uniform_stiffness(double k_min, double k_max) {
  if (!(k_min > 0.0 && k_min < k_max)) {
    throw std::invalid_argument("log-uniform stiffness needs 0 < k_min < k_max");
  }
  const double lo = std::log10(k_min);
  const double hi = std::log10(k_max);
  return [=](const Phenotype& phenotype, Rng& rng) {
    std::vector<double> k(phenotype.voxel_count());
    for (double& v : k) v = std::clamp(std::pow(10.0, rng.uniform(lo, hi)), k_min, k_max);
    return k;
  };
}

std::vector<double> robustness_experiment(const ChampionRecord& champion, std::size_t n_samples,
                                          Rng& rng, const LatticeConfig& config,
                                          const StiffnessSampler& sampler, unsigned jobs) {
  if (!(champion.train_fitness > 0.0)) {
    throw std::invalid_argument("robustness is undefined for a champion with zero fitness");
  }
  if (n_samples < 1) throw std::invalid_argument("robustness needs at least one sample");

  std::vector<std::vector<double>> fields;
  fields.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) fields.push_back(sampler(champion.phenotype, rng));

  std::vector<double> ratios(n_samples, 0.0);
  evolution::parallel_for(n_samples, jobs, [&](std::size_t s) {
    const Phenotype body = champion.phenotype.with_stiffness(fields[s]);
    const auto result = physics::simulate(body, config, DevelopmentRule::None);
    const double test = result.unstable ? 0.0 : result.displacement_xy;
    ratios[s] = test / champion.train_fitness;
  });
  return ratios;
}

std::vector<double> robustness_experiment(const ChampionRecord& champion, std::size_t n_samples,
                                          Rng& rng, const LatticeConfig& config) {
  return robustness_experiment(champion, n_samples, rng, config,
                               log_uniform_stiffness(config.k_min, config.k_max));
}

std::vector<double> relative_changes(std::span<const double> k_congenital,
                                     std::span<const double> k_final) {
  check_same_length(k_congenital, k_final);
  std::vector<double> out(k_congenital.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(k_congenital[i] > 0.0)) throw std::invalid_argument("congenital stiffness must be > 0");
    out[i] = std::abs(k_final[i] / k_congenital[i] - 1.0);
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_variance(std::span<const double> values) {
  const double m = mean(values);
  double sum = 0.0;
  for (double v : values) sum += (v - m) * (v - m);
  return sum / static_cast<double>(values.size());
}

double m_body(std::span<const double> k_congenital, std::span<const double> k_final) {
  return mean(relative_changes(k_congenital, k_final));
}

double v_body(std::span<const double> k_congenital, std::span<const double> k_final) {
  return population_variance(relative_changes(k_congenital, k_final));
}

double v_gain(std::span<const double> alphas, double alpha_min, double alpha_max) {
  if (!(alpha_max > alpha_min)) throw std::invalid_argument("v_gain needs alpha_max > alpha_min");
  std::vector<double> normalised(alphas.size());
  const double range = alpha_max - alpha_min;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    normalised[i] = (alphas[i] - alpha_min) / range;
  }
  return population_variance(normalised);
}

GainBounds gain_bounds(const std::vector<std::vector<double>>& groups) {
  GainBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& g : groups) {
    for (double a : g) {
      b.min = std::min(b.min, a);
      b.max = std::max(b.max, a);
    }
  }
  if (b.min > b.max) throw std::invalid_argument("gain bounds of an empty group");
  return b;
}

BootstrapResult bootstrap_test(std::span<const double> a, std::span<const double> b,
                               std::size_t n_resamples, std::size_t n_comparisons, Rng& rng) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("bootstrap needs at least two values per sample");
  }
  if (n_resamples < 1000) throw std::invalid_argument("bootstrap needs >= 1000 resamples");
  if (n_comparisons < 1) throw std::invalid_argument("n_comparisons must be >= 1");

  const double mean_a = mean(a);
  const double mean_b = mean(b);
  const double pooled = (mean_a * static_cast<double>(a.size()) +
                         mean_b * static_cast<double>(b.size())) /
                        static_cast<double>(a.size() + b.size());
  BootstrapResult r;
  r.observed_difference = mean_a - mean_b;
  const double observed = std::abs(r.observed_difference);

  std::size_t extreme = 0;
  for (std::size_t s = 0; s < n_resamples; ++s) {
    const double da = resampled_mean(a, pooled - mean_a, rng);
    const double db = resampled_mean(b, pooled - mean_b, rng);
    if (std::abs(da - db) >= observed) ++extreme;
  }
  r.raw_p = static_cast<double>(extreme + 1) / static_cast<double>(n_resamples + 1);
  r.corrected_p = std::min(1.0, r.raw_p * static_cast<double>(n_comparisons));
  return r;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "ns";
}

}  // namespace voxelforge::analysis
