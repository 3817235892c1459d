#pragma once

// Hand-rolled generators for property tests. Every generator draws from a
// caller-owned Rng so a failing case is reproducible from its seed.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <vector>

#include "voxelforge/evolution.hpp"
#include "voxelforge/genome.hpp"
#include "voxelforge/phenotype.hpp"
#include "voxelforge/rng.hpp"

namespace gen {

using voxelforge::Dims;
using voxelforge::Rng;

// `size` is capped at the number of cells in an extent^3 cube.
inline std::vector<std::array<int, 3>> voxel_set(Rng& rng, std::size_t size, int extent) {
  std::set<std::array<int, 3>> s;
  const auto e = static_cast<std::size_t>(extent);
  size = std::min(size, e * e * e);
  while (s.size() < size) {
    s.insert({static_cast<int>(rng.index(e)), static_cast<int>(rng.index(e)),
              static_cast<int>(rng.index(e))});
  }
  return {s.begin(), s.end()};
}

// Connected body grown by attaching random face neighbours.
inline std::vector<std::uint8_t> connected_mask(Rng& rng, const Dims& dims, std::size_t size) {
  std::vector<std::uint8_t> mask(dims.count(), 0);
  std::vector<std::size_t> cells{rng.index(dims.count())};
  mask[cells.front()] = 1;
  const int offsets[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  size = std::min(size, dims.count());
  while (cells.size() < size) {
    const auto [x, y, z] = dims.coords(cells[rng.index(cells.size())]);
    const auto& o = offsets[rng.index(6)];
    if (!dims.contains(x + o[0], y + o[1], z + o[2])) continue;
    const std::size_t c = dims.index(x + o[0], y + o[1], z + o[2]);
    if (mask[c]) continue;
    mask[c] = 1;
    cells.push_back(c);
  }
  return mask;
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::pow(10.0, rng.uniform(std::log10(lo), std::log10(hi)));
}

struct BodyOptions {
  double k_min = 1e4;
  double k_max = 1e6;
  double alpha_max = 10.0;
};

inline voxelforge::Phenotype phenotype(Rng& rng, const Dims& dims, std::size_t size,
                                       BodyOptions opt = {}) {
  auto mask = connected_mask(rng, dims, size);
  std::vector<double> k(dims.count(), 0.0), alpha(dims.count(), 0.0), phase(dims.count(), 0.0);
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (!mask[c]) continue;
    k[c] = std::clamp(log_uniform(rng, opt.k_min, opt.k_max), opt.k_min, opt.k_max);
    alpha[c] = rng.uniform(-opt.alpha_max, opt.alpha_max);
    phase[c] = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return voxelforge::Phenotype(dims, std::move(mask), std::move(k), std::move(alpha),
                               std::move(phase));
}

// A genome that has been through `mutations` rounds of mutation.
inline voxelforge::genome::Genome genome(Rng& rng, int mutations) {
  voxelforge::genome::IdAllocator ids;
  auto g = voxelforge::genome::random_genome(rng, ids.next());
  for (int i = 0; i < mutations; ++i) g = voxelforge::genome::mutate(g, rng, ids.next());
  return g;
}

// Evaluated individuals with small integer fitness and age ranges, so that
// ties and dominance chains are common.
inline std::vector<voxelforge::evolution::Individual> population(Rng& rng, std::size_t size) {
  std::vector<voxelforge::evolution::Individual> pop(size);
  for (std::size_t i = 0; i < size; ++i) {
    auto g = std::make_shared<voxelforge::genome::Genome>();
    g->id = i;
    pop[i].genome = std::move(g);
    pop[i].fitness = static_cast<double>(rng.index(8)) * 0.5;
    pop[i].age = static_cast<int>(rng.index(6));
    pop[i].evaluated = true;
  }
  return pop;
}

}  // namespace gen
