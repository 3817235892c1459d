#include "voxelforge/phenotype.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace voxelforge {

namespace {

constexpr std::array<std::array<int, 3>, 6> kFaceOffsets = {
    {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

}  // namespace

std::vector<std::vector<std::size_t>> connected_components(
    const Dims& dims, const std::vector<std::uint8_t>& geometry) {
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::uint8_t> visited(geometry.size(), 0);
  std::vector<std::size_t> frontier;
  for (std::size_t seed = 0; seed < geometry.size(); ++seed) {
    if (!geometry[seed] || visited[seed]) continue;
    std::vector<std::size_t> component;
    visited[seed] = 1;
    frontier.assign(1, seed);
    while (!frontier.empty()) {
      const std::size_t cell = frontier.back();
      frontier.pop_back();
      component.push_back(cell);
      const auto [x, y, z] = dims.coords(cell);
      for (const auto& d : kFaceOffsets) {
        const int nx = x + d[0], ny = y + d[1], nz = z + d[2];
        if (!dims.contains(nx, ny, nz)) continue;
        const std::size_t next = dims.index(nx, ny, nz);
        if (geometry[next] && !visited[next]) {
          visited[next] = 1;
          frontier.push_back(next);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

Phenotype::Phenotype(Dims dims, std::vector<std::uint8_t> geometry,
                     std::vector<double> stiffness, std::vector<double> alpha,
                     std::vector<double> phase)
    : dims_(dims),
      geometry_(std::move(geometry)),
      stiffness_(std::move(stiffness)),
      alpha_(std::move(alpha)),
      phase_(std::move(phase)) {
  if (dims_.x <= 0 || dims_.y <= 0 || dims_.z <= 0) {
    throw InvalidPhenotype("lattice dimensions must be positive");
  }
  const std::size_t n = dims_.count();
  if (geometry_.size() != n || stiffness_.size() != n || alpha_.size() != n ||
      phase_.size() != n) {
    throw InvalidPhenotype("phenotype fields do not match the lattice size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!geometry_[i]) continue;
    voxels_.push_back(i);
    if (!(stiffness_[i] >= kPhenotypeStiffnessMin && stiffness_[i] <= kPhenotypeStiffnessMax)) {
      throw InvalidPhenotype("stiffness of cell " + std::to_string(i) + " out of range");
    }
    if (!(std::fabs(alpha_[i]) <= kAlphaBound)) {
      throw InvalidPhenotype("alpha of cell " + std::to_string(i) + " out of range");
    }
    if (!(std::fabs(phase_[i]) <= std::numbers::pi)) {
      throw InvalidPhenotype("phase of cell " + std::to_string(i) + " out of range");
    }
  }
  if (voxels_.empty()) throw InvalidPhenotype("phenotype has no voxels");
  if (connected_components(dims_, geometry_).size() != 1) {
    throw InvalidPhenotype("phenotype geometry is not connected");
  }
}

Phenotype Phenotype::with_stiffness(const std::vector<double>& per_voxel) const {
  if (per_voxel.size() != voxels_.size()) {
    throw InvalidPhenotype("stiffness field does not match the voxel count");
  }
  std::vector<double> stiffness = stiffness_;
  for (std::size_t v = 0; v < voxels_.size(); ++v) stiffness[voxels_[v]] = per_voxel[v];
  return Phenotype(dims_, geometry_, std::move(stiffness), alpha_, phase_);
}

PhenotypeBuilder::PhenotypeBuilder(Dims dims)
    : dims_(dims),
      geometry_(dims.count(), 0),
      stiffness_(dims.count(), 0.0),
      alpha_(dims.count(), 0.0),
      phase_(dims.count(), 0.0) {}

PhenotypeBuilder& PhenotypeBuilder::add(int x, int y, int z, double stiffness, double alpha,
                                        double phase) {
  if (!dims_.contains(x, y, z)) throw InvalidPhenotype("voxel outside the lattice");
  const std::size_t i = dims_.index(x, y, z);
  geometry_[i] = 1;
  stiffness_[i] = stiffness;
  alpha_[i] = alpha;
  phase_[i] = phase;
  return *this;
}

Phenotype PhenotypeBuilder::build() const {
  return Phenotype(dims_, geometry_, stiffness_, alpha_, phase_);
}

}  // namespace voxelforge
