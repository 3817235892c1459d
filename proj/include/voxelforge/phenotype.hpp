#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace voxelforge {

// Lattice dimensions. Cells are ordered lexicographically in (x, y, z):
// index = (x * ny + y) * nz + z.
struct Dims {
  int x = 10;
  int y = 10;
  int z = 10;

  std::size_t count() const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(y) *
           static_cast<std::size_t>(z);
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(y) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(z) +
           static_cast<std::size_t>(k);
  }
  std::array<int, 3> coords(std::size_t index) const {
    const int k = static_cast<int>(index % static_cast<std::size_t>(z));
    const std::size_t rest = index / static_cast<std::size_t>(z);
    return {static_cast<int>(rest / static_cast<std::size_t>(y)),
            static_cast<int>(rest % static_cast<std::size_t>(y)), k};
  }
  bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < x && j < y && k < z;
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

class InvalidPhenotype : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kPhenotypeStiffnessMin = 1e4;
inline constexpr double kPhenotypeStiffnessMax = 1e10;
inline constexpr double kAlphaBound = 10.0;

// Expressed body: presence mask plus congenital stiffness (Pa), development
// gain and actuation phase (rad). All fields are full-lattice arrays; only
// entries of present cells are meaningful.
class Phenotype {
 public:
  // Validates: one face-connected component, at least one voxel, and
  // stiffness in [1e4, 1e10], alpha in [-10, 10], phase in [-pi, pi] on
  // present cells. Throws InvalidPhenotype.
  Phenotype(Dims dims, std::vector<std::uint8_t> geometry, std::vector<double> stiffness,
            std::vector<double> alpha, std::vector<double> phase);

  const Dims& dims() const { return dims_; }
  bool present(std::size_t cell) const { return geometry_[cell] != 0; }
  const std::vector<std::uint8_t>& geometry() const { return geometry_; }
  const std::vector<double>& stiffness() const { return stiffness_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& phase() const { return phase_; }

  // Present cell indices in ascending lattice order. Per-voxel vectors
  // elsewhere (simulation state, results) use this order.
  const std::vector<std::size_t>& voxels() const { return voxels_; }
  std::size_t voxel_count() const { return voxels_.size(); }

  // Same body with the stiffness of present cells replaced; `per_voxel`
  // follows voxels() order.
  Phenotype with_stiffness(const std::vector<double>& per_voxel) const;

  friend bool operator==(const Phenotype& a, const Phenotype& b) {
    return a.dims_ == b.dims_ && a.geometry_ == b.geometry_ && a.stiffness_ == b.stiffness_ &&
           a.alpha_ == b.alpha_ && a.phase_ == b.phase_;
  }

 private:
  Dims dims_;
  std::vector<std::uint8_t> geometry_;
  std::vector<double> stiffness_;
  std::vector<double> alpha_;
  std::vector<double> phase_;
  std::vector<std::size_t> voxels_;
};

// Connected components (face adjacency) of a presence mask, each listed in
// ascending index order; components are ordered by their lowest index.
std::vector<std::vector<std::size_t>> connected_components(
    const Dims& dims, const std::vector<std::uint8_t>& geometry);

// Convenience builder for hand-made bodies (tests, examples).
class PhenotypeBuilder {
 public:
  explicit PhenotypeBuilder(Dims dims);
  PhenotypeBuilder& add(int x, int y, int z, double stiffness, double alpha = 0.0,
                        double phase = 0.0);
  Phenotype build() const;

 private:
  Dims dims_;
  std::vector<std::uint8_t> geometry_;
  std::vector<double> stiffness_;
  std::vector<double> alpha_;
  std::vector<double> phase_;
};

}  // namespace voxelforge
