#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

#include "voxelforge/cppn.hpp"
#include "voxelforge/phenotype.hpp"

namespace voxelforge {
class Rng;
}

namespace voxelforge::genome {

using GenomeId = std::uint64_t;

// Index of each network within Genome::networks.
enum Channel : std::size_t { kGeometry = 0, kStiffness = 1, kGain = 2, kPhase = 3 };

// Four independent networks: geometry, stiffness, development gain, phase.
struct Genome {
  std::array<Cppn, 4> networks;
  GenomeId id = 0;
  std::optional<GenomeId> parent_id;

  friend bool operator==(const Genome&, const Genome&) = default;
};

// Monotone id source. Shared by a whole evolutionary trial.
class IdAllocator {
 public:
  explicit IdAllocator(GenomeId first = 0) : next_(first) {}
  GenomeId next() { return next_++; }
  GenomeId peek() const { return next_; }

 private:
  GenomeId next_;
};

Genome random_genome(Rng& rng, GenomeId id);

// Output-to-material mappings for a network output o in [-1, 1].
// Log-linear over [k_min, k_max]; with the default range this is
// 10^(4 + 3 (o + 1)) Pa.
inline double stiffness_from_output(double o, double k_min = kPhenotypeStiffnessMin,
                                    double k_max = kPhenotypeStiffnessMax) {
  const double lo = std::log10(k_min);
  const double hi = std::log10(k_max);
  return std::clamp(std::pow(10.0, lo + 0.5 * (hi - lo) * (o + 1.0)), k_min, k_max);
}
inline double gain_from_output(double o) { return 10.0 * o; }
double phase_from_output(double o);  // pi * o

// Per-axis lattice coordinate scaled to [-1, 1] (0 for a single-cell axis).
double scaled_coordinate(int index, int extent);

// Queries all four networks over the lattice. A cell is present iff the
// geometry output is > 0; only the largest face-connected component is kept
// (ties go to the component containing the lowest cell index). Returns
// nullopt when no cell is present. Stiffness spans [k_min, k_max], which
// must lie within the phenotype bounds [1e4, 1e10] Pa.
std::optional<Phenotype> express(const Genome& genome, const Dims& dims,
                                 double k_min = kPhenotypeStiffnessMin,
                                 double k_max = kPhenotypeStiffnessMax);

enum class MutationOp { AddNode, AddLink, RemoveLink, PerturbWeight, ChangeActivation };

inline constexpr int kMaxMutationAttempts = 10;
inline constexpr double kWeightPerturbationStddev = 0.5;

// Applies one operator to a network. Returns nullopt when the operator does
// not apply (e.g. removing a link from a linkless network).
std::optional<Cppn> apply_mutation(const Cppn& net, MutationOp op, Rng& rng);

// Each network is selected with probability 1/2 (one uniformly if none is);
// each selected network receives one uniformly drawn operator, redrawn up to
// kMaxMutationAttempts times while inapplicable. The child gets child_id and
// parent_id = parent.id.
Genome mutate(const Genome& parent, Rng& rng, GenomeId child_id);

}  // namespace voxelforge::genome

