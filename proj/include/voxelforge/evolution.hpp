#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "voxelforge/config.hpp"
#include "voxelforge/development.hpp"
#include "voxelforge/genome.hpp"
#include "voxelforge/phenotype.hpp"

namespace voxelforge {
class Rng;
}

namespace voxelforge::evolution {

using development::DevelopmentRule;
using genome::Genome;
using genome::GenomeId;

// Unit of selection. Genomes are immutable and shared between copies.
struct Individual {
  std::shared_ptr<const Genome> genome;
  int age = 0;
  double fitness = 0.0;  // voxel lengths
  bool evaluated = false;
  bool unstable = false;

  GenomeId id() const { return genome->id; }
};

struct Evaluation {
  double fitness = 0.0;
  bool unstable = false;
};

// Must be safe to call concurrently from several threads.
using Evaluator = std::function<Evaluation(const Genome&)>;

struct EvolutionConfig {
  std::size_t population_size = 24;
  int generations = 5000;
  std::uint64_t seed = 1;
  DevelopmentRule development_rule = DevelopmentRule::None;
  LatticeConfig lattice;
  Dims dims;
  int checkpoint_interval = 100;
  unsigned jobs = 1;  // evaluation threads; results do not depend on it

  // Throws ConfigError.
  void validate() const;
};

// a dominates b: fitness no lower, age no higher, one of them strictly.
bool dominates(const Individual& a, const Individual& b);

// Expresses and simulates; no body or an unstable run scores 0.
Evaluator make_simulation_evaluator(const Dims& dims, const LatticeConfig& config,
                                    DevelopmentRule rule);

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

// Evaluates every unevaluated individual. A throwing evaluator yields
// fitness 0 with the unstable flag set.
void evaluate_population(std::vector<Individual>& population, const Evaluator& evaluator,
                         unsigned jobs);

// Doubling by one mutated child per parent (children inherit the parent's
// age), ages incremented, one random newcomer of age 0 appended.
std::vector<Individual> expand_population(const std::vector<Individual>& population, Rng& rng,
                                          genome::IdAllocator& ids);

// Reduces to `target` by random-pair tournaments that delete the dominated
// member; when no dominated individual is left, deletes the oldest (ties:
// lowest fitness, then random), never the current best.
void select_survivors(std::vector<Individual>& population, std::size_t target, Rng& rng);

struct GenerationOutcome {
  std::vector<Individual> population;
  std::size_t intermediate_size = 0;  // size before selection
};

GenerationOutcome afpo_generation(const std::vector<Individual>& population, Rng& rng,
                                  const Evaluator& evaluator, genome::IdAllocator& ids,
                                  unsigned jobs = 1);

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double median_fitness = 0.0;
  int best_age = 0;
  GenomeId best_id = 0;
  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

struct Snapshot {
  int generation = 0;
  Individual champion;
};

struct RunLog {
  std::vector<GenerationRecord> generations;
  std::vector<Snapshot> snapshots;
};

struct TrialResult {
  Individual champion;  // best ever observed, first encountered on ties
  RunLog log;
};

// Called after each generation (0 = initial population).
using ProgressCallback = std::function<void(const GenerationRecord&)>;

TrialResult run_trial(const EvolutionConfig& config, const Evaluator& evaluator,
                      const ProgressCallback& progress = {});
TrialResult run_trial(const EvolutionConfig& config);

GenerationRecord summarize(int generation, const std::vector<Individual>& population);

// Indices of the non-dominated individuals, by exhaustive comparison.
std::vector<std::size_t> pareto_front(const std::vector<Individual>& population);

}  // namespace voxelforge::evolution
