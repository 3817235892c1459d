#include "voxelforge/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "voxelforge/physics.hpp"
#include "voxelforge/rng.hpp"

namespace voxelforge::evolution {

namespace {

// Highest fitness, then youngest, then lowest position.
std::size_t best_index(const std::vector<Individual>& population) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    const auto& a = population[i];
    const auto& b = population[best];
    if (a.fitness > b.fitness || (a.fitness == b.fitness && a.age < b.age)) best = i;
  }
  return best;
}

bool any_dominated(const std::vector<Individual>& population) {
  for (const auto& a : population) {
    for (const auto& b : population) {
      if (dominates(a, b)) return true;
    }
  }
  return false;
}

void erase_at(std::vector<Individual>& population, std::size_t i) {
  population.erase(population.begin() + static_cast<std::ptrdiff_t>(i));
}

Individual fresh(std::shared_ptr<const Genome> genome, int age) {
  Individual ind;
  ind.genome = std::move(genome);
  ind.age = age;
  return ind;
}

}  // namespace

void EvolutionConfig::validate() const {
  std::vector<std::string> keys;
  std::string message;
  auto fail = [&](const char* key, const char* what) {
    keys.emplace_back(key);
    if (!message.empty()) message += "; ";
    message += what;
  };
  if (population_size < 2) fail("population_size", "population_size must be >= 2");
  if (generations < 0) fail("generations", "generations must be >= 0");
  if (checkpoint_interval < 1) fail("checkpoint_interval", "checkpoint_interval must be >= 1");
  if (jobs < 1) fail("jobs", "jobs must be >= 1");
  if (dims.x < 1 || dims.y < 1 || dims.z < 1) fail("dims", "lattice dims must be >= 1");
  try {
    lattice.validate();
  } catch (const ConfigError& e) {
    for (const auto& k : e.keys()) keys.push_back(k);
    if (!message.empty()) message += "; ";
    message += e.what();
  }
  if (lattice.k_min < kPhenotypeStiffnessMin || lattice.k_max > kPhenotypeStiffnessMax) {
    fail("k_min", "stiffness range must lie within [1e4, 1e10] Pa");
    keys.emplace_back("k_max");
  }
  if (!keys.empty()) throw ConfigError(std::move(keys), message);
}

bool dominates(const Individual& a, const Individual& b) {
  return a.fitness >= b.fitness && a.age <= b.age && (a.fitness > b.fitness || a.age < b.age);
}

Evaluator make_simulation_evaluator(const Dims& dims, const LatticeConfig& config,
                                    DevelopmentRule rule) {
  return [dims, config, rule](const Genome& g) -> Evaluation {
    const auto phenotype = genome::express(g, dims, config.k_min, config.k_max);
    if (!phenotype) return {0.0, false};
    const auto result = physics::simulate(*phenotype, config, rule);
    if (result.unstable) return {0.0, true};
    return {result.displacement_xy, false};
  };
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1u), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(work);
  work();
  threads.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void evaluate_population(std::vector<Individual>& population, const Evaluator& evaluator,
                         unsigned jobs) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!population[i].evaluated) pending.push_back(i);
  }
  parallel_for(pending.size(), jobs, [&](std::size_t p) {
    Individual& ind = population[pending[p]];
    try {
      const Evaluation e = evaluator(*ind.genome);
      ind.fitness = std::isfinite(e.fitness) ? std::max(e.fitness, 0.0) : 0.0;
      ind.unstable = e.unstable;
    } catch (const std::exception&) {
      ind.fitness = 0.0;
      ind.unstable = true;
    }
    ind.evaluated = true;
  });
}

std::vector<Individual> expand_population(const std::vector<Individual>& population, Rng& rng,
                                          genome::IdAllocator& ids) {
  std::vector<Individual> out;
  out.reserve(2 * population.size() + 1);
  for (const auto& parent : population) {
    Individual p = parent;
    ++p.age;
    out.push_back(std::move(p));
  }
  for (const auto& parent : population) {
    auto child = std::make_shared<const Genome>(genome::mutate(*parent.genome, rng, ids.next()));
    out.push_back(fresh(std::move(child), parent.age + 1));
  }
  out.push_back(fresh(std::make_shared<const Genome>(genome::random_genome(rng, ids.next())), 0));
  return out;
}

void select_survivors(std::vector<Individual>& population, std::size_t target, Rng& rng) {
  bool dominated_left = any_dominated(population);
  while (population.size() > target && dominated_left) {
    const std::size_t i = rng.index(population.size());
    std::size_t j = rng.index(population.size() - 1);
    if (j >= i) ++j;
    if (dominates(population[i], population[j])) {
      erase_at(population, j);
    } else if (dominates(population[j], population[i])) {
      erase_at(population, i);
    } else {
      continue;
    }
    dominated_left = any_dominated(population);
  }
  while (population.size() > target) {
    const std::size_t keep = best_index(population);
    std::vector<std::size_t> oldest;
    for (std::size_t i = 0; i < population.size(); ++i) {
      if (i == keep) continue;
      if (oldest.empty()) {
        oldest.push_back(i);
        continue;
      }
      const auto& a = population[i];
      const auto& b = population[oldest.front()];
      if (a.age > b.age || (a.age == b.age && a.fitness < b.fitness)) {
        oldest.assign(1, i);
      } else if (a.age == b.age && a.fitness == b.fitness) {
        oldest.push_back(i);
      }
    }
    erase_at(population, oldest[rng.index(oldest.size())]);
  }
}

GenerationOutcome afpo_generation(const std::vector<Individual>& population, Rng& rng,
                                  const Evaluator& evaluator, genome::IdAllocator& ids,
                                  unsigned jobs) {
  GenerationOutcome out;
  out.population = expand_population(population, rng, ids);
  out.intermediate_size = out.population.size();
  evaluate_population(out.population, evaluator, jobs);
  select_survivors(out.population, population.size(), rng);
  return out;
}

GenerationRecord summarize(int generation, const std::vector<Individual>& population) {
  GenerationRecord r;
  r.generation = generation;
  if (population.empty()) return r;
  const auto& best = population[best_index(population)];
  r.best_fitness = best.fitness;
  r.best_age = best.age;
  r.best_id = best.id();
  std::vector<double> f;
  f.reserve(population.size());
  double sum = 0.0;
  for (const auto& ind : population) {
    f.push_back(ind.fitness);
    sum += ind.fitness;
  }
  r.mean_fitness = sum / static_cast<double>(f.size());
  std::sort(f.begin(), f.end());
  const std::size_t m = f.size() / 2;
  r.median_fitness = f.size() % 2 == 1 ? f[m] : 0.5 * (f[m - 1] + f[m]);
  return r;
}

std::vector<std::size_t> pareto_front(const std::vector<Individual>& population) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < population.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < population.size() && !dominated; ++j) {
      dominated = dominates(population[j], population[i]);
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

TrialResult run_trial(const EvolutionConfig& config, const Evaluator& evaluator,
                      const ProgressCallback& progress) {
  config.validate();
  Rng rng(config.seed);
  genome::IdAllocator ids;

  std::vector<Individual> population;
  population.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    population.push_back(
        fresh(std::make_shared<const Genome>(genome::random_genome(rng, ids.next())), 0));
  }
  evaluate_population(population, evaluator, config.jobs);

  TrialResult result;
  bool have_champion = false;
  auto observe = [&](int generation) {
    for (const auto& ind : population) {
      if (!have_champion || ind.fitness > result.champion.fitness) {
        result.champion = ind;
        have_champion = true;
      }
    }
    const GenerationRecord record = summarize(generation, population);
    result.log.generations.push_back(record);
    if (generation % config.checkpoint_interval == 0 || generation == config.generations) {
      result.log.snapshots.push_back({generation, result.champion});
    }
    if (progress) progress(record);
  };

  observe(0);
  for (int g = 1; g <= config.generations; ++g) {
    population = afpo_generation(population, rng, evaluator, ids, config.jobs).population;
    observe(g);
  }
  return result;
}

TrialResult run_trial(const EvolutionConfig& config) {
  return run_trial(config, make_simulation_evaluator(config.dims, config.lattice,
                                                     config.development_rule));
}

}  // namespace voxelforge::evolution
