#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "voxelforge/analysis.hpp"
#include "voxelforge/cli.hpp"
#include "voxelforge/evolution.hpp"
#include "voxelforge/physics.hpp"
#include "voxelforge/rng.hpp"
#include "voxelforge/serialization.hpp"

namespace voxelforge::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Input the user has to fix; reported and mapped to kExitInvalidInput.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned resolve_jobs(unsigned jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

io::RunConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
  try {
    return io::parse_run_config(text);
  } catch (const ConfigError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json champion_json(const evolution::Individual& ind, int generation) {
  Json j = io::genome_to_json(*ind.genome);
  j["fitness"] = ind.fitness;
  j["age"] = ind.age;
  j["generation"] = generation;
  return j;
}

std::string snapshot_name(int generation, genome::GenomeId id) {
  return "gen" + std::to_string(generation) + "_id" + std::to_string(id) + ".json";
}

template <typename F>
int guarded(const char* command, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    spdlog::error("{}: {}", command, e.what());
    return kExitInvalidInput;
  } catch (const io::FormatError& e) {
    spdlog::error("{}: {}", command, e.what());
    return kExitInvalidInput;
  } catch (const ConfigError& e) {
    spdlog::error("{}: {}", command, e.what());
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    spdlog::error("{}: {}", command, e.what());
    return kExitFailure;
  }
}

// ---- analysis inputs ----

struct LoadedChampion {
  std::string label;  // run directory name / genome id
  io::RunConfig config;
  analysis::ChampionRecord record;
};

std::vector<fs::path> run_directories(const fs::path& root) {
  std::vector<fs::path> dirs;
  auto consider = [&](const fs::path& d) {
    if (fs::exists(d / "manifest.json") && fs::exists(d / "champion.json")) dirs.push_back(d);
  };
  if (!fs::is_directory(root)) throw InputError("not a directory: " + root.string());
  consider(root);
  std::vector<fs::path> children;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) children.push_back(entry.path());
  }
  std::sort(children.begin(), children.end());
  for (const auto& c : children) consider(c);
  return dirs;
}

LoadedChampion load_champion(const fs::path& dir) {
  const Json manifest = Json::parse(io::read_text(dir / "manifest.json"));
  if (!manifest.contains("config")) throw InputError((dir / "manifest.json").string() + ": no config");
  const io::RunConfig config = io::run_config_from_json(manifest.at("config"));
  const Json stored = Json::parse(io::read_text(dir / "champion.json"));
  const genome::Genome g = io::genome_from_json(stored);
  const auto& evo = config.evolution;
  auto phenotype = genome::express(g, evo.dims, evo.lattice.k_min, evo.lattice.k_max);
  if (!phenotype) throw InputError((dir / "champion.json").string() + ": genome expresses no body");

  const auto result = physics::simulate(*phenotype, evo.lattice, evo.development_rule);
  const double fitness = result.unstable ? 0.0 : result.displacement_xy;
  if (stored.contains("fitness") && stored.at("fitness").get<double>() != fitness) {
    throw InputError((dir / "champion.json").string() +
                     ": stored fitness does not match re-simulation");
  }
  return {dir.filename().string() + "/" + std::to_string(g.id), config,
          analysis::ChampionRecord{g, std::move(*phenotype), fitness, evo.development_rule,
                                   result.final_stiffness}};
}

std::vector<double> present_values(const Phenotype& p, const std::vector<double>& field) {
  std::vector<double> out;
  out.reserve(p.voxel_count());
  for (std::size_t cell : p.voxels()) out.push_back(field[cell]);
  return out;
}

struct Row {
  std::string champion;
  std::string metric;
  double value;
};

void write_rows(const fs::path& path, const std::vector<Row>& rows) {
  std::ostringstream s;
  s << "champion_id,metric,value\n";
  for (const auto& r : rows) {
    s << r.champion << ',' << r.metric << ',' << io::format_double(r.value) << '\n';
  }
  io::write_text(path, s.str());
}

std::string group_name(const LoadedChampion& c) {
  return std::string(development::to_string(c.record.rule));
}

// Canalization metrics per champion; gain bounds are taken over each
// champion's treatment group.
std::map<std::string, std::vector<std::pair<std::string, double>>> canalization_metrics(
    const std::vector<LoadedChampion>& champions) {
  std::map<std::string, std::vector<std::vector<double>>> gains;
  for (const auto& c : champions) {
    gains[group_name(c)].push_back(present_values(c.record.phenotype, c.record.phenotype.alpha()));
  }
  std::map<std::string, analysis::GainBounds> bounds;
  for (const auto& [group, g] : gains) bounds[group] = analysis::gain_bounds(g);

  std::map<std::string, std::vector<std::pair<std::string, double>>> out;
  for (const auto& c : champions) {
    const auto& p = c.record.phenotype;
    const auto k0 = present_values(p, p.stiffness());
    const auto& b = bounds[group_name(c)];
    const auto alpha = present_values(p, p.alpha());
    auto& m = out[c.label];
    m.emplace_back("m_body", analysis::m_body(k0, c.record.final_stiffness));
    m.emplace_back("v_body", analysis::v_body(k0, c.record.final_stiffness));
    m.emplace_back("v_gain", b.max > b.min ? analysis::v_gain(alpha, b.min, b.max) : 0.0);
  }
  return out;
}

Json group_means(const std::vector<LoadedChampion>& champions, const std::vector<Row>& rows) {
  std::map<std::string, std::string> group_of;
  for (const auto& c : champions) group_of[c.label] = group_name(c);
  std::map<std::string, std::map<std::string, std::vector<double>>> values;
  for (const auto& r : rows) {
    const auto it = group_of.find(r.champion);
    if (it != group_of.end()) values[it->second][r.metric].push_back(r.value);
  }
  Json j = Json::object();
  for (const auto& [group, metrics] : values) {
    for (const auto& [metric, v] : metrics) j[group][metric] = analysis::mean(v);
  }
  return j;
}

}  // namespace

int cmd_evolve(const EvolveOptions& options) {
  return guarded("evolve", [&] {
    io::RunConfig config = load_config(options.config);
    config.evolution.seed = options.seed;
    config.evolution.jobs = resolve_jobs(options.jobs);
    try {
      ensure_directory(options.out);
    } catch (const std::runtime_error& e) {
      spdlog::error("evolve: {}", e.what());
      return kExitFailure;
    }

    const std::string started = utc_now();
    spdlog::info("evolve: seed {}, {} generations, population {}, rule {}, {} jobs", options.seed,
                 config.evolution.generations, config.evolution.population_size,
                 development::to_string(config.evolution.development_rule),
                 config.evolution.jobs);
    const auto result = evolution::run_trial(
        config.evolution,
        evolution::make_simulation_evaluator(config.evolution.dims, config.evolution.lattice,
                                             config.evolution.development_rule),
        [](const evolution::GenerationRecord& r) {
          spdlog::debug("generation {}: best {:.4f} (id {}, age {}), mean {:.4f}", r.generation,
                        r.best_fitness, r.best_id, r.best_age, r.mean_fitness);
        });

    std::ostringstream log;
    io::write_run_log(log, result.log.generations);
    io::write_text(options.out / "log.csv", log.str());

    Json artifacts = Json::array({"log.csv", "champion.json"});
    for (const auto& s : result.log.snapshots) {
      const std::string name = snapshot_name(s.generation, s.champion.id());
      io::write_text(options.out / name, dump(champion_json(s.champion, s.generation)));
      artifacts.push_back(name);
    }
    io::write_text(options.out / "champion.json",
                   dump(champion_json(result.champion, config.evolution.generations)));

    Json manifest;
    manifest["tool"] = "voxelforge";
    manifest["version"] = kToolVersion;
    manifest["command"] = "evolve";
    manifest["seed"] = options.seed;
    manifest["config"] = io::run_config_to_json(config);
    manifest["artifacts"] = std::move(artifacts);
    manifest["champion_id"] = result.champion.id();
    manifest["champion_fitness"] = result.champion.fitness;
    manifest["started"] = started;
    manifest["finished"] = utc_now();
    io::write_text(options.out / "manifest.json", dump(manifest));

    spdlog::info("evolve: champion {} at {:.4f} voxel lengths", result.champion.id(),
                 result.champion.fitness);
    return kExitOk;
  });
}

int cmd_simulate(const SimulateOptions& options) {
  return guarded("simulate", [&] {
    development::DevelopmentRule rule;
    try {
      rule = development::parse_rule(options.rule);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    io::RunConfig config;
    if (options.config) config = load_config(*options.config);

    genome::Genome g;
    try {
      g = io::load_genome(options.genome);
    } catch (const io::FormatError& e) {
      throw InputError(options.genome.string() + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }

    const auto& evo = config.evolution;
    const auto phenotype = genome::express(g, evo.dims, evo.lattice.k_min, evo.lattice.k_max);
    if (!phenotype) throw InputError(options.genome.string() + ": genome expresses no body");
    ensure_directory(options.out);

    const auto result = physics::simulate(*phenotype, evo.lattice, rule);
    std::ostringstream trajectory;
    io::write_trajectory(trajectory, result);
    io::write_text(options.out / "trajectory.csv", trajectory.str());
    io::write_text(options.out / "final_state.json",
                   dump(io::final_state_to_json(*phenotype, result)));

    if (result.unstable) spdlog::warn("simulate: integration became unstable");
    std::cout << io::format_double(result.unstable ? 0.0 : result.displacement_xy) << '\n';
    return kExitOk;
  });
}

int cmd_analyze(const AnalyzeOptions& options) {
  return guarded("analyze", [&] {
    const std::string& kind = options.kind;
    if (kind != "diversity" && kind != "robustness" && kind != "canalization" &&
        kind != "compare") {
      throw InputError("unknown analysis kind '" + kind + "'");
    }
    std::vector<LoadedChampion> champions;
    for (const auto& dir : run_directories(options.champions)) {
      champions.push_back(load_champion(dir));
    }
    if (champions.empty()) {
      throw InputError("no champion with manifest under " + options.champions.string());
    }
    ensure_directory(options.out);

    std::vector<Row> rows;
    Json summary;
    summary["kind"] = kind;
    summary["champions"] = champions.size();

    if (kind == "diversity") {
      if (champions.size() < 2) throw InputError("diversity needs >= 2 champions");
      const Dims dims = champions.front().record.phenotype.dims();
      for (const auto& c : champions) {
        if (!(c.record.phenotype.dims() == dims)) {
          throw InputError("champions use different lattice dims");
        }
      }
      std::vector<double> all;
      for (std::size_t i = 0; i < champions.size(); ++i) {
        for (std::size_t j = i + 1; j < champions.size(); ++j) {
          const double d = analysis::min_rotation_hausdorff(
              analysis::voxel_set(champions[i].record.phenotype),
              analysis::voxel_set(champions[j].record.phenotype), dims);
          rows.push_back({champions[i].label + "~" + champions[j].label, "hausdorff", d});
          all.push_back(d);
        }
      }
      summary["mean_hausdorff"] = analysis::mean(all);
    } else if (kind == "robustness") {
      const std::size_t n = options.samples.value_or(champions.front().config.robustness_samples);
      Rng rng(options.seed);
      for (const auto& c : champions) {
        if (!(c.record.train_fitness > 0.0)) {
          spdlog::warn("analyze: skipping {} (zero training fitness)", c.label);
          continue;
        }
        const auto& lattice = c.config.evolution.lattice;
        const auto r = analysis::robustness_experiment(
            c.record, n, rng, lattice,
            analysis::log_uniform_stiffness(lattice.k_min, lattice.k_max),
            resolve_jobs(options.jobs));
        for (double v : r) rows.push_back({c.label, "R", v});
      }
      summary["group_means"] = group_means(champions, rows);
    } else if (kind == "canalization") {
      for (const auto& [label, metrics] : canalization_metrics(champions)) {
        for (const auto& [metric, value] : metrics) rows.push_back({label, metric, value});
      }
      summary["group_means"] = group_means(champions, rows);
    } else {
      std::map<std::string, std::vector<const LoadedChampion*>> groups;
      for (const auto& c : champions) groups[group_name(c)].push_back(&c);
      if (groups.size() < 2) throw InputError("compare needs >= 2 groups");

      const auto canal = canalization_metrics(champions);
      std::map<std::string, std::map<std::string, std::vector<double>>> samples;
      for (const auto& c : champions) {
        samples[group_name(c)]["fitness"].push_back(c.record.train_fitness);
        rows.push_back({c.label, "fitness", c.record.train_fitness});
        for (const auto& [metric, value] : canal.at(c.label)) {
          samples[group_name(c)][metric].push_back(value);
          rows.push_back({c.label, metric, value});
        }
      }
      const std::size_t pairs = groups.size() * (groups.size() - 1) / 2;
      const std::size_t resamples = champions.front().config.bootstrap_resamples;
      Rng rng(options.seed);
      Json tests = Json::array();
      for (auto a = groups.begin(); a != groups.end(); ++a) {
        for (auto b = std::next(a); b != groups.end(); ++b) {
          for (const char* metric : {"fitness", "m_body", "v_body", "v_gain"}) {
            const auto& sa = samples[a->first][metric];
            const auto& sb = samples[b->first][metric];
            Json t{{"metric", metric}, {"group_a", a->first}, {"group_b", b->first},
                   {"mean_a", analysis::mean(sa)}, {"mean_b", analysis::mean(sb)}};
            if (sa.size() < 2 || sb.size() < 2) {
              t["p"] = nullptr;
              t["stars"] = "n/a";
            } else {
              const auto r = analysis::bootstrap_test(sa, sb, resamples, pairs, rng);
              t["p_raw"] = r.raw_p;
              t["p"] = r.corrected_p;
              t["stars"] = analysis::significance_stars(r.corrected_p);
            }
            tests.push_back(std::move(t));
          }
        }
      }
      summary["comparisons"] = pairs;
      summary["tests"] = std::move(tests);
      summary["group_means"] = group_means(champions, rows);
    }

    write_rows(options.out / (kind + ".csv"), rows);
    io::write_text(options.out / (kind + ".json"), dump(summary));
    spdlog::info("analyze: {} rows written for {} champions", rows.size(), champions.size());
    return kExitOk;
  });
}

int run(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("voxelforge");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("VOXELFORGE_LOG")) {
    const std::string l = level;
    if (l == "error" || l == "info" || l == "debug") {
      spdlog::set_level(spdlog::level::from_str(l));
    } else {
      spdlog::warn("ignoring VOXELFORGE_LOG={} (expected error, info or debug)", l);
    }
  }

  CLI::App app{"Voxel soft-robot evolution with closed-loop stiffness development"};
  app.require_subcommand(1);

  EvolveOptions evolve;
  auto* e = app.add_subcommand("evolve", "Run one evolutionary trial");
  e->add_option("--config", evolve.config, "JSON configuration")->required();
  e->add_option("--seed", evolve.seed, "Random seed")->required();
  e->add_option("--out", evolve.out, "Output directory")->required();
  e->add_option("--jobs", evolve.jobs, "Evaluation threads (default: all cores)");

  SimulateOptions simulate;
  auto* s = app.add_subcommand("simulate", "Express and simulate one genome");
  s->add_option("--genome", simulate.genome, "Genome JSON")->required();
  s->add_option("--rule", simulate.rule, "none | stress | pressure")->required();
  s->add_option("--out", simulate.out, "Output directory")->required();
  s->add_option("--config", simulate.config, "JSON configuration");

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Analyse stored champions");
  a->add_option("--champions", analyze.champions, "Directory of evolve outputs")->required();
  a->add_option("--kind", analyze.kind, "diversity | robustness | canalization | compare")
      ->required();
  a->add_option("--out", analyze.out, "Output directory")->required();
  a->add_option("--samples", analyze.samples, "Stiffness redraws per champion");
  a->add_option("--seed", analyze.seed, "Random seed");
  a->add_option("--jobs", analyze.jobs, "Simulation threads (default: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  if (e->parsed()) return cmd_evolve(evolve);
  if (s->parsed()) return cmd_simulate(simulate);
  return cmd_analyze(analyze);
}

}  // namespace voxelforge::cli
