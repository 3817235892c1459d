#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "voxelforge/evolution.hpp"
#include "voxelforge/genome.hpp"
#include "voxelforge/physics.hpp"

namespace voxelforge::io {

using Json = nlohmann::json;

// Malformed input. path() is a JSON pointer ("/networks/c2/links/3/weight")
// for JSON documents, or "line N" for CSV.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// {"id", "parent_id" (null for none), "networks": {"c1".."c4": {"nodes":
// [{"id", "activation"}], "links": [{"src", "dst", "weight", "enabled"}]}}}.
// c1..c4 are geometry, stiffness, gain and phase. Unknown keys are
// rejected except the champion metadata "fitness", "age" and "generation".
Json genome_to_json(const genome::Genome& g);
genome::Genome genome_from_json(const Json& j);

// Everything a run needs besides the CLI flags. Serialised as one flat JSON
// object whose keys are the field names (lattice fields unprefixed, lattice
// size as dims_x/dims_y/dims_z, rule as "none"/"stress"/"pressure").
struct RunConfig {
  evolution::EvolutionConfig evolution;
  std::size_t robustness_samples = 10;
  std::size_t bootstrap_resamples = 10000;

  void validate() const;  // throws ConfigError
};

Json run_config_to_json(const RunConfig& c);
// Rejects unknown keys and wrong types; any ConfigError message is prefixed
// with "line N:" pointing at the first offending key in `text`.
RunConfig parse_run_config(std::string_view text);
RunConfig run_config_from_json(const Json& j);

// Flat "key": value pairs of a lattice configuration.
Json lattice_to_json(const LatticeConfig& c);

// log.csv: generation,best_fitness,mean_fitness,median_fitness,best_age,best_id
void write_run_log(std::ostream& out, const std::vector<evolution::GenerationRecord>& rows);
std::vector<evolution::GenerationRecord> read_run_log(std::istream& in);

struct TrajectorySample {
  double t = 0.0;
  Vec3 com;
};

// t,com_x,com_y,com_z with 6 significant digits.
void write_trajectory(std::ostream& out, const physics::SimResult& result);
std::vector<TrajectorySample> read_trajectory(std::istream& in);

// Per voxel: {"index": [x, y, z], "k_congenital", "k_final", "peak_stress",
// "peak_pressure"}, wrapped with the displacement and stability flag.
Json final_state_to_json(const Phenotype& phenotype, const physics::SimResult& result);

std::string read_text(const std::filesystem::path& path);
// Writes via a temporary sibling and rename. Throws std::runtime_error.
void write_text(const std::filesystem::path& path, std::string_view text);

genome::Genome load_genome(const std::filesystem::path& path);

// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace voxelforge::io
