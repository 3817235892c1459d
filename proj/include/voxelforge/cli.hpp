#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace voxelforge::cli {

// Exit statuses shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;      // runtime failure (I/O, simulation)
inline constexpr int kExitInvalidInput = 2; // bad configuration, genome or arguments

struct EvolveOptions {
  std::filesystem::path config;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

struct SimulateOptions {
  std::filesystem::path genome;
  std::string rule;
  std::filesystem::path out;
  std::optional<std::filesystem::path> config;
};

struct AnalyzeOptions {
  std::filesystem::path champions;
  std::string kind;  // diversity | robustness | canalization | compare
  std::filesystem::path out;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
};

int cmd_evolve(const EvolveOptions& options);
int cmd_simulate(const SimulateOptions& options);
int cmd_analyze(const AnalyzeOptions& options);

// Parses argv and dispatches; the log level comes from VOXELFORGE_LOG.
int run(int argc, char** argv);

}  // namespace voxelforge::cli
