#pragma once

#include "spopo/config.hpp"
#include "spopo/supermodes.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spopo {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int above_threshold = 3;
inline constexpr int solver_failure = 4;
inline constexpr int verification_failure = 5;
}  // namespace exit_code

enum class Command { Analyze, Squeeze, Homodyne, Verify };

// Everything derived from a config before any command-specific work.
struct System {
  CouplingMatrix coupling;
  SupermodeSet modes;
  double P0 = 0.0;
  double P_thr = 0.0;
  PumpDrive drive;
};

System build_system(const RunConfig& config);

struct OutputFile {
  std::string name;
  std::string content;
};

// Outputs are assembled in memory first, so a failing command leaves no files.
struct RunResult {
  int exit_code = exit_code::ok;
  std::vector<OutputFile> files;
};

RunResult run_analyze(const RunConfig& config);
RunResult run_squeeze(const RunConfig& config);
RunResult run_homodyne(const RunConfig& config);
RunResult run_verify(const RunConfig& config);

RunResult run_command(Command command, const RunConfig& config);

void write_outputs(const std::filesystem::path& dir, const std::vector<OutputFile>& files);

/// `spopo analyze|squeeze|homodyne|verify --config <path> --out <dir> [--seed <u64>]`
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace spopo
