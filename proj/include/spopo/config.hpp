#pragma once

#include "spopo/params.hpp"
#include "spopo/phase_matching.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace spopo {

// Malformed or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct PumpConfig {
  std::optional<double> delta_p;        // Gaussian comb
  std::filesystem::path file;           // or measured spectrum
  std::optional<int> half_width;        // Gaussian sampling window, default 2 M
};

struct DriveConfig {
  enum class Kind { Power, Rate } kind = Kind::Rate;
  double value = 0.0;  // P in W/m^2 or r
};

struct LocalOscillatorConfig {
  std::optional<int> supermode;
  std::filesystem::path file;
  double theta = 0.0;
};

struct AnalysisConfig {
  double omega_max = 0.0;  // rad/s
  int points = 101;
  int supermodes = 1;
  std::optional<LocalOscillatorConfig> lo;
  bool dump_coupling = false;
};

struct VerifyConfig {
  std::optional<bool> analytic_case;  // default: Gaussian pump with exponential phase matching
  int trajectories = 2000;
  std::uint64_t seed = 1;
  int stochastic_max_modes = 64;
  double stochastic_duration_gamma = 400.0;
  double stochastic_step_gamma = 0.05;
  int decay_modes = 3;
  double decay_horizon_gamma = 10.0;
  int covariance_frequencies = 5;
};

struct RunConfig {
  PhysicalParams physical;
  PumpConfig pump;
  DispersionParams dispersion;
  PhaseMatchModel phase_match = SincPhaseMatch{};
  std::optional<int> window_half_width;
  DriveConfig drive;
  AnalysisConfig analysis;
  VerifyConfig verify;
};

/// Parses the JSON run configuration. Relative file paths are resolved
/// against base_dir. Unknown keys are errors.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace spopo
