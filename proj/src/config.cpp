#include "spopo/config.hpp"

#include <json.hpp>

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace spopo {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::filesystem::path resolve(const json& v, const std::filesystem::path& base, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a path string");
  std::filesystem::path p = v.get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  if (!std::filesystem::exists(p)) throw ConfigError(where + ": file '" + p.string() + "' does not exist");
  return p;
}

PhysicalParams parse_physical(const json& j) {
  check_keys(j, {"gamma_s", "gamma_p", "n0", "chi", "l", "omega0", "Omega"}, "physical");
  PhysicalParams p;
  p.gamma_s = number(j, "gamma_s", "physical");
  p.gamma_p = number(j, "gamma_p", "physical");
  p.n0 = number(j, "n0", "physical");
  p.chi = number(j, "chi", "physical");
  p.l = number(j, "l", "physical");
  p.omega0 = number(j, "omega0", "physical");
  p.Omega = number(j, "Omega", "physical");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

PumpConfig parse_pump(const json& j, const std::filesystem::path& base) {
  check_keys(j, {"delta_p", "half_width", "file"}, "pump");
  PumpConfig pump;
  if (j.contains("delta_p") == j.contains("file")) throw ConfigError("pump: give exactly one of 'delta_p' or 'file'");
  if (j.contains("delta_p")) {
    pump.delta_p = number(j, "delta_p", "pump");
    if (!(*pump.delta_p > 0.0)) throw ConfigError("pump.delta_p must be > 0");
    if (j.contains("half_width")) pump.half_width = integer(j, "half_width", "pump");
  } else {
    if (j.contains("half_width")) throw ConfigError("pump.half_width only applies to a Gaussian pump");
    pump.file = resolve(j.at("file"), base, "pump.file");
  }
  return pump;
}

DispersionParams parse_dispersion(const json& j, const PhysicalParams& physical) {
  check_keys(j, {"beta1", "beta2p", "beta2s", "kp_prime", "ks_prime", "kp_doubleprime", "ks_doubleprime"},
             "dispersion");
  const bool direct = j.contains("beta1") || j.contains("beta2p") || j.contains("beta2s");
  const bool material = j.contains("kp_prime") || j.contains("ks_prime") || j.contains("kp_doubleprime") ||
                        j.contains("ks_doubleprime");
  if (direct && material) throw ConfigError("dispersion: mix of beta coefficients and material derivatives");
  if (material) {
    // Derivatives in s/m and s^2/m; Omega and l come from the physical block.
    return betas_from_material(number(j, "kp_prime", "dispersion"), number(j, "ks_prime", "dispersion"),
                               number(j, "kp_doubleprime", "dispersion"), number(j, "ks_doubleprime", "dispersion"),
                               physical.Omega, physical.l);
  }
  DispersionParams d;
  if (j.contains("beta1")) d.beta1 = number(j, "beta1", "dispersion");
  if (j.contains("beta2p")) d.beta2p = number(j, "beta2p", "dispersion");
  if (j.contains("beta2s")) d.beta2s = number(j, "beta2s", "dispersion");
  return d;
}

PhaseMatchModel parse_phase_match(const json& j) {
  check_keys(j, {"model", "eta"}, "phase_match");
  if (!j.contains("model") || !j.at("model").is_string()) throw ConfigError("phase_match.model: expected a string");
  const std::string model = j.at("model").get<std::string>();
  if (model == "sinc") {
    if (j.contains("eta")) throw ConfigError("phase_match.eta only applies to the exponential model");
    return SincPhaseMatch{};
  }
  if (model == "exponential") {
    const double eta = number(j, "eta", "phase_match");
    if (!(eta > 0.0)) throw ConfigError("phase_match.eta must be > 0");
    return ExponentialPhaseMatch{eta};
  }
  throw ConfigError("phase_match.model: expected 'sinc' or 'exponential', got '" + model + "'");
}

DriveConfig parse_drive(const json& j) {
  check_keys(j, {"P", "r"}, "drive");
  if (j.contains("P") == j.contains("r")) throw ConfigError("drive: give exactly one of 'P' or 'r'");
  DriveConfig d;
  if (j.contains("P")) {
    d.kind = DriveConfig::Kind::Power;
    d.value = number(j, "P", "drive");
  } else {
    d.kind = DriveConfig::Kind::Rate;
    d.value = number(j, "r", "drive");
  }
  if (!(d.value >= 0.0)) throw ConfigError("drive: value must be >= 0");
  return d;
}

AnalysisConfig parse_analysis(const json& j, const PhysicalParams& physical, const std::filesystem::path& base) {
  check_keys(j, {"omega_max", "f_max_hz", "points", "supermodes", "lo", "dump_coupling"}, "analysis");
  AnalysisConfig a;
  a.omega_max = 4.0 * physical.gamma_s;
  if (j.contains("omega_max") && j.contains("f_max_hz"))
    throw ConfigError("analysis: give at most one of 'omega_max' and 'f_max_hz'");
  if (j.contains("omega_max")) a.omega_max = number(j, "omega_max", "analysis");
  // Hz is accepted only here; everything downstream is rad/s.
  if (j.contains("f_max_hz")) a.omega_max = 2.0 * std::numbers::pi * number(j, "f_max_hz", "analysis");
  if (j.contains("points")) a.points = integer(j, "points", "analysis");
  if (j.contains("supermodes")) a.supermodes = integer(j, "supermodes", "analysis");
  if (j.contains("dump_coupling")) {
    if (!j.at("dump_coupling").is_boolean()) throw ConfigError("analysis.dump_coupling: expected a boolean");
    a.dump_coupling = j.at("dump_coupling").get<bool>();
  }
  if (a.points < 1) throw ConfigError("analysis.points must be >= 1");
  if (a.points > 1 && !(a.omega_max > 0.0)) throw ConfigError("analysis: omega_max must be > 0");
  if (a.supermodes < 0) throw ConfigError("analysis.supermodes must be >= 0");
  if (j.contains("lo")) {
    const json& lo = j.at("lo");
    check_keys(lo, {"supermode", "file", "theta"}, "analysis.lo");
    LocalOscillatorConfig c;
    if (lo.contains("supermode") == lo.contains("file"))
      throw ConfigError("analysis.lo: give exactly one of 'supermode' or 'file'");
    if (lo.contains("supermode")) {
      c.supermode = integer(lo, "supermode", "analysis.lo");
      if (*c.supermode < 0) throw ConfigError("analysis.lo.supermode must be >= 0");
    } else {
      c.file = resolve(lo.at("file"), base, "analysis.lo.file");
    }
    c.theta = number(lo, "theta", "analysis.lo");
    a.lo = c;
  }
  return a;
}

VerifyConfig parse_verify(const json& j) {
  check_keys(j, {"analytic_case", "trajectories", "seed", "stochastic_max_modes", "stochastic_duration_gamma",
                 "stochastic_step_gamma", "decay_modes", "decay_horizon_gamma", "covariance_frequencies"},
             "verify");
  VerifyConfig v;
  if (j.contains("analytic_case")) {
    if (!j.at("analytic_case").is_boolean()) throw ConfigError("verify.analytic_case: expected a boolean");
    v.analytic_case = j.at("analytic_case").get<bool>();
  }
  if (j.contains("trajectories")) v.trajectories = integer(j, "trajectories", "verify");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("verify.seed: expected a non-negative integer");
    v.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("stochastic_max_modes")) v.stochastic_max_modes = integer(j, "stochastic_max_modes", "verify");
  if (j.contains("stochastic_duration_gamma"))
    v.stochastic_duration_gamma = number(j, "stochastic_duration_gamma", "verify");
  if (j.contains("stochastic_step_gamma")) v.stochastic_step_gamma = number(j, "stochastic_step_gamma", "verify");
  if (j.contains("decay_modes")) v.decay_modes = integer(j, "decay_modes", "verify");
  if (j.contains("decay_horizon_gamma")) v.decay_horizon_gamma = number(j, "decay_horizon_gamma", "verify");
  if (j.contains("covariance_frequencies")) v.covariance_frequencies = integer(j, "covariance_frequencies", "verify");
  if (v.trajectories < 100) throw ConfigError("verify.trajectories must be >= 100");
  if (v.decay_modes < 0 || v.covariance_frequencies < 1 || v.stochastic_max_modes < 0)
    throw ConfigError("verify: counts out of range");
  if (!(v.decay_horizon_gamma >= 3.0)) throw ConfigError("verify.decay_horizon_gamma must be >= 3");
  if (!(v.stochastic_step_gamma > 0.0) || !(v.stochastic_duration_gamma > v.stochastic_step_gamma))
    throw ConfigError("verify: bad stochastic step or duration");
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"physical", "pump", "dispersion", "phase_match", "window", "drive", "analysis", "verify"}, "config");
  for (const char* required : {"physical", "pump", "drive"})
    if (!j.contains(required)) throw ConfigError(std::string("config: missing '") + required + "'");

  try {
    RunConfig c;
    c.physical = parse_physical(j.at("physical"));
    c.pump = parse_pump(j.at("pump"), base_dir);
    if (j.contains("dispersion")) c.dispersion = parse_dispersion(j.at("dispersion"), c.physical);
    if (j.contains("phase_match")) c.phase_match = parse_phase_match(j.at("phase_match"));
    if (j.contains("window")) {
      check_keys(j.at("window"), {"half_width"}, "window");
      if (!j.at("window").contains("half_width")) throw ConfigError("window: missing 'half_width'");
      c.window_half_width = integer(j.at("window"), "half_width", "window");
      if (*c.window_half_width < 0) throw ConfigError("window.half_width must be >= 0");
    }
    c.drive = parse_drive(j.at("drive"));
    c.analysis = parse_analysis(j.contains("analysis") ? j.at("analysis") : json::object(), c.physical, base_dir);
    if (j.contains("verify")) c.verify = parse_verify(j.at("verify"));
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace spopo
