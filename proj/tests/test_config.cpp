#include "spopo/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <variant>

namespace spopo {
namespace {

const std::string kPhysical = R"("physical": {"gamma_s": 3.8e6, "gamma_p": 3.8e6, "n0": 1.66, "chi": 4.8e-12,
  "l": 0.002, "omega0": 2.35e15, "Omega": 4.775e8})";

std::string config_with(const std::string& extra) {
  return "{" + kPhysical + R"(, "pump": {"delta_p": 4}, "drive": {"r": 0.5})" + (extra.empty() ? "" : ", " + extra) + "}";
}

TEST(Config, MinimalDefaults) {
  const RunConfig c = parse_config(config_with(""));
  EXPECT_DOUBLE_EQ(c.physical.gamma_s, 3.8e6);
  ASSERT_TRUE(c.pump.delta_p.has_value());
  EXPECT_EQ(*c.pump.delta_p, 4.0);
  EXPECT_TRUE(std::holds_alternative<SincPhaseMatch>(c.phase_match));
  EXPECT_EQ(c.drive.kind, DriveConfig::Kind::Rate);
  EXPECT_EQ(c.drive.value, 0.5);
  EXPECT_FALSE(c.window_half_width.has_value());
  EXPECT_DOUBLE_EQ(c.analysis.omega_max, 4.0 * 3.8e6);
  EXPECT_EQ(c.verify.trajectories, 2000);
  EXPECT_EQ(c.verify.seed, 1u);
}

TEST(Config, FullSections) {
  const RunConfig c = parse_config(config_with(R"(
    "dispersion": {"beta1": 0.0, "beta2p": 0.001, "beta2s": 0.002},
    "phase_match": {"model": "exponential", "eta": 2.5},
    "window": {"half_width": 30},
    "analysis": {"f_max_hz": 1e6, "points": 11, "supermodes": 4, "lo": {"supermode": 2, "theta": 0.25}, "dump_coupling": true},
    "verify": {"seed": 18446744073709551615, "trajectories": 500, "analytic_case": false})"));
  EXPECT_EQ(c.dispersion.beta2s, 0.002);
  ASSERT_TRUE(std::holds_alternative<ExponentialPhaseMatch>(c.phase_match));
  EXPECT_EQ(std::get<ExponentialPhaseMatch>(c.phase_match).eta, 2.5);
  EXPECT_EQ(*c.window_half_width, 30);
  EXPECT_DOUBLE_EQ(c.analysis.omega_max, 2.0 * std::numbers::pi * 1e6);
  EXPECT_EQ(c.analysis.points, 11);
  ASSERT_TRUE(c.analysis.lo.has_value());
  EXPECT_EQ(*c.analysis.lo->supermode, 2);
  EXPECT_EQ(c.analysis.lo->theta, 0.25);
  EXPECT_TRUE(c.analysis.dump_coupling);
  EXPECT_EQ(c.verify.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.verify.trajectories, 500);
  EXPECT_EQ(c.verify.analytic_case, false);
}

TEST(Config, PowerDrive) {
  const std::string text = "{" + kPhysical + R"(, "pump": {"delta_p": 4}, "drive": {"P": 1e5}})";
  const RunConfig c = parse_config(text);
  EXPECT_EQ(c.drive.kind, DriveConfig::Kind::Power);
  EXPECT_EQ(c.drive.value, 1e5);
}

TEST(Config, MaterialDispersion) {
  const RunConfig c = parse_config(config_with(
      R"("dispersion": {"kp_prime": 2e-9, "ks_prime": 2e-9, "kp_doubleprime": 1e-25, "ks_doubleprime": 2e-25})"));
  EXPECT_EQ(c.dispersion.beta1, 0.0);
  EXPECT_GT(c.dispersion.beta2s, c.dispersion.beta2p);
}

TEST(Config, Rejections) {
  const char* bad_extras[] = {
      R"("surprise": 1)",
      R"("window": {"half_width": 5, "extra": 1})",
      R"("dispersion": {"beta1": 0, "beta2p": 0, "beta2s": 0, "kp_prime": 1})",
      R"("phase_match": {"model": "lorentzian"})",
      R"("phase_match": {"model": "sinc", "eta": 1})",
      R"("phase_match": {"model": "exponential", "eta": -1})",
      R"("analysis": {"omega_max": 1e6, "f_max_hz": 1e5})",
      R"("analysis": {"points": 0})",
      R"("analysis": {"lo": {"supermode": 0, "file": "x.txt"}})",
      R"("verify": {"seed": -3})",
      R"("verify": {"seed": 1.5})",
      R"("verify": {"trajectories": 10})",
      R"("window": {"half_width": -1})",
  };
  for (const char* extra : bad_extras) EXPECT_THROW(parse_config(config_with(extra)), ConfigError) << extra;
}

TEST(Config, StructuralErrors) {
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"pump": {"delta_p": 4}, "drive": {"r": 0.5}})"), ConfigError);
  EXPECT_THROW(parse_config("{" + kPhysical + R"(, "pump": {"delta_p": 4}, "drive": {"r": 0.5, "P": 1}})"), ConfigError);
  EXPECT_THROW(parse_config("{" + kPhysical + R"(, "pump": {"delta_p": 4}, "drive": {"r": -0.5}})"), ConfigError);
  EXPECT_THROW(parse_config("{" + kPhysical + R"(, "pump": {"delta_p": "4"}, "drive": {"r": 0.5}})"), ConfigError);
  EXPECT_THROW(parse_config("{" + kPhysical + R"(, "pump": {"file": "missing.txt"}, "drive": {"r": 0.5}})"), ConfigError);
  std::string bad_physical = config_with("");
  bad_physical.replace(bad_physical.find("\"n0\": 1.66"), 10, "\"n0\": -1.0");
  EXPECT_THROW(parse_config(bad_physical), ConfigError);
}

TEST(Config, FilePathsResolveAgainstConfigDir) {
  const std::filesystem::path data = SPOPO_TEST_DATA;
  const RunConfig c = parse_config("{" + kPhysical + R"(, "pump": {"file": "pump_five.txt"}, "drive": {"r": 0.5}})", data);
  EXPECT_EQ(c.pump.file, data / "pump_five.txt");
  EXPECT_THROW(load_config(data / "does_not_exist.json"), ConfigError);
}

}  // namespace
}  // namespace spopo
