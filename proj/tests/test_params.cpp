#include "spopo/params.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace spopo;

namespace {

// 800 nm signal, 76 MHz comb, 5% amplitude loss per round trip, 2 mm crystal.
PhysicalParams femtosecond_opo() {
  const double Omega = 2.0 * std::numbers::pi * 76e6;
  const double gamma = 0.05 * Omega / (2.0 * std::numbers::pi);
  return {gamma, gamma, 1.66, 4.8e-12, 2e-3, 2.0 * std::numbers::pi * constants::speed_of_light / 0.8e-6, Omega};
}

}  // namespace

TEST(CwThreshold, GoldenFemtosecondParameterSet) {
  // Hand evaluation (independent script) of the threshold expression.
  const double P0 = cw_threshold_power(femtosecond_opo());
  EXPECT_NEAR(P0, 16686355.751932558, 1e-12 * 16686355.751932558);
  // "A few tens of mW" over a 25 um radius spot.
  const double watts = P0 * std::numbers::pi * 25e-6 * 25e-6;
  EXPECT_GT(watts, 0.01);
  EXPECT_LT(watts, 0.1);
}

TEST(CwThreshold, ScalesAsInverseSquareOfChi) {
  PhysicalParams p = femtosecond_opo();
  const double base = cw_threshold_power(p);
  p.chi *= 2.0;
  EXPECT_DOUBLE_EQ(cw_threshold_power(p), base / 4.0);
}

TEST(CwThreshold, ScalesAsSquareOfSignalDamping) {
  PhysicalParams p = femtosecond_opo();
  const double base = cw_threshold_power(p);
  p.gamma_s *= 2.0;
  EXPECT_DOUBLE_EQ(cw_threshold_power(p), base * 4.0);
}

TEST(CwThreshold, HomogeneousInChiTimesLength) {
  for (const double a : {2.0, 10.0}) {
    PhysicalParams p = femtosecond_opo();
    const double base = cw_threshold_power(p);
    p.chi *= std::sqrt(a);
    p.l *= std::sqrt(a);
    EXPECT_NEAR(cw_threshold_power(p), base / (a * a), 1e-14 * base);
  }
}

TEST(CwThreshold, RejectsNonPositiveFields) {
  PhysicalParams p = femtosecond_opo();
  p.n0 = 0.0;
  EXPECT_THROW(cw_threshold_power(p), std::invalid_argument);
  p = femtosecond_opo();
  p.Omega = -1.0;
  EXPECT_THROW(cw_threshold_power(p), std::invalid_argument);
}

TEST(PumpStrength, Examples) {
  EXPECT_EQ(pump_strength(3.0, 3.0), 1.0);
  EXPECT_EQ(pump_strength(12.0, 3.0), 2.0);
  EXPECT_EQ(pump_strength(0.0, 3.0), 0.0);
  EXPECT_THROW(pump_strength(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(pump_strength(1.0, -2.0), std::invalid_argument);
}

TEST(PumpStrength, InvertsPowerOfSigma) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double sigma = u(rng), P0 = 1e6 * (0.1 + u(rng));
    EXPECT_NEAR(pump_strength(sigma * sigma * P0, P0), sigma, 4 * std::numeric_limits<double>::epsilon() * sigma);
  }
}

TEST(PumpingRate, Examples) {
  const double lambda0 = 4.2;
  EXPECT_DOUBLE_EQ(pumping_rate(1.0 / lambda0, lambda0), 1.0);
  EXPECT_EQ(pumping_rate(0.0, lambda0), 0.0);
  EXPECT_EQ(pumping_rate(0.5, 1.0), 0.5);
  EXPECT_THROW(pumping_rate(0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(pumping_rate(0.5, -1.0), std::invalid_argument);
}

TEST(PumpDrive, PowerAndRateAgree) {
  const double P0 = 2.0e7, lambda0 = 3.0;
  const PumpDrive a = PumpDrive::from_power(0.25 * P0 / (lambda0 * lambda0), P0, lambda0);
  EXPECT_NEAR(a.r, 0.5, 1e-15);
  const PumpDrive b = PumpDrive::from_rate(0.5, P0, lambda0);
  EXPECT_NEAR(b.P, a.P, 1e-12 * a.P);
  EXPECT_DOUBLE_EQ(b.sigma, a.sigma);
}
