#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spopo {

namespace constants {
inline constexpr double speed_of_light = 299792458.0;       // m/s, exact
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m, CODATA 2018
}  // namespace constants

// Cavity and crystal constants. Angular frequencies and rates are in rad/s,
// lengths in m. Powers derived from these are per unit transverse area.
struct PhysicalParams {
  double gamma_s = 0.0;  // signal cavity damping rate
  double gamma_p = 0.0;  // pump cavity damping rate
  double n0 = 0.0;       // refractive index at degenerate phase matching
  double chi = 0.0;      // crystal nonlinear susceptibility
  double l = 0.0;        // crystal length
  double omega0 = 0.0;   // degenerate signal frequency
  double Omega = 0.0;    // free spectral range / repetition rate

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(std::isfinite(v) && v > 0.0))
        throw std::invalid_argument(std::string("PhysicalParams.") + name + " must be finite and > 0");
    };
    positive(gamma_s, "gamma_s");
    positive(gamma_p, "gamma_p");
    positive(n0, "n0");
    positive(chi, "chi");
    positive(l, "l");
    positive(omega0, "omega0");
    positive(Omega, "Omega");
  }
};

/// Single-mode cw oscillation threshold P0 (W/m^2),
///   P0 = 2 g_s^2 g_p n0^3 c^3 eps0 / (4 sqrt(2) chi l omega0)^2,
/// where g_s, g_p are the damping rates per cavity round trip,
/// g = gamma * 2 pi / Omega. In that form the expression is dimensionally
/// consistent for chi in m/V.
inline double cw_threshold_power(const PhysicalParams& p) {
  p.validate();
  using namespace constants;
  const double c = speed_of_light;
  const double round_trip = 2.0 * std::numbers::pi / p.Omega;
  const double gs = p.gamma_s * round_trip, gp = p.gamma_p * round_trip;
  const double denom = 4.0 * std::sqrt(2.0) * p.chi * p.l * p.omega0;
  return 2.0 * gs * gs * gp * p.n0 * p.n0 * p.n0 * c * c * c * vacuum_permittivity / (denom * denom);
}

/// Normalized pump amplitude sigma = sqrt(P / P0).
inline double pump_strength(double P, double P0) {
  if (!(P0 > 0.0) || !std::isfinite(P0)) throw std::invalid_argument("pump_strength: P0 must be > 0");
  if (!(P >= 0.0) || !std::isfinite(P)) throw std::invalid_argument("pump_strength: P must be >= 0");
  return std::sqrt(P / P0);
}

/// r = sigma * |Lambda_0|; threshold sits at r = 1.
inline double pumping_rate(double sigma, double lambda0) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("pumping_rate: lambda0 must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("pumping_rate: sigma must be >= 0");
  return sigma * lambda0;
}

struct PumpDrive {
  double P = 0.0;
  double P0 = 0.0;
  double sigma = 0.0;
  double r = 0.0;

  static PumpDrive from_power(double P, double P0, double lambda0) {
    const double sigma = pump_strength(P, P0);
    return {P, P0, sigma, pumping_rate(sigma, lambda0)};
  }

  // P follows from r when P0 is known; pass P0 = 0 to leave powers unset.
  static PumpDrive from_rate(double r, double P0, double lambda0) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("PumpDrive: r must be >= 0");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("PumpDrive: lambda0 must be > 0");
    const double sigma = r / lambda0;
    return {sigma * sigma * P0, P0, sigma, r};
  }
};

}  // namespace spopo
