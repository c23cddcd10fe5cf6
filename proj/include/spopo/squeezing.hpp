#pragma once

#include "spopo/errors.hpp"
#include "spopo/supermodes.hpp"

#include <cmath>
#include <complex>
#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spopo {

enum class Branch { Plus, Minus };

inline constexpr double kThetaPlus = 0.0;                     // selects S^(+)
inline constexpr double kThetaMinus = std::numbers::pi / 2.0;  // selects S^(-)

// Analysis (Fourier) frequencies in rad/s, strictly increasing, >= 0.
struct FrequencyGrid {
  Vector<double> omegas;

  void validate() const {
    if (omegas.size() == 0) throw std::invalid_argument("FrequencyGrid: empty");
    for (Eigen::Index i = 0; i < omegas.size(); ++i) {
      if (!std::isfinite(omegas(i)) || omegas(i) < 0.0)
        throw std::invalid_argument("FrequencyGrid: frequencies must be finite and >= 0");
      if (i > 0 && !(omegas(i) > omegas(i - 1)))
        throw std::invalid_argument("FrequencyGrid: frequencies must be strictly increasing");
    }
  }

  // points values evenly spaced on [0, omega_max].
  static FrequencyGrid linear(double omega_max, int points) {
    if (points < 1) throw std::invalid_argument("FrequencyGrid: need at least one point");
    if (points > 1 && !(omega_max > 0.0)) throw std::invalid_argument("FrequencyGrid: omega_max must be > 0");
    FrequencyGrid g;
    if (points == 1)
      g.omegas = Vector<double>::Zero(1);
    else
      g.omegas = Vector<double>::LinSpaced(points, 0.0, omega_max);
    g.validate();
    return g;
  }
};

// Squeezed / antisqueezed homodyne variance pair of one supermode. Variances
// are normalized to the vacuum level 1.
struct VarianceSpectrum {
  int k = 0;
  FrequencyGrid grid;
  Vector<double> v_minus;
  Vector<double> v_plus;
};

// Multimode local oscillator: real comb coefficients e_m (unit norm) and the
// quadrature phase theta. theta = 0 measures S^(+), theta = pi/2 S^(-).
struct HomodyneLO {
  ModeWindow window;
  Vector<double> e;
  double theta = kThetaMinus;

  void validate() const {
    if (e.size() != window.size()) throw std::invalid_argument("HomodyneLO: coefficient count does not match window");
    if (!e.allFinite() || !std::isfinite(theta)) throw std::invalid_argument("HomodyneLO: non-finite value");
    if (std::abs(e.squaredNorm() - 1.0) > 1e-12) throw std::invalid_argument("HomodyneLO: sum e_m^2 must be 1");
  }

  static HomodyneLO normalized(ModeWindow window, const Vector<double>& coefficients, double theta) {
    const double n2 = coefficients.squaredNorm();
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::invalid_argument("HomodyneLO: coefficients must be nonzero");
    HomodyneLO lo{window, coefficients / std::sqrt(n2), theta};
    lo.validate();
    return lo;
  }

  template <typename Scalar>
  static HomodyneLO from_supermode(const BasicSupermodeSet<Scalar>& s, int k, double theta) {
    if (k < 0 || k >= s.size()) throw std::invalid_argument("HomodyneLO: supermode index out of range");
    return normalized(s.window, s.mode(k).template cast<double>(), theta);
  }
};

namespace detail {

inline void require_below_threshold(double r, const char* who) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument(std::string(who) + ": r must be >= 0");
  if (r >= 1.0)
    throw AboveThresholdError(std::string(who) + ": r = " + std::to_string(r) +
                              " is at or above threshold; the linearized theory needs r < 1");
}

inline void require_ratio(double ratio, const char* who) {
  if (!(std::abs(ratio) <= 1.0 + 1e-12))
    throw std::invalid_argument(std::string(who) + ": |Lambda_k / Lambda_0| must not exceed 1");
}

}  // namespace detail

/// Output/input ratio of a supermode quadrature in Fourier space,
/// [gamma (1 +- r ratio) - i omega] / [gamma (-1 +- r ratio) + i omega],
/// with ratio = Lambda_k / |Lambda_0| (signed). Its squared modulus is the
/// homodyne variance of that quadrature.
template <typename Scalar = double>
std::complex<Scalar> transfer_function(Branch branch, Scalar omega, Scalar r, Scalar ratio, Scalar gamma_s) {
  detail::require_below_threshold(double(r), "transfer_function");
  detail::require_ratio(double(ratio), "transfer_function");
  const Scalar g = branch == Branch::Plus ? r * ratio : -r * ratio;
  const std::complex<Scalar> num(gamma_s * (Scalar(1) + g), -omega);
  const std::complex<Scalar> den(gamma_s * (Scalar(-1) + g), omega);
  return num / den;
}

/// |transfer_function|^2 evaluated as a ratio of real quadratics.
template <typename Scalar = double>
Scalar quadrature_variance(Branch branch, Scalar omega, Scalar r, Scalar ratio, Scalar gamma_s) {
  detail::require_below_threshold(double(r), "quadrature_variance");
  detail::require_ratio(double(ratio), "quadrature_variance");
  const Scalar g = branch == Branch::Plus ? r * ratio : -r * ratio;
  const Scalar w2 = omega * omega;
  const Scalar up = gamma_s * (Scalar(1) + g), down = gamma_s * (Scalar(1) - g);
  return (up * up + w2) / (down * down + w2);
}

/// V_k^-(omega) and V_k^+(omega). The squeezed/antisqueezed assignment uses
/// |ratio|, so v_minus <= 1 for negative Lambda_k as well; the raw quadrature
/// labels are available through transfer_function.
inline VarianceSpectrum variance_spectrum(int k, double r, double ratio, double gamma_s, const FrequencyGrid& grid) {
  detail::require_below_threshold(r, "variance_spectrum");
  detail::require_ratio(ratio, "variance_spectrum");
  if (!(gamma_s > 0.0)) throw std::invalid_argument("variance_spectrum: gamma_s must be > 0");
  grid.validate();
  const double a = r * std::abs(ratio);
  const double squeezed = gamma_s * (1.0 - a), amplified = gamma_s * (1.0 + a);
  VarianceSpectrum out{k, grid, Vector<double>(grid.omegas.size()), Vector<double>(grid.omegas.size())};
  for (Eigen::Index i = 0; i < grid.omegas.size(); ++i) {
    const double w2 = grid.omegas(i) * grid.omegas(i);
    out.v_minus(i) = (squeezed * squeezed + w2) / (amplified * amplified + w2);
    out.v_plus(i) = (amplified * amplified + w2) / (squeezed * squeezed + w2);
  }
  return out;
}

template <typename Scalar>
VarianceSpectrum variance_spectrum(const BasicSupermodeSet<Scalar>& s, int k, double r, double gamma_s,
                                   const FrequencyGrid& grid) {
  if (k < 0 || k >= s.size()) throw std::invalid_argument("variance_spectrum: supermode index out of range");
  return variance_spectrum(k, r, double(s.ratio(k)), gamma_s, grid);
}

/// Best squeezing of supermode k, reached at omega = 0 as r -> 1.
inline double min_variance(double lambda_k_abs, double lambda0_abs) {
  if (!(lambda0_abs > 0.0)) throw std::invalid_argument("min_variance: lambda0_abs must be > 0");
  if (!(lambda_k_abs >= 0.0)) throw std::invalid_argument("min_variance: lambda_k_abs must be >= 0");
  if (lambda_k_abs > lambda0_abs)
    throw std::invalid_argument("min_variance: |Lambda_k| exceeds Lambda_0, which is the largest by definition");
  const double q = (lambda0_abs - lambda_k_abs) / (lambda0_abs + lambda_k_abs);
  return q * q;
}

/// c_k = sum_m e_m L_{k,m}.
template <typename Scalar>
Vector<double> lo_projection(const HomodyneLO& lo, const BasicSupermodeSet<Scalar>& s) {
  lo.validate();
  if (!(lo.window == s.window)) throw std::invalid_argument("lo_projection: LO and supermode windows differ");
  return s.eigenvectors.template cast<double>().transpose() * lo.e;
}

/// Homodyne variance for an arbitrary LO comb: supermodes are independent, so
/// V = sum_k c_k^2 [cos^2(theta) V_k^(+) + sin^2(theta) V_k^(-)] with the raw
/// (signed Lambda_k) quadrature variances.
template <typename Scalar>
double homodyne_variance(const HomodyneLO& lo, const BasicSupermodeSet<Scalar>& s, double r, double gamma_s,
                         double omega) {
  detail::require_below_threshold(r, "homodyne_variance");
  if (!(gamma_s > 0.0)) throw std::invalid_argument("homodyne_variance: gamma_s must be > 0");
  const Vector<double> c = lo_projection(lo, s);
  const double cos2 = std::cos(lo.theta) * std::cos(lo.theta);
  const double sin2 = std::sin(lo.theta) * std::sin(lo.theta);
  double v = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    if (c(k) == 0.0) continue;
    const double ratio = s.lambda0_abs > Scalar(0) ? double(s.ratio(k)) : 0.0;
    v += c(k) * c(k) *
         (cos2 * quadrature_variance(Branch::Plus, omega, r, ratio, gamma_s) +
          sin2 * quadrature_variance(Branch::Minus, omega, r, ratio, gamma_s));
  }
  return v;
}

/// CSV with header omega_rad_per_s,v_minus,v_plus.
void write_spectrum_csv(std::ostream& out, const VarianceSpectrum& spectrum);

}  // namespace spopo
