#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <utility>
#include <stdexcept>
#include <string>

namespace spopo {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Symmetric window of longitudinal mode indices -M..+M.
struct ModeWindow {
  int M = 0;

  constexpr int size() const { return 2 * M + 1; }
  constexpr int first() const { return -M; }
  constexpr int last() const { return M; }
  constexpr bool contains(int m) const { return m >= -M && m <= M; }
  // Storage position of mode m.
  constexpr int index(int m) const { return m + M; }
  constexpr int mode(int index) const { return index - M; }

  friend constexpr bool operator==(ModeWindow a, ModeWindow b) { return a.M == b.M; }

  static ModeWindow of_half_width(int M) {
    if (M < 0) throw std::invalid_argument("ModeWindow: half-width must be >= 0");
    return ModeWindow{M};
  }
  static ModeWindow of_size(long n) {
    if (n <= 0 || n % 2 == 0) throw std::invalid_argument("ModeWindow: size must be odd, got " + std::to_string(n));
    return ModeWindow{static_cast<int>((n - 1) / 2)};
  }
  // ceil(6 * delta_p): Gaussian amplitude tail below 1e-7 at the edge.
  static ModeWindow default_for(double delta_p) {
    if (!(delta_p > 0.0)) throw std::invalid_argument("ModeWindow: delta_p must be > 0");
    return ModeWindow{std::max(1, static_cast<int>(std::ceil(6.0 * delta_p)))};
  }
};

// Real pump comb amplitudes alpha_m, normalized to sum alpha_m^2 = 1.
template <typename Scalar>
struct BasicPumpSpectrum {
  ModeWindow window;
  Vector<Scalar> alpha;
  std::optional<double> delta_p;

  // Zero outside the window.
  Scalar at(int m) const { return window.contains(m) ? alpha(window.index(m)) : Scalar(0); }
};

using PumpSpectrum = BasicPumpSpectrum<double>;

/// Gaussian comb alpha_m ~ exp(-m^2 / (2 delta_p^2)), renormalized on the window.
template <typename Scalar = double>
BasicPumpSpectrum<Scalar> gaussian_pump(double delta_p, ModeWindow window) {
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) throw std::invalid_argument("gaussian_pump: delta_p must be > 0");
  if (window.M < 1) throw std::invalid_argument("gaussian_pump: window half-width must be >= 1");
  using std::exp;
  using std::sqrt;
  const Scalar width = Scalar(delta_p);
  Vector<Scalar> alpha(window.size());
  for (int m = window.first(); m <= window.last(); ++m) {
    const Scalar x = Scalar(m) / width;
    alpha(window.index(m)) = exp(-x * x / Scalar(2));
  }
  // Explicit even symmetry so alpha_m == alpha_{-m} bitwise.
  for (int m = 1; m <= window.M; ++m) alpha(window.index(-m)) = alpha(window.index(m));
  alpha /= sqrt(alpha.squaredNorm());
  for (int m = 1; m <= window.M; ++m) alpha(window.index(-m)) = alpha(window.index(m));
  return {window, std::move(alpha), delta_p};
}

/// User-supplied real comb amplitudes, rescaled to unit sum of squares.
/// The array length fixes the window and must be odd.
template <typename Derived>
BasicPumpSpectrum<typename Derived::Scalar> custom_pump(const Eigen::MatrixBase<Derived>& coefficients) {
  using Scalar = typename Derived::Scalar;
  const ModeWindow window = ModeWindow::of_size(coefficients.size());
  if (!coefficients.allFinite()) throw std::invalid_argument("custom_pump: coefficients must be finite");
  const Scalar norm2 = coefficients.squaredNorm();
  if (!(norm2 > Scalar(0))) throw std::invalid_argument("custom_pump: at least one coefficient must be nonzero");
  using std::sqrt;
  Vector<Scalar> alpha = coefficients / sqrt(norm2);
  return {window, std::move(alpha), std::nullopt};
}

/// Reads whitespace-separated (index, value) pairs, '#' starting a comment.
/// Indices must cover -M..M exactly once. A third column, if present, is an
/// imaginary part and must be zero. Values are returned unnormalized.
std::pair<ModeWindow, Vector<double>> read_comb_coefficients(std::istream& in);

/// Reads a two-column (index, amplitude) pump spectrum. '#' starts a comment.
/// Indices must cover -M..M exactly once. A nonzero third (imaginary) column is
/// rejected: only unchirped, real spectra are supported.
PumpSpectrum read_pump_spectrum(std::istream& in);
PumpSpectrum load_pump_spectrum(const std::string& path);

}  // namespace spopo
