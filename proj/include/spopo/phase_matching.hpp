#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

namespace spopo {

// Dimensionless Taylor coefficients of the phase mismatch.
struct DispersionParams {
  double beta1 = 0.0;   // group-velocity mismatch
  double beta2p = 0.0;  // pump GVD
  double beta2s = 0.0;  // signal GVD

  void validate() const {
    if (!std::isfinite(beta1) || !std::isfinite(beta2p) || !std::isfinite(beta2s))
      throw std::invalid_argument("DispersionParams: coefficients must be finite");
  }
};

/// beta coefficients from wave-vector derivatives k' (s/m) and k'' (s^2/m).
inline DispersionParams betas_from_material(double kp_prime, double ks_prime, double kp_doubleprime,
                                            double ks_doubleprime, double Omega, double l) {
  if (!(Omega > 0.0) || !std::isfinite(Omega)) throw std::invalid_argument("betas_from_material: Omega must be > 0");
  if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("betas_from_material: l must be > 0");
  DispersionParams d{0.5 * Omega * (kp_prime - ks_prime) * l, 0.25 * Omega * Omega * kp_doubleprime * l,
                     0.25 * Omega * Omega * ks_doubleprime * l};
  d.validate();
  return d;
}

struct SincPhaseMatch {};

struct ExponentialPhaseMatch {
  double eta = 1.0;
};

using PhaseMatchModel = std::variant<SincPhaseMatch, ExponentialPhaseMatch>;

inline void validate(const PhaseMatchModel& model) {
  if (const auto* e = std::get_if<ExponentialPhaseMatch>(&model)) {
    if (!(e->eta > 0.0) || !std::isfinite(e->eta))
      throw std::invalid_argument("ExponentialPhaseMatch: eta must be > 0");
  }
}

/// phi_{m,q} = beta1 (m+q) + beta2p (m+q)^2 - beta2s (m^2 + q^2)
template <typename Scalar = double>
Scalar mismatch_angle(int m, int q, const DispersionParams& d) {
  const Scalar s = Scalar(m) + Scalar(q);
  const Scalar mm = Scalar(m) * Scalar(m);
  const Scalar qq = Scalar(q) * Scalar(q);
  return Scalar(d.beta1) * s + Scalar(d.beta2p) * s * s - Scalar(d.beta2s) * (mm + qq);
}

template <typename Scalar>
Scalar sinc(Scalar phi) {
  using std::abs;
  using std::sin;
  if (abs(phi) < Scalar(1e-8)) return Scalar(1) - phi * phi / Scalar(6);
  return sin(phi) / phi;
}

/// Phase-matching factor multiplying alpha_{m+q} in the coupling kernel.
template <typename Scalar = double>
Scalar pm_factor(Scalar phi, const PhaseMatchModel& model) {
  using std::abs;
  using std::exp;
  if (const auto* e = std::get_if<ExponentialPhaseMatch>(&model))
    return exp(-Scalar(0.5) * Scalar(e->eta) * abs(phi));
  return sinc(phi);
}

}  // namespace spopo
