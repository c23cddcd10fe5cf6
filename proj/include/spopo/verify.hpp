#pragma once

#include "spopo/squeezing.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spopo {

// Optimized SPOPO: equal group velocities, matched GVD (beta2s = 2 beta2p),
// exponential phase matching and a Gaussian pump whose width matches the
// phase-matching curve, eta |beta2p| delta_p^2 = 1.
struct OptimizedCaseSpec {
  double delta_p = 20.0;
  double beta2p = 1e-3;
  double eta = 1.0 / (1e-3 * 400.0);
  ModeWindow window{120};

  void validate() const;
  // Case satisfying the width-matching condition for the given beta2p.
  static OptimizedCaseSpec matched(double delta_p, double beta2p, ModeWindow window);

  DispersionParams dispersion() const { return {0.0, beta2p, 2.0 * beta2p}; }
  PhaseMatchModel phase_match() const { return ExponentialPhaseMatch{eta}; }
  // Pump sampled on -2M..2M so no m+q index is truncated.
  PumpSpectrum pump() const;
  CouplingMatrix coupling() const;
};

struct OptimizedCaseReport {
  double lambda0_expected = 0.0;  // pi^{1/4} sqrt(delta_p / 2)
  double lambda0_numeric = 0.0;
  double rank1_residual = 0.0;    // |Lambda_1| / Lambda_0
  double gaussian_width = 0.0;    // w of the fit L_{0,m} ~ exp(-m^2 / w^2)
  double gaussian_fit_error = 0.0;  // RMS log-residual of that fit
  double threshold_ratio = 0.0;   // P0 / P_thr = Lambda_0^2
  double threshold_ratio_expected = 0.0;  // sqrt(pi) delta_p / 2
};

OptimizedCaseReport analytic_optimized_case(const OptimizedCaseSpec& spec);

// Log-linear least-squares fit of |v_m| to A exp(-m^2 / w^2) over components
// above 1e-6 max|v|. Returns {w, rms log residual}.
std::pair<double, double> fit_gaussian_width(const Vector<double>& v, ModeWindow window);

// Frequency-domain quadrature propagation on the full mode basis. The (+)
// quadrature has drift gamma_s(-I + sigma L), the (-) quadrature
// gamma_s(-I - sigma L); the output response is -I + 2 gamma_s (i w - A)^-1.
// No eigendecomposition is involved.
double quadrature_propagation_variance(const CouplingMatrix& L, double sigma, double gamma_s, double omega,
                                       const HomodyneLO& lo);

struct CovarianceReport {
  double omega = 0.0;
  HomodyneLO lo;
  double variance = 0.0;
  double residual_vs_supermode = 0.0;
};

/// Oracle variance plus its distance to the supermode-basis result.
CovarianceReport covariance_variance(const CouplingMatrix& L, double sigma, double gamma_s, double omega,
                                     const HomodyneLO& lo);

// Throws AboveThresholdError unless both quadrature drifts are stable.
void require_stable(const CouplingMatrix& L, double sigma);

// Integrates ds/dt = -gamma s + gamma sigma L conj(s) (classical RK4, step
// <= 0.01/gamma) from `initial` and returns the least-squares slope of
// log ||s(t)|| over [0, horizon].
double fit_decay_rate(const CouplingMatrix& L, double sigma, double gamma_s, const Vector<std::complex<double>>& initial,
                      double horizon);

/// Decay rate of supermode k on a branch: starts from L_k (branch +) or
/// i L_k (branch -). horizon must be at least 3 / gamma_s.
double time_domain_decay(const CouplingMatrix& L, double sigma, double gamma_s, int k, Branch branch,
                         double horizon);

struct StochasticOptions {
  double step_gamma = 0.01;       // dt * gamma_s
  double duration_gamma = 400.0;  // record length T * gamma_s
};

struct StochasticEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo homodyne spectrum: Euler-Maruyama trajectories of both
/// quadrature Ornstein-Uhlenbeck systems with unit-intensity white noise,
/// output formed by the mirror relation, periodogram at omega averaged over
/// trajectories. Trajectory i draws from its own generator seeded from
/// (seed, i), so the result depends only on the arguments.
StochasticEstimate stochastic_variance_estimate(const CouplingMatrix& L, double sigma, double gamma_s, double omega,
                                                const HomodyneLO& lo, int n_trajectories, std::uint64_t seed,
                                                const StochasticOptions& options = {});

// One line of a verification report.
struct OracleCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

void write_verification_report(std::ostream& out, const std::vector<OracleCheck>& checks);

}  // namespace spopo
