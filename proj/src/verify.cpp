#include "spopo/verify.hpp"

#include "spopo/io.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace spopo {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

void OptimizedCaseSpec::validate() const {
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) throw std::invalid_argument("OptimizedCaseSpec: delta_p must be > 0");
  if (!(beta2p != 0.0) || !std::isfinite(beta2p)) throw std::invalid_argument("OptimizedCaseSpec: beta2p must be nonzero");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("OptimizedCaseSpec: eta must be > 0");
  if (window.M < 1) throw std::invalid_argument("OptimizedCaseSpec: window half-width must be >= 1");
  const double matching = eta * std::abs(beta2p) * delta_p * delta_p;
  if (std::abs(matching - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "OptimizedCaseSpec: width matching eta*|beta2p|*delta_p^2 = " << io::format_double(matching)
        << ", must equal 1 within 1e-12";
    throw std::invalid_argument(msg.str());
  }
}

OptimizedCaseSpec OptimizedCaseSpec::matched(double delta_p, double beta2p, ModeWindow window) {
  OptimizedCaseSpec spec{delta_p, beta2p, 1.0 / (std::abs(beta2p) * delta_p * delta_p), window};
  spec.validate();
  return spec;
}

PumpSpectrum OptimizedCaseSpec::pump() const {
  return gaussian_pump(delta_p, ModeWindow{2 * window.M});
}

CouplingMatrix OptimizedCaseSpec::coupling() const {
  validate();
  return build_coupling(pump(), dispersion(), phase_match(), window);
}

std::pair<double, double> fit_gaussian_width(const Vector<double>& v, ModeWindow window) {
  if (v.size() != window.size()) throw std::invalid_argument("fit_gaussian_width: size mismatch");
  const double cutoff = 1e-6 * v.cwiseAbs().maxCoeff();
  std::vector<double> xs, ys;
  for (int m = window.first(); m <= window.last(); ++m) {
    const double a = std::abs(v(window.index(m)));
    if (a > cutoff) {
      xs.push_back(double(m) * double(m));
      ys.push_back(std::log(a));
    }
  }
  if (xs.size() < 3) throw std::invalid_argument("fit_gaussian_width: too few significant components");
  MatrixXd design(xs.size(), 2);
  VectorXd rhs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = xs[i];
    rhs(i) = ys[i];
  }
  const VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  if (!(coef(1) < 0.0)) throw std::invalid_argument("fit_gaussian_width: profile is not Gaussian-decaying");
  const double rms = std::sqrt((design * coef - rhs).squaredNorm() / double(xs.size()));
  return {std::sqrt(-1.0 / coef(1)), rms};
}

OptimizedCaseReport analytic_optimized_case(const OptimizedCaseSpec& spec) {
  spec.validate();
  if (spec.delta_p < 5.0) throw std::invalid_argument("analytic_optimized_case: delta_p must be >= 5");
  if (double(spec.window.M) < 6.0 * spec.delta_p)
    throw std::invalid_argument("analytic_optimized_case: window half-width must be >= 6 delta_p");

  const SupermodeSet modes = decompose(spec.coupling());
  OptimizedCaseReport report;
  report.lambda0_expected = std::pow(std::numbers::pi, 0.25) * std::sqrt(spec.delta_p / 2.0);
  report.lambda0_numeric = modes.lambda0_abs;
  report.rank1_residual = modes.size() > 1 ? std::abs(modes.lambda(1)) / modes.lambda0_abs : 0.0;
  std::tie(report.gaussian_width, report.gaussian_fit_error) = fit_gaussian_width(modes.mode(0), modes.window);
  report.threshold_ratio = modes.lambda0_abs * modes.lambda0_abs;
  report.threshold_ratio_expected = std::sqrt(std::numbers::pi) * spec.delta_p / 2.0;
  return report;
}

void require_stable(const CouplingMatrix& L, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
  const Eigen::Index n = L.entries.rows();
  const MatrixXd id = MatrixXd::Identity(n, n);
  // -A(+-)/gamma = I -+ sigma L must both be positive definite.
  for (const double sign : {1.0, -1.0}) {
    Eigen::LLT<MatrixXd> llt(id - sign * sigma * L.entries);
    if (llt.info() != Eigen::Success)
      throw AboveThresholdError("quadrature dynamics unstable: sigma * |Lambda_0| >= 1 (at or above threshold)");
  }
}

double quadrature_propagation_variance(const CouplingMatrix& L, double sigma, double gamma_s, double omega,
                                       const HomodyneLO& lo) {
  if (!(gamma_s > 0.0)) throw std::invalid_argument("gamma_s must be > 0");
  lo.validate();
  if (!(lo.window == L.window)) throw std::invalid_argument("LO window does not match coupling window");
  require_stable(L, sigma);

  const Eigen::Index n = L.entries.rows();
  const std::complex<double> iw(0.0, omega);
  const double weights[2] = {std::cos(lo.theta) * std::cos(lo.theta), std::sin(lo.theta) * std::sin(lo.theta)};
  const double signs[2] = {1.0, -1.0};
  double variance = 0.0;
  for (int b = 0; b < 2; ++b) {
    if (weights[b] == 0.0) continue;
    const MatrixXd drift = gamma_s * (-MatrixXd::Identity(n, n) + signs[b] * sigma * L.entries);
    // M^H e with M = -I + 2 gamma (i w - A)^-1, symmetric: conj(M) e.
    const MatrixXcd resolvent = -iw * MatrixXcd::Identity(n, n) - drift.cast<std::complex<double>>();
    Eigen::PartialPivLU<MatrixXcd> lu(resolvent);
    if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon()))
      throw SolverError("quadrature propagation: (i omega - A) is numerically singular");
    const VectorXcd e = lo.e.cast<std::complex<double>>();
    const VectorXcd response = -e + 2.0 * gamma_s * lu.solve(e);
    variance += weights[b] * response.squaredNorm();
  }
  return variance;
}

CovarianceReport covariance_variance(const CouplingMatrix& L, double sigma, double gamma_s, double omega,
                                     const HomodyneLO& lo) {
  CovarianceReport report;
  report.omega = omega;
  report.lo = lo;
  report.variance = quadrature_propagation_variance(L, sigma, gamma_s, omega, lo);
  const SupermodeSet modes = decompose(L);
  const double r = sigma * modes.lambda0_abs;
  report.residual_vs_supermode = std::abs(report.variance - homodyne_variance(lo, modes, r, gamma_s, omega));
  return report;
}

double fit_decay_rate(const CouplingMatrix& L, double sigma, double gamma_s, const Vector<std::complex<double>>& initial,
                      double horizon) {
  if (!(gamma_s > 0.0)) throw std::invalid_argument("gamma_s must be > 0");
  if (!(horizon >= 3.0 / gamma_s)) throw std::invalid_argument("time_domain_decay: horizon must be >= 3 / gamma_s");
  if (initial.size() != L.entries.rows() || !(initial.norm() > 0.0))
    throw std::invalid_argument("time_domain_decay: bad initial state");
  require_stable(L, sigma);

  const MatrixXcd coupling = (gamma_s * sigma * L.entries).cast<std::complex<double>>();
  auto rhs = [&](const VectorXcd& s) -> VectorXcd { return -gamma_s * s + coupling * s.conjugate(); };

  const long steps = static_cast<long>(std::ceil(horizon * gamma_s / 0.01));
  const double dt = horizon / double(steps);
  VectorXcd s = initial;
  // Running sums for the least-squares slope of log||s|| against t.
  double st = 0, sy = 0, stt = 0, sty = 0;
  auto sample = [&](long i) {
    const double t = double(i) * dt, y = std::log(s.norm());
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  };
  sample(0);
  for (long i = 1; i <= steps; ++i) {
    const VectorXcd k1 = rhs(s);
    const VectorXcd k2 = rhs(s + 0.5 * dt * k1);
    const VectorXcd k3 = rhs(s + 0.5 * dt * k2);
    const VectorXcd k4 = rhs(s + dt * k3);
    s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    sample(i);
  }
  const double n = double(steps + 1);
  return (n * sty - st * sy) / (n * stt - st * st);
}

double time_domain_decay(const CouplingMatrix& L, double sigma, double gamma_s, int k, Branch branch,
                         double horizon) {
  const SupermodeSet modes = decompose(L);
  if (k < 0 || k >= modes.size()) throw std::invalid_argument("time_domain_decay: supermode index out of range");
  const std::complex<double> phase = branch == Branch::Plus ? 1.0 : std::complex<double>(0.0, 1.0);
  return fit_decay_rate(L, sigma, gamma_s, phase * modes.mode(k).cast<std::complex<double>>(), horizon);
}

StochasticEstimate stochastic_variance_estimate(const CouplingMatrix& L, double sigma, double gamma_s, double omega,
                                                const HomodyneLO& lo, int n_trajectories, std::uint64_t seed,
                                                const StochasticOptions& options) {
  if (n_trajectories < 100) throw std::invalid_argument("stochastic_variance_estimate: need at least 100 trajectories");
  if (!(gamma_s > 0.0)) throw std::invalid_argument("gamma_s must be > 0");
  if (!(options.step_gamma > 0.0) || !(options.duration_gamma > options.step_gamma))
    throw std::invalid_argument("stochastic_variance_estimate: bad step or duration");
  lo.validate();
  if (!(lo.window == L.window)) throw std::invalid_argument("LO window does not match coupling window");
  require_stable(L, sigma);

  const Eigen::Index n = L.entries.rows();
  const double dt = options.step_gamma / gamma_s;
  const long steps = static_cast<long>(std::ceil(options.duration_gamma / options.step_gamma));
  const double duration = double(steps) * dt;
  const double feed = std::sqrt(2.0 * gamma_s);
  const double sqrt_dt = std::sqrt(dt);

  // Quadrature X_theta = cos(theta) S(+) + sin(theta) S(-). A branch whose
  // amplitude is below 1e-12 contributes under 1e-24 and is not simulated.
  struct Quadrature {
    double amplitude;
    MatrixXd step;  // I + A dt
  };
  std::vector<Quadrature> quadratures;
  const double amplitudes[2] = {std::cos(lo.theta), std::sin(lo.theta)};
  const double signs[2] = {1.0, -1.0};
  for (int b = 0; b < 2; ++b) {
    if (std::abs(amplitudes[b]) < 1e-12) continue;
    const MatrixXd drift = gamma_s * (-MatrixXd::Identity(n, n) + signs[b] * sigma * L.entries);
    quadratures.push_back({amplitudes[b], MatrixXd::Identity(n, n) + dt * drift});
  }

  const std::complex<double> rotation = std::polar(1.0, -omega * dt);
  std::vector<double> periodograms(static_cast<std::size_t>(n_trajectories));
  for (int traj = 0; traj < n_trajectories; ++traj) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(traj)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;

    std::vector<VectorXd> states(quadratures.size(), VectorXd::Zero(n));
    VectorXd noise(n), next(n);
    std::complex<double> phasor = 1.0, accumulated = 0.0;
    for (long i = 0; i < steps; ++i) {
      double increment = 0.0;
      for (std::size_t b = 0; b < quadratures.size(); ++b) {
        for (Eigen::Index j = 0; j < n; ++j) noise(j) = sqrt_dt * normal(rng);
        VectorXd& x = states[b];
        // Output over [t, t+dt): -dW + sqrt(2 gamma) x(t) dt, projected on the LO.
        increment += quadratures[b].amplitude * lo.e.dot(feed * dt * x - noise);
        next.noalias() = quadratures[b].step * x;
        x = next + feed * noise;
      }
      accumulated += increment * phasor;
      phasor *= rotation;
    }
    periodograms[static_cast<std::size_t>(traj)] = std::norm(accumulated) / duration;
  }

  double mean = 0.0;
  for (const double p : periodograms) mean += p;
  mean /= double(n_trajectories);
  double var = 0.0;
  for (const double p : periodograms) var += (p - mean) * (p - mean);
  var /= double(n_trajectories - 1);
  return {mean, std::sqrt(var / double(n_trajectories))};
}

void write_verification_report(std::ostream& out, const std::vector<OracleCheck>& checks) {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS" : "FAIL") << ' ' << c.name << " measured=" << io::format_double(c.measured)
        << " tolerance=" << io::format_double(c.tolerance);
    if (!c.detail.empty()) out << ' ' << c.detail;
    out << '\n';
  }
}

}  // namespace spopo
