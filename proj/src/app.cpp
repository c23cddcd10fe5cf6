#include "spopo/app.hpp"

#include "spopo/io.hpp"
#include "spopo/squeezing.hpp"
#include "spopo/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace spopo {

namespace {

ModeWindow signal_window(const RunConfig& config, const PumpSpectrum* custom) {
  if (config.window_half_width) return ModeWindow::of_half_width(*config.window_half_width);
  if (config.pump.delta_p) return ModeWindow::default_for(*config.pump.delta_p);
  return custom->window;
}

HomodyneLO make_lo(const LocalOscillatorConfig& c, const SupermodeSet& modes) {
  if (c.supermode) {
    if (*c.supermode >= modes.size()) throw ConfigError("analysis.lo.supermode exceeds the number of modes");
    return HomodyneLO::from_supermode(modes, *c.supermode, c.theta);
  }
  std::ifstream in(c.file);
  if (!in) throw ConfigError("cannot open LO file '" + c.file.string() + "'");
  auto [window, coefficients] = read_comb_coefficients(in);
  if (!(window == modes.window))
    throw ConfigError("LO file window M=" + std::to_string(window.M) + " does not match the signal window M=" +
                      std::to_string(modes.window.M));
  return HomodyneLO::normalized(window, coefficients, c.theta);
}

FrequencyGrid analysis_grid(const RunConfig& config) {
  return FrequencyGrid::linear(config.analysis.omega_max, config.analysis.points);
}

void require_below_threshold(const System& system) {
  if (!is_below_threshold(system.drive.r)) {
    std::ostringstream msg;
    msg << "requested analysis needs r < 1, but r = " << io::format_double(system.drive.r);
    throw AboveThresholdError(msg.str());
  }
}

std::string summary_text(const System& s) {
  std::ostringstream out;
  auto line = [&](const char* key, double v) { out << key << " = " << io::format_double(v) << '\n'; };
  line("P0_W_per_m2", s.P0);
  line("P_thr_W_per_m2", s.P_thr);
  line("P_thr_over_P0", s.P_thr / s.P0);
  line("P0_over_P_thr", s.P0 / s.P_thr);
  line("Lambda0", s.modes.lambda0_abs);
  out << "Lambda0_sign = " << (s.modes.lambda0_sign < 0 ? -1 : 1) << '\n';
  line("P_W_per_m2", s.drive.P);
  line("sigma", s.drive.sigma);
  line("r", s.drive.r);
  out << "below_threshold = " << (is_below_threshold(s.drive.r) ? "true" : "false") << '\n';
  out << "modes = " << s.modes.size() << '\n';
  out << "window_half_width = " << s.modes.window.M << '\n';
  line("eigen_residual", s.modes.max_residual);
  return out.str();
}

std::string homodyne_csv(const System& system, const HomodyneLO& lo, const FrequencyGrid& grid,
                         double gamma_s) {
  std::ostringstream out;
  out << "omega_rad_per_s,variance\n";
  for (Eigen::Index i = 0; i < grid.omegas.size(); ++i)
    out << io::csv_row({grid.omegas(i), homodyne_variance(lo, system.modes, system.drive.r, gamma_s, grid.omegas(i))})
        << '\n';
  return out.str();
}

std::optional<OptimizedCaseSpec> optimized_case_from(const RunConfig& config, ModeWindow window) {
  const bool exponential = std::holds_alternative<ExponentialPhaseMatch>(config.phase_match);
  const bool enabled = config.verify.analytic_case.value_or(config.pump.delta_p.has_value() && exponential);
  if (!enabled) return std::nullopt;
  if (!config.pump.delta_p || !exponential)
    throw ConfigError("verify.analytic_case needs a Gaussian pump and exponential phase matching");
  const auto& d = config.dispersion;
  if (d.beta1 != 0.0) throw ConfigError("verify.analytic_case needs beta1 = 0");
  if (std::abs(d.beta2s - 2.0 * d.beta2p) > 1e-12 * std::abs(d.beta2p))
    throw ConfigError("verify.analytic_case needs beta2s = 2 beta2p");
  OptimizedCaseSpec spec{*config.pump.delta_p, d.beta2p, std::get<ExponentialPhaseMatch>(config.phase_match).eta,
                         window};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace

System build_system(const RunConfig& config) {
  System s;
  s.P0 = cw_threshold_power(config.physical);

  std::optional<PumpSpectrum> custom;
  if (!config.pump.delta_p) custom = load_pump_spectrum(config.pump.file.string());
  const ModeWindow window = signal_window(config, custom ? &*custom : nullptr);
  const PumpSpectrum pump =
      custom ? *custom
             : gaussian_pump(*config.pump.delta_p, ModeWindow::of_half_width(config.pump.half_width.value_or(
                                                        std::max(1, 2 * window.M))));

  s.coupling = build_coupling(pump, config.dispersion, config.phase_match, window);
  s.modes = decompose(s.coupling);
  s.P_thr = spopo_threshold(s.P0, s.modes);
  s.drive = config.drive.kind == DriveConfig::Kind::Power
                ? PumpDrive::from_power(config.drive.value, s.P0, s.modes.lambda0_abs)
                : PumpDrive::from_rate(config.drive.value, s.P0, s.modes.lambda0_abs);
  return s;
}

RunResult run_analyze(const RunConfig& config) {
  const System s = build_system(config);
  const BranchRates rates = branch_rates(s.modes, s.drive.sigma, config.physical.gamma_s);

  RunResult result;
  std::ostringstream table;
  table << "k,Lambda_k,lambda_plus,lambda_minus\n";
  for (int k = 0; k < s.modes.size(); ++k)
    table << k << ',' << io::csv_row({s.modes.lambda(k), rates.plus(k), rates.minus(k)}) << '\n';
  result.files.push_back({"eigenvalues.csv", table.str()});

  for (int k = 0; k < std::min(config.analysis.supermodes, s.modes.size()); ++k) {
    std::ostringstream mode;
    write_supermode(mode, s.modes, k);
    result.files.push_back({"supermode_" + std::to_string(k) + ".csv", mode.str()});
  }
  result.files.push_back({"summary.txt", summary_text(s)});
  if (config.analysis.dump_coupling) {
    std::ostringstream dump;
    write_coupling(dump, s.coupling);
    result.files.push_back({"coupling.txt", dump.str()});
  }
  return result;
}

RunResult run_squeeze(const RunConfig& config) {
  const System s = build_system(config);
  require_below_threshold(s);
  const FrequencyGrid grid = analysis_grid(config);
  const double gamma_s = config.physical.gamma_s;

  RunResult result;
  for (int k = 0; k < std::min(config.analysis.supermodes, s.modes.size()); ++k) {
    std::ostringstream csv;
    write_spectrum_csv(csv, variance_spectrum(s.modes, k, s.drive.r, gamma_s, grid));
    result.files.push_back({"spectrum_" + std::to_string(k) + ".csv", csv.str()});
  }
  if (config.analysis.lo)
    result.files.push_back({"homodyne.csv", homodyne_csv(s, make_lo(*config.analysis.lo, s.modes), grid, gamma_s)});
  return result;
}

RunResult run_homodyne(const RunConfig& config) {
  const System s = build_system(config);
  require_below_threshold(s);
  const LocalOscillatorConfig lo_config = config.analysis.lo.value_or(LocalOscillatorConfig{0, {}, kThetaMinus});
  RunResult result;
  result.files.push_back(
      {"homodyne.csv", homodyne_csv(s, make_lo(lo_config, s.modes), analysis_grid(config), config.physical.gamma_s)});
  return result;
}

RunResult run_verify(const RunConfig& config) {
  const System s = build_system(config);
  const std::optional<OptimizedCaseSpec> optimized = optimized_case_from(config, s.modes.window);
  require_below_threshold(s);

  const double gamma_s = config.physical.gamma_s;
  const double r = s.drive.r, sigma = s.drive.sigma;
  const VerifyConfig& v = config.verify;
  std::vector<OracleCheck> checks;
  std::vector<std::string> notes;
  auto add = [&](std::string name, double measured, double tolerance, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, measured, tolerance, std::move(detail)});
  };

  if (optimized) {
    const OptimizedCaseReport a = analytic_optimized_case(*optimized);
    const double l0_err = std::abs(a.lambda0_numeric - a.lambda0_expected) / a.lambda0_expected;
    add("analytic_lambda0", l0_err, 0.01, l0_err <= 0.01,
        "numeric=" + io::format_double(a.lambda0_numeric) + " expected=" + io::format_double(a.lambda0_expected));
    add("analytic_rank_one", a.rank1_residual, 1e-8, a.rank1_residual < 1e-8);
    const double t_err = std::abs(a.threshold_ratio - a.threshold_ratio_expected) / a.threshold_ratio_expected;
    add("analytic_threshold_reduction", t_err, 0.01, t_err <= 0.01,
        "P0/P_thr=" + io::format_double(a.threshold_ratio) + " expected=" +
            io::format_double(a.threshold_ratio_expected) + " gaussian_width=" + io::format_double(a.gaussian_width) +
            " gaussian_fit_rms=" + io::format_double(a.gaussian_fit_error));
  } else {
    notes.push_back("# skipped analytic_lambda0, analytic_rank_one, analytic_threshold_reduction: not an optimized-case configuration");
  }

  const double frob = s.coupling.entries.norm();
  add("eigen_residual", s.modes.max_residual, 1e-10 * frob, s.modes.max_residual < 1e-10 * std::max(frob, 1e-300));

  const BranchRates rates = branch_rates(s.modes, sigma, gamma_s);
  const double upper = rates.plus(0) >= rates.minus(0) ? rates.plus(0) : rates.minus(0);
  const double lower = rates.plus(0) >= rates.minus(0) ? rates.minus(0) : rates.plus(0);
  double excess = 0.0;
  for (int k = 0; k < s.modes.size(); ++k)
    for (const double rate : {rates.plus(k), rates.minus(k)})
      excess = std::max({excess, rate - upper, lower - rate});
  const double bracket_tol = 1e-12 * gamma_s;
  add("spectral_bracketing", excess, bracket_tol, excess <= bracket_tol);

  // Covariance propagation against the supermode formula.
  std::mt19937_64 rng(v.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> phase(0.0, std::numbers::pi);
  Vector<double> random_e(s.modes.window.size());
  for (auto& x : random_e) x = normal(rng);
  std::vector<HomodyneLO> los{HomodyneLO::from_supermode(s.modes, 0, kThetaMinus),
                              HomodyneLO::from_supermode(s.modes, 0, kThetaPlus),
                              HomodyneLO::normalized(s.modes.window, random_e, phase(rng))};
  if (config.analysis.lo) los.push_back(make_lo(*config.analysis.lo, s.modes));
  const FrequencyGrid grid = analysis_grid(config);
  const int n_freq = std::min<int>(v.covariance_frequencies, static_cast<int>(grid.omegas.size()));
  double worst = 0.0;
  for (int i = 0; i < n_freq; ++i) {
    const Eigen::Index idx = n_freq == 1 ? 0 : (grid.omegas.size() - 1) * i / (n_freq - 1);
    for (const auto& lo : los)
      worst = std::max(worst, covariance_variance(s.coupling, sigma, gamma_s, grid.omegas(idx), lo).residual_vs_supermode);
  }
  add("covariance_oracle", worst, 1e-10, worst < 1e-10,
      "los=" + std::to_string(los.size()) + " frequencies=" + std::to_string(n_freq));

  // Deterministic time-domain decay.
  const int decay_modes = std::min(v.decay_modes, s.modes.size());
  if (decay_modes > 0) {
    double worst_rel = 0.0;
    for (int k = 0; k < decay_modes; ++k) {
      for (const Branch b : {Branch::Plus, Branch::Minus}) {
        const double expected = b == Branch::Plus ? rates.plus(k) : rates.minus(k);
        const double fitted = time_domain_decay(s.coupling, sigma, gamma_s, k, b, v.decay_horizon_gamma / gamma_s);
        worst_rel = std::max(worst_rel, std::abs(fitted - expected) / std::max(std::abs(expected), 1e-6 * gamma_s));
      }
    }
    add("time_domain_decay", worst_rel, 0.005, worst_rel <= 0.005, "modes=" + std::to_string(decay_modes));
  }

  // Monte Carlo homodyne estimate on the critical supermode, squeezed quadrature.
  if (s.modes.size() <= v.stochastic_max_modes) {
    const HomodyneLO lo = HomodyneLO::from_supermode(s.modes, 0, kThetaMinus);
    const StochasticEstimate est = stochastic_variance_estimate(
        s.coupling, sigma, gamma_s, 0.0, lo, v.trajectories, v.seed, {v.stochastic_step_gamma, v.stochastic_duration_gamma});
    const double expected = homodyne_variance(lo, s.modes, r, gamma_s, 0.0);
    const double deviation = std::abs(est.estimate - expected) / est.standard_error;
    add("stochastic_estimate", deviation, 3.0, deviation <= 3.0,
        "estimate=" + io::format_double(est.estimate) + " standard_error=" + io::format_double(est.standard_error) +
            " expected=" + io::format_double(expected) + " trajectories=" + std::to_string(v.trajectories) +
            " seed=" + std::to_string(v.seed));
  } else {
    notes.push_back("# skipped stochastic_estimate: " + std::to_string(s.modes.size()) +
                    " modes exceeds verify.stochastic_max_modes=" + std::to_string(v.stochastic_max_modes));
  }

  std::ostringstream report;
  report << "# spopo verification report, N=" << s.modes.size() << " r=" << io::format_double(r) << '\n';
  write_verification_report(report, checks);
  for (const auto& n : notes) report << n << '\n';

  RunResult result;
  result.files.push_back({"verification_report.txt", report.str()});
  for (const auto& c : checks)
    if (!c.passed) result.exit_code = exit_code::verification_failure;
  return result;
}

RunResult run_command(Command command, const RunConfig& config) {
  switch (command) {
    case Command::Analyze: return run_analyze(config);
    case Command::Squeeze: return run_squeeze(config);
    case Command::Homodyne: return run_homodyne(config);
    case Command::Verify: return run_verify(config);
  }
  throw std::logic_error("unknown command");
}

void write_outputs(const std::filesystem::path& dir, const std::vector<OutputFile>& files) {
  std::filesystem::create_directories(dir);
  for (const auto& f : files) {
    std::ofstream out(dir / f.name, std::ios::binary);
    out << f.content;
    if (!out) throw std::runtime_error("failed to write '" + (dir / f.name).string() + "'");
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Supermodes, threshold and squeezing spectra of a synchronously pumped OPO"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  const std::pair<const char*, Command> commands[] = {
      {"analyze", Command::Analyze}, {"squeeze", Command::Squeeze},
      {"homodyne", Command::Homodyne}, {"verify", Command::Verify}};
  const char* help[] = {"eigenvalues, supermodes and threshold summary", "per-supermode squeezing spectra",
                        "homodyne variance for a local-oscillator comb", "run the independent oracles"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "seed for the stochastic oracle (overrides verify.seed)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "spopo: " << e.what() << '\n';
    return exit_code::config_error;
  }

  Command command = Command::Analyze;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) command = commands[i].second;

  try {
    RunConfig config = load_config(config_path);
    if (seed) config.verify.seed = *seed;
    const RunResult result = run_command(command, config);
    write_outputs(out_dir, result.files);
    for (const auto& f : result.files) out << "wrote " << (std::filesystem::path(out_dir) / f.name).string() << '\n';
    if (result.exit_code == exit_code::verification_failure) err << "spopo: verification failed\n";
    return result.exit_code;
  } catch (const AboveThresholdError& e) {
    err << "spopo: " << e.what() << '\n';
    return exit_code::above_threshold;
  } catch (const SolverError& e) {
    err << "spopo: solver failure: " << e.what() << '\n';
    return exit_code::solver_failure;
  } catch (const std::invalid_argument& e) {
    err << "spopo: configuration error: " << e.what() << '\n';
    return exit_code::config_error;
  } catch (const std::exception& e) {
    err << "spopo: " << e.what() << '\n';
    return exit_code::solver_failure;
  }
}

}  // namespace spopo
