#pragma once

#include "spopo/comb.hpp"
#include "spopo/phase_matching.hpp"

#include <iosfwd>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spopo {

// Real symmetric parametric coupling L_{m,q} on a mode window.
template <typename Scalar>
struct BasicCouplingMatrix {
  ModeWindow window;
  Matrix<Scalar> entries;

  Scalar operator()(int m, int q) const { return entries(window.index(m), window.index(q)); }
};

using CouplingMatrix = BasicCouplingMatrix<double>;

// Pump power fraction that may fall outside the reachable index range -2M..2M
// before build_coupling refuses the window.
inline constexpr double kMaxDiscardedPumpPower = 1e-6;

/// L_{m,q} = pm_factor(phi_{m,q}) * alpha_{m+q}. Pump amplitudes outside the
/// pump's own window count as zero. Only the upper triangle is evaluated; the
/// lower one is a copy, so the result is exactly symmetric.
template <typename Scalar>
BasicCouplingMatrix<Scalar> build_coupling(const BasicPumpSpectrum<Scalar>& pump, const DispersionParams& d,
                                           const PhaseMatchModel& model, ModeWindow window) {
  d.validate();
  validate(model);
  if (pump.alpha.size() != pump.window.size()) throw std::invalid_argument("build_coupling: malformed pump spectrum");

  Scalar discarded(0);
  for (int j = pump.window.first(); j <= pump.window.last(); ++j)
    if (j < -2 * window.M || j > 2 * window.M) discarded += pump.at(j) * pump.at(j);
  if (discarded > Scalar(kMaxDiscardedPumpPower)) {
    std::ostringstream msg;
    msg << "build_coupling: signal window M=" << window.M << " reaches pump indices up to |m+q|=" << 2 * window.M
        << " but the pump extends to M=" << pump.window.M << "; discarded pump power fraction " << double(discarded)
        << " exceeds " << kMaxDiscardedPumpPower << " (use M >= " << (pump.window.M + 1) / 2 << ")";
    throw std::invalid_argument(msg.str());
  }

  const int n = window.size();
  Matrix<Scalar> L(n, n);
  for (int i = 0; i < n; ++i) {
    const int m = window.mode(i);
    for (int j = i; j < n; ++j) {
      const int q = window.mode(j);
      const Scalar a = pump.at(m + q);
      L(i, j) = a == Scalar(0) ? Scalar(0) : pm_factor<Scalar>(mismatch_angle<Scalar>(m, q, d), model) * a;
      L(j, i) = L(i, j);
    }
  }
  return {window, std::move(L)};
}

/// Row-major text dump, one matrix row per line, 17 significant digits.
void write_coupling(std::ostream& out, const CouplingMatrix& L);

}  // namespace spopo
