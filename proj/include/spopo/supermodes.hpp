#pragma once

#include "spopo/coupling.hpp"
#include "spopo/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <numeric>
#include <sstream>
#include <type_traits>
#include <vector>

namespace spopo {

// Eigen-decomposition of the coupling matrix.
//
// Modes are ordered by descending |Lambda_k|. Equal magnitudes (to a few ulps
// of the spectral radius) put the positive eigenvalue first, then the lower
// solver index. Each eigenvector has unit norm and its largest-magnitude
// component (first one on ties) positive. Vectors spanning a degenerate
// eigenspace, in particular the null space of rank-deficient kernels, are
// whatever orthonormal basis the solver returns; they are not canonical.
template <typename Scalar>
struct BasicSupermodeSet {
  ModeWindow window;
  Vector<Scalar> eigenvalues;   // Lambda_k
  Matrix<Scalar> eigenvectors;  // column k holds L_{k,m} at row window.index(m)
  Scalar lambda0_abs = Scalar(0);
  int lambda0_sign = 1;
  Scalar max_residual = Scalar(0);  // max_k ||L v_k - Lambda_k v_k||

  int size() const { return static_cast<int>(eigenvalues.size()); }
  Scalar lambda(int k) const { return eigenvalues(k); }
  auto mode(int k) const { return eigenvectors.col(k); }
  // Lambda_k / |Lambda_0|, signed.
  Scalar ratio(int k) const { return eigenvalues(k) / lambda0_abs; }
};

using SupermodeSet = BasicSupermodeSet<double>;

namespace detail {

template <typename Scalar>
Scalar max_eigen_residual(const Matrix<Scalar>& L, const Vector<Scalar>& values, const Matrix<Scalar>& vectors) {
  Scalar worst(0);
  for (Eigen::Index k = 0; k < values.size(); ++k)
    worst = std::max<Scalar>(worst, (L * vectors.col(k) - values(k) * vectors.col(k)).norm());
  return worst;
}

}  // namespace detail

template <typename Scalar>
BasicSupermodeSet<Scalar> decompose(const BasicCouplingMatrix<Scalar>& L) {
  using std::abs;
  const Eigen::Index n = L.entries.rows();
  if (n == 0 || L.entries.cols() != n) throw std::invalid_argument("decompose: empty or non-square matrix");
  if (!L.entries.allFinite()) throw std::invalid_argument("decompose: non-finite coupling entries");

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(L.entries, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "decompose: symmetric eigensolver did not converge (N=" << n << ", residual achieved "
        << double(detail::max_eigen_residual<Scalar>(L.entries, solver.eigenvalues(), solver.eigenvectors()))
        << ")";
    throw SolverError(msg.str());
  }
  const Vector<Scalar>& values = solver.eigenvalues();
  const Matrix<Scalar>& vectors = solver.eigenvectors();

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return abs(values(a)) > abs(values(b)); });

  // Re-rank runs of (numerically) equal magnitude: positive first, then index.
  const Scalar radius = abs(values(order.front()));
  const Scalar tie = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * radius;
  for (Eigen::Index begin = 0; begin < n;) {
    Eigen::Index end = begin + 1;
    while (end < n && abs(values(order[begin])) - abs(values(order[end])) <= tie) ++end;
    std::sort(order.begin() + begin, order.begin() + end, [&](Eigen::Index a, Eigen::Index b) {
      const bool pa = values(a) > Scalar(0), pb = values(b) > Scalar(0);
      return pa != pb ? pa : a < b;
    });
    begin = end;
  }

  BasicSupermodeSet<Scalar> out;
  out.window = L.window;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = values(order[k]);
    auto v = out.eigenvectors.col(k);
    v = vectors.col(order[k]);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < Scalar(0)) v = -v;
  }
  // The threshold depends on Lambda_0 alone: refine it by the Rayleigh quotient in
  // wider precision, whose error is quadratic in the eigenvector error.
  using Wide = std::conditional_t<std::is_same_v<Scalar, double>, long double, Scalar>;
  const Vector<Wide> v0 = out.eigenvectors.col(0).template cast<Wide>();
  const Wide rayleigh = v0.dot(L.entries.template cast<Wide>() * v0) / v0.squaredNorm();
  if (abs(Scalar(rayleigh) - out.eigenvalues(0)) <= tie) out.eigenvalues(0) = Scalar(rayleigh);
  out.lambda0_abs = abs(out.eigenvalues(0));
  out.lambda0_sign = out.eigenvalues(0) < Scalar(0) ? -1 : 1;
  out.max_residual = detail::max_eigen_residual<Scalar>(L.entries, out.eigenvalues, out.eigenvectors);
  return out;
}

// Mean-field decay rates of the two quadrature branches, in rad/s.
struct BranchRates {
  Vector<double> plus;   // gamma_s (-1 + sigma Lambda_k)
  Vector<double> minus;  // gamma_s (-1 - sigma Lambda_k)
};

template <typename Scalar>
BranchRates branch_rates(const BasicSupermodeSet<Scalar>& s, double sigma, double gamma_s) {
  if (!(gamma_s > 0.0)) throw std::invalid_argument("branch_rates: gamma_s must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("branch_rates: sigma must be >= 0");
  const Vector<double> values = s.eigenvalues.template cast<double>();
  BranchRates rates;
  rates.plus = gamma_s * (-1.0 + sigma * values.array()).matrix();
  rates.minus = gamma_s * (-1.0 - sigma * values.array()).matrix();
  return rates;
}

/// P_thr = P0 / Lambda_0^2.
template <typename Scalar>
double spopo_threshold(double P0, const BasicSupermodeSet<Scalar>& s) {
  if (!(P0 > 0.0)) throw std::invalid_argument("spopo_threshold: P0 must be > 0");
  const double lambda0 = static_cast<double>(s.lambda0_abs);
  if (!(lambda0 > 0.0))
    throw std::invalid_argument("spopo_threshold: coupling matrix is identically zero, the device never oscillates");
  return P0 / (lambda0 * lambda0);
}

inline bool is_below_threshold(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("is_below_threshold: r must be >= 0");
  return r < 1.0;
}

/// Eigenvalue table "k,Lambda_k".
void write_eigenvalues(std::ostream& out, const SupermodeSet& s);
/// Supermode profile "m,L_km".
void write_supermode(std::ostream& out, const SupermodeSet& s, int k);

}  // namespace spopo
