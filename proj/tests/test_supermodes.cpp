#include "spopo/supermodes.hpp"
#include "spopo/verify.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

using namespace spopo;

namespace {

CouplingMatrix exchange(int M) {
  Eigen::VectorXd a = Eigen::VectorXd::Ones(1);
  return build_coupling(custom_pump(a), DispersionParams{}, SincPhaseMatch{}, ModeWindow{M});
}

CouplingMatrix wrap(const Eigen::MatrixXd& a) { return {ModeWindow::of_size(a.rows()), a}; }

}  // namespace

TEST(Decompose, ExchangeMatrixSpectrum) {
  for (const int M : {0, 1, 4, 17, 50}) {
    const SupermodeSet s = decompose(exchange(M));
    int plus = 0, minus = 0;
    for (int k = 0; k < s.size(); ++k) {
      if (std::abs(s.lambda(k) - 1.0) < 1e-12) ++plus;
      if (std::abs(s.lambda(k) + 1.0) < 1e-12) ++minus;
    }
    EXPECT_EQ(plus, M + 1);
    EXPECT_EQ(minus, M);
    EXPECT_NEAR(s.lambda0_abs, 1.0, 1e-12);
    EXPECT_EQ(s.lambda0_sign, 1);
    // Ties in magnitude: positive eigenvalues first.
    for (int k = 0; k <= M; ++k) EXPECT_GT(s.lambda(k), 0.0);
  }
}

TEST(Decompose, OptimizedCaseRankOne) {
  const OptimizedCaseSpec spec = OptimizedCaseSpec::matched(20.0, 1e-3, ModeWindow{120});
  const SupermodeSet s = decompose(spec.coupling());
  const double expected = std::pow(std::numbers::pi, 0.25) * std::sqrt(10.0);
  EXPECT_NEAR(s.lambda0_abs, expected, 0.01 * expected);
  EXPECT_NEAR(expected, 4.2100520791381149, 1e-12);
  for (int k = 1; k < s.size(); ++k) EXPECT_LT(std::abs(s.lambda(k)), 1e-8 * s.lambda0_abs);
  // Dominant supermode is exp(-m^2 / delta_p^2), unit norm.
  Eigen::VectorXd g(s.window.size());
  for (int m = -120; m <= 120; ++m) g(s.window.index(m)) = std::exp(-m * m / 400.0);
  g.normalize();
  EXPECT_LT((s.mode(0) - g).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Decompose, MatchesJacobiAndCharacteristicPolynomial) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::MatrixXd a = oracle::random_symmetric(5, rng);
    const SupermodeSet s = decompose(wrap(a));
    auto [values, vectors] = oracle::jacobi_eigen(a);
    for (int k = 0; k < 5; ++k) {
      Eigen::Index j = 0;
      (values.array() - s.lambda(k)).abs().minCoeff(&j);
      EXPECT_NEAR(values(j), s.lambda(k), 1e-9);
      const double align = std::abs(vectors.col(j).dot(s.mode(k)));
      EXPECT_NEAR(align, 1.0, 1e-9);
      const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
      EXPECT_NEAR(oracle::char_poly(a, s.lambda(k)) / std::pow(scale, 5), 0.0, 1e-9);
    }
  }
}

TEST(Decompose, OrderingOrthonormalityAndResidual) {
  std::mt19937_64 rng(99);
  for (const int n : {1, 3, 9, 21, 41}) {
    const CouplingMatrix L = wrap(oracle::random_symmetric(n, rng));
    const SupermodeSet s = decompose(L);
    const double frob = L.entries.norm();
    for (int k = 0; k + 1 < n; ++k) EXPECT_GE(std::abs(s.lambda(k)), std::abs(s.lambda(k + 1)));
    const Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(gram(i, i), 1.0, 1e-12);
      for (int j = 0; j < n; ++j)
        if (i != j) EXPECT_LT(std::abs(gram(i, j)), 1e-10);
      EXPECT_LT((L.entries * s.mode(i) - s.lambda(i) * s.mode(i)).norm(), 1e-10 * frob);
    }
    EXPECT_LT(s.max_residual, 1e-10 * frob);
    // Reconstruction sum_k Lambda_k L_k L_k^T.
    const Eigen::MatrixXd rebuilt = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    EXPECT_LT((rebuilt - L.entries).norm() / frob, 1e-9);
  }
}

TEST(Decompose, NegativeDominantEigenvalueIsReportedBySign) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a.diagonal() << 0.5, -2.0, 1.0;
  const SupermodeSet s = decompose(wrap(a));
  EXPECT_EQ(s.lambda(0), -2.0);
  EXPECT_EQ(s.lambda0_abs, 2.0);
  EXPECT_EQ(s.lambda0_sign, -1);
  EXPECT_EQ(s.ratio(0), -1.0);
  EXPECT_GT(s.mode(0)(1), 0.0);
}

TEST(Decompose, DeterministicTieBreak) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a.diagonal() << -1.0, 1.0, -1.0;
  const SupermodeSet s = decompose(wrap(a));
  EXPECT_EQ(s.lambda(0), 1.0);
  EXPECT_EQ(s.lambda(1), -1.0);
  EXPECT_EQ(s.lambda(2), -1.0);
}

TEST(Decompose, LongDoubleAgreesWithDouble) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd a = oracle::random_symmetric(15, rng);
  const SupermodeSet s = decompose(wrap(a));
  const auto sl = decompose(BasicCouplingMatrix<long double>{ModeWindow{7}, a.cast<long double>()});
  EXPECT_LT((s.eigenvalues - sl.eigenvalues.cast<double>()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Decompose, RejectsNonFinite) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(decompose(wrap(a)), std::invalid_argument);
}

TEST(BranchRates, Examples) {
  std::mt19937_64 rng(8);
  const SupermodeSet s = decompose(wrap(oracle::random_symmetric(9, rng)));
  const double gamma = 2.5e6;
  const BranchRates zero = branch_rates(s, 0.0, gamma);
  for (int k = 0; k < 9; ++k) {
    EXPECT_EQ(zero.plus(k), -gamma);
    EXPECT_EQ(zero.minus(k), -gamma);
  }
  const BranchRates at = branch_rates(s, 1.0 / s.lambda0_abs, gamma);
  const BranchRates& crit = at;
  const double lam0p = s.lambda0_sign > 0 ? crit.plus(0) : crit.minus(0);
  const double lam0m = s.lambda0_sign > 0 ? crit.minus(0) : crit.plus(0);
  EXPECT_NEAR(lam0p, 0.0, 1e-9 * gamma);
  EXPECT_NEAR(lam0m, -2.0 * gamma, 1e-9 * gamma);

  const BranchRates half = branch_rates(s, 0.5 / s.lambda0_abs, gamma);
  for (int k = 0; k < 9; ++k)
    for (const double r : {half.plus(k), half.minus(k)}) {
      EXPECT_GE(r, -1.5 * gamma * (1 + 1e-15));
      EXPECT_LE(r, -0.5 * gamma * (1 - 1e-15));
    }
}

TEST(BranchRates, BracketedByCriticalPair) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 0.999);
  for (int trial = 0; trial < 40; ++trial) {
    const SupermodeSet s = decompose(wrap(oracle::random_symmetric(3 + 2 * (trial % 5), rng)));
    const double sigma = u(rng) / s.lambda0_abs;
    const BranchRates rates = branch_rates(s, sigma, 1.0);
    const double hi = std::max(rates.plus(0), rates.minus(0)), lo = std::min(rates.plus(0), rates.minus(0));
    EXPECT_LT(hi, 0.0);
    for (int k = 0; k < s.size(); ++k)
      for (const double r : {rates.plus(k), rates.minus(k)}) {
        EXPECT_LE(r, hi + 1e-14);
        EXPECT_GE(r, lo - 1e-14);
      }
  }
}

TEST(Threshold, Examples) {
  const SupermodeSet cw = decompose(exchange(5));
  EXPECT_DOUBLE_EQ(spopo_threshold(3.0e7, cw), 3.0e7);

  const OptimizedCaseSpec spec = OptimizedCaseSpec::matched(20.0, 1e-3, ModeWindow{120});
  const SupermodeSet opt = decompose(spec.coupling());
  EXPECT_NEAR(spopo_threshold(1.0, opt), 2.0 / (std::sqrt(std::numbers::pi) * 20.0), 1e-12);

  // delta_p = 100 reduction factor, evaluated from the closed form.
  EXPECT_NEAR(1.0 / (2.0 / (std::sqrt(std::numbers::pi) * 100.0)), 88.62, 0.01);

  const SupermodeSet zero = decompose(wrap(Eigen::MatrixXd::Zero(3, 3)));
  EXPECT_THROW(spopo_threshold(1.0, zero), std::invalid_argument);
  EXPECT_THROW(spopo_threshold(0.0, cw), std::invalid_argument);
}

TEST(Threshold, BelowThresholdPredicate) {
  EXPECT_TRUE(is_below_threshold(0.99));
  EXPECT_FALSE(is_below_threshold(1.0));
  EXPECT_TRUE(is_below_threshold(0.0));
  EXPECT_THROW(is_below_threshold(-0.1), std::invalid_argument);
}

TEST(SupermodeDump, Format) {
  const SupermodeSet s = decompose(exchange(1));
  std::ostringstream values, mode;
  write_eigenvalues(values, s);
  write_supermode(mode, s, 0);
  EXPECT_EQ(values.str().substr(0, 10), "k,Lambda_k");
  EXPECT_EQ(mode.str().substr(0, 7), "m,L_km\n");
  EXPECT_NE(mode.str().find("\n-1,"), std::string::npos);
  EXPECT_THROW(write_supermode(mode, s, 3), std::invalid_argument);
}
