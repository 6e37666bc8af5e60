// Copyright 2026 The singcov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "singcov/ewens.hpp"
#include "singcov/toeplitz.hpp"
#include "test_util.hpp"

namespace singcov {
namespace {

using testing::max_abs;
constexpr double kPi = std::numbers::pi;

TEST(TridiagonalToeplitz, ParameterRange) {
  EXPECT_NEAR(TridiagonalToeplitz::max_b(3), 1.0 / (2.0 * std::cos(kPi / 4.0)), 1e-15);
  EXPECT_THROW(TridiagonalToeplitz(3, 0.75), std::invalid_argument);
  EXPECT_THROW(TridiagonalToeplitz(3, -0.1), std::invalid_argument);
  const HermitianMatrix b = TridiagonalToeplitz(4, 0.3).matrix();
  EXPECT_EQ(b(0, 1), Complex(0.3));
  EXPECT_EQ(b(0, 2), Complex(0.0));
  EXPECT_EQ(b(3, 3), Complex(1.0));
}

TEST(TridiagEigensystem, Examples) {
  const SpectralDecomposition e = tridiag_eigensystem(3, 0.3);
  EXPECT_NEAR(e.eigenvalues(0), 1.4243, 1e-4);
  EXPECT_NEAR(e.eigenvalues(1), 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(2), 0.5757, 1e-4);
  const SpectralDecomposition flat = tridiag_eigensystem(6, 0.0);
  EXPECT_LT((flat.eigenvalues - RVector::Ones(6)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TridiagEigensystem, MatchesNumericAndReconstructs) {
  for (Index m : {2, 17, 80}) {
    const double b = 0.9 * TridiagonalToeplitz::max_b(m);
    const HermitianMatrix mat = TridiagonalToeplitz(m, b).matrix();
    const SpectralDecomposition closed = tridiag_eigensystem(m, b);
    EXPECT_LT((closed.eigenvalues - eig_hermitian(mat).eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(max_abs(closed.reconstruct() - mat.matrix()), 1e-12);
    EXPECT_GE(closed.eigenvalues.minCoeff(), -1e-12);
  }
}

TEST(PowerToeplitz, DeterminantAndInverse) {
  EXPECT_NEAR(power_det(3, 0.5), 0.5625, 1e-15);
  EXPECT_NEAR(PowerToeplitz(3, 0.5).matrix().matrix().determinant().real(), 0.5625, 1e-14);
  EXPECT_EQ(power_det(5, 0.0), 1.0);
  EXPECT_LT(max_abs(power_inverse(5, 0.0).matrix() - CMatrix::Identity(5, 5)), 1e-15);
  const CMatrix a = PowerToeplitz(4, 0.3).matrix().matrix();
  EXPECT_LT(max_abs(a * power_inverse(4, 0.3).matrix() - CMatrix::Identity(4, 4)), 1e-12);
  EXPECT_THROW(PowerToeplitz(3, 1.0), std::invalid_argument);
  EXPECT_THROW(PowerToeplitz(3, -0.2), std::invalid_argument);
}

TEST(PowerToeplitz, DeterminantMatchesLu) {
  for (Index m = 1; m <= 30; m += 7) {
    for (double alpha : {0.1, 0.5, 0.9}) {
      const double lu = PowerToeplitz(m, alpha).matrix().matrix().partialPivLu().determinant().real();
      EXPECT_NEAR(power_det(m, alpha) / lu, 1.0, 1e-10);
    }
  }
}

TEST(SymbolFunction, EndpointValues) {
  const double b = 0.3, alpha = 0.5;
  const SymbolFunction tri = SymbolFunction::tridiagonal(b);
  EXPECT_NEAR(symbol_eval(tri, 0.0), 1.0 + 2.0 * b, 1e-15);
  EXPECT_NEAR(tri.min(), 1.0 - 2.0 * b, 1e-15);
  const SymbolFunction pow = SymbolFunction::power(alpha);
  EXPECT_NEAR(symbol_eval(pow, 0.0), (1.0 + alpha) / (1.0 - alpha), 1e-14);
  EXPECT_NEAR(symbol_eval(pow, kPi), (1.0 - alpha) / (1.0 + alpha), 1e-14);
  EXPECT_NEAR(pow.max(), 3.0, 1e-14);
  const SymbolFunction shifted = tri.affine(2.0, -1.0);
  EXPECT_NEAR(shifted.eval(0.7), 2.0 * tri.eval(0.7) - 1.0, 1e-15);
  EXPECT_THROW(tri.affine(-1.0, 0.0), std::invalid_argument);
}

TEST(SymbolFunction, CdfIsPushForward) {
  // Compare F with the fraction of a fine uniform grid on [0, pi] mapped below t.
  for (const SymbolFunction& sym : {SymbolFunction::tridiagonal(0.3), SymbolFunction::power(0.6)}) {
    const int grid = 200000;
    std::vector<double> values(grid);
    for (int i = 0; i < grid; ++i) values[static_cast<std::size_t>(i)] = sym.eval(kPi * (i + 0.5) / grid);
    for (double q : {0.1, 0.37, 0.5, 0.81}) {
      const double t = sym.min() + q * (sym.max() - sym.min());
      double below = 0.0;
      for (double v : values) below += v <= t ? 1.0 : 0.0;
      EXPECT_NEAR(sym.cdf(t), below / grid, 1e-4);
    }
    EXPECT_EQ(sym.cdf(sym.min() - 1.0), 0.0);
    EXPECT_EQ(sym.cdf(sym.max() + 1.0), 1.0);
  }
}

TEST(LimitingDensity, MassAndPointMass) {
  const SymbolFunction tri = SymbolFunction::tridiagonal(0.3);
  std::vector<double> edges;
  for (int i = 0; i <= 400; ++i) edges.push_back(0.3 + 1.4 * i / 400.0);
  const std::vector<double> dens = limiting_density(tri, edges);
  ASSERT_EQ(dens.size(), 400u);
  double mass = 0.0;
  for (std::size_t k = 0; k < dens.size(); ++k) mass += dens[k] * (edges[k + 1] - edges[k]);
  EXPECT_NEAR(mass, 1.0, 1e-12);

  const std::vector<double> point = limiting_density(SymbolFunction::constant(1.0), {0.5, 0.9, 1.1, 1.5});
  EXPECT_EQ(point[0], 0.0);
  EXPECT_NEAR(point[1] * 0.2, 1.0, 1e-12);
  EXPECT_EQ(point[2], 0.0);
  EXPECT_THROW(limiting_density(tri, {1.0, 1.0}), std::invalid_argument);
}

TEST(EwensTransform, TridiagonalMatchesEntrywiseFormula) {
  for (Index m : {3, 5, 12, 30}) {
    const TridiagonalToeplitz b(m, 0.3);
    for (double theta : {0.5, 2.0, 40.0}) {
      EXPECT_LT(max_abs(ewens_transform_tridiagonal(b, theta).matrix() -
                        ewens_estimator(b.matrix(), theta).matrix()),
                1e-10);
    }
  }
}

TEST(EwensTransform, PowerMatchesEntrywiseFormula) {
  for (Index m : {3, 5, 12, 30}) {
    const PowerToeplitz a(m, 0.5);
    for (double theta : {0.5, 3.0, 40.0}) {
      EXPECT_LT(max_abs(ewens_transform_power(a, theta).matrix() - ewens_estimator(a.matrix(), theta).matrix()),
                1e-10);
    }
  }
}

TEST(EwensTransform, LargeThetaRecoversInput) {
  const TridiagonalToeplitz b(20, 0.3);
  EXPECT_LT(max_abs(ewens_transform_tridiagonal(b, 1e8).matrix() - b.matrix().matrix()), 1e-6);
}

TEST(TmMatrix, NormBound) {
  const Index m = 300;
  const RMatrix t = tridiag_t_matrix(m);
  const double md = static_cast<double>(m);
  EXPECT_LE((t / md).squaredNorm() / md, 16.0 / md);
  EXPECT_EQ(t(0, 0), 0.0);
  EXPECT_EQ(t(5, 5), 0.0);
  EXPECT_EQ(t(5, 6), 2.0);
  EXPECT_EQ(t(0, 9), 3.0);
}

TEST(LimitingSupport, Limits) {
  const double inf = std::numeric_limits<double>::infinity();
  const SupportInterval tri_raw = limiting_support_tridiagonal(0.3, inf);
  EXPECT_NEAR(tri_raw.lo, 0.4, 1e-15);
  EXPECT_NEAR(tri_raw.hi, 1.6, 1e-15);
  const SupportInterval pow_raw = limiting_support_power(0.5, inf);
  EXPECT_NEAR(pow_raw.lo, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(pow_raw.hi, 3.0, 1e-14);
  for (const SupportInterval& s : {limiting_support_tridiagonal(0.3, 0.0), limiting_support_power(0.5, 0.0)}) {
    EXPECT_EQ(s.lo, 1.0);
    EXPECT_EQ(s.hi, 1.0);
  }
  const SupportInterval one = limiting_support_tridiagonal(0.3, 1.0);
  EXPECT_NEAR(one.lo, 0.85, 1e-15);
  EXPECT_NEAR(one.hi, 1.15, 1e-15);
  EXPECT_THROW(SupportInterval(2.0, 1.0), std::invalid_argument);
  EXPECT_EQ(beta_weight(inf), 1.0);
  EXPECT_NEAR(beta_weight(1.0), 0.25, 1e-15);
}

TEST(LimitingSymbol, SupportMatchesSymbolRange) {
  for (double beta : {0.5, 1.0, 4.0}) {
    const SymbolFunction tri = limiting_symbol(SymbolFunction::tridiagonal(0.3), beta);
    const SupportInterval ts = limiting_support_tridiagonal(0.3, beta);
    EXPECT_NEAR(tri.min(), ts.lo, 1e-14);
    EXPECT_NEAR(tri.max(), ts.hi, 1e-14);
    const SymbolFunction pow = limiting_symbol(SymbolFunction::power(0.5), beta);
    const SupportInterval ps = limiting_support_power(0.5, beta);
    EXPECT_NEAR(pow.min(), ps.lo, 1e-14);
    EXPECT_NEAR(pow.max(), ps.hi, 1e-14);
  }
}

TEST(LimitingSymbol, BulkOfTransformMatchesLimit) {
  // The bulk of B_theta at theta = m follows the limiting symbol; only a few
  // outliers sit outside.
  const Index m = 300;
  const HermitianMatrix bt = ewens_transform_tridiagonal(TridiagonalToeplitz(m, 0.3), static_cast<double>(m));
  const SymbolFunction lim = limiting_symbol(SymbolFunction::tridiagonal(0.3), 1.0);
  const EmpiricalSpectralDistribution e = esd(bt);
  EXPECT_LT(e.kolmogorov_distance([&](double x) { return lim.cdf(x); }), 0.05);
}

}  // namespace
}  // namespace singcov
