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

#ifndef SINGCOV_HAAR_HPP
#define SINGCOV_HAAR_HPP

#include <functional>
#include <vector>

#include "singcov/linalg.hpp"
#include "singcov/monte_carlo.hpp"

namespace singcov {

// Estimators obtained by compressing K with a Haar-random p x m matrix Phi
// (orthonormal rows), acting there, and lifting back with Phi*:
//   cov_p(K)    = E[Phi* (Phi K Phi*) Phi]
//   invcov_p(K) = E[Phi* (Phi K Phi*)^{-1} Phi]

struct LoadingParameters {
  LoadingParameters(double alpha, double beta);
  double alpha;
  double beta;
};

// alpha K + beta I.
HermitianMatrix diagonal_loading(const HermitianMatrix& k, const LoadingParameters& params);

// p / ((m^2 - 1) m) * ((mp - 1) K + (m - p) Tr(K) I). Requires m >= 2.
HermitianMatrix cov_p_closed(const HermitianMatrix& k, Index p);

// Generic Haar average E[f(Phi)] over Phi in the p x m Stiefel manifold.
MonteCarloRun haar_average(Index p, Index m, std::size_t samples, const RandomSource& rng,
                           const std::function<CMatrix(const CMatrix& phi)>& f);

McEstimate cov_p_mc(const HermitianMatrix& k, Index p, std::size_t samples,
                    const RandomSource& rng);

// Draws whose compressed matrix has condition number above 1e12 are rejected
// and redrawn; more than 1% rejected draws aborts with std::runtime_error.
McEstimate invcov_p_mc(const HermitianMatrix& k, Index p, std::size_t samples,
                       const RandomSource& rng);

// invcov_p(diag(d_1..d_n, 0..0)) = diag(lambda_1..lambda_n, mu..mu).
struct InvcovSpectrum {
  RVector lambdas;
  double mu = 0.0;
  Index p = 0;
  RVector lambda_standard_errors;
  double mu_standard_error = 0.0;
};

InvcovSpectrum invcov_spectrum(const RVector& nonzero, Index m, Index p, std::size_t samples,
                               const RandomSource& rng);

// s_{(N-j,1^j)}(I_p) / s_{(N-j,1^j)}(I_n)
//   = (N+p-j-1)! (n-j-1)! / ((N+n-j-1)! (p-j-1)!),
// evaluated through log-gamma; zero once j >= p.
double hook_moment_weight(int big_n, Index n, Index p, int j);

// E Tr((Phi D Phi*)^N) for D = diag(d), Phi Haar p x n, via the hook-shape
// Schur expansion.
double trace_moment(const RVector& d, Index p, int big_n);

ScalarEstimate trace_moment_mc(const RVector& d, Index p, int big_n, std::size_t samples,
                               const RandomSource& rng);

// E[Phi* (Phi D Phi*)^l Phi] = sum_k a_k D^k.
struct MomentCoefficients {
  int degree = 0;
  std::vector<double> coeffs;  // a_0..a_l

  // Diagonal of sum_k a_k D^k.
  RVector apply(const RVector& d) const;
};

MomentCoefficients moment_matrix_coeffs(const RVector& d, Index p, int l);

// Closed forms for l = 1 and l = 2, returned as the diagonal of the moment
// matrix.
RVector moment_matrix_l1(const RVector& d, Index p);
RVector moment_matrix_l2(const RVector& d, Index p);

McEstimate moment_matrix_mc(const RVector& d, Index p, int l, std::size_t samples,
                            const RandomSource& rng);

}  // namespace singcov

#endif  // SINGCOV_HAAR_HPP
