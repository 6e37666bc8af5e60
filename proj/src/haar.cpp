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

#include "singcov/haar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "singcov/combinatorics.hpp"

namespace singcov {

namespace {

void require_p(Index p, Index m, const char* where) {
  if (p < 1 || p > m) {
    throw std::invalid_argument(std::string(where) + ": need 1 <= p <= " + std::to_string(m) +
                                ", got p=" + std::to_string(p));
  }
}

// 1/k! with 1/k! = 0 for negative k (the reciprocal Gamma function at
// non-positive integers).
double inv_factorial(int k) { return k < 0 ? 0.0 : 1.0 / std::tgamma(k + 1.0); }

double factorial(int k) { return std::tgamma(k + 1.0); }

std::vector<double> diagonal_values(const RVector& d) {
  return std::vector<double>(d.data(), d.data() + d.size());
}

}  // namespace

LoadingParameters::LoadingParameters(double a, double b) : alpha(a), beta(b) {
  if (!(a >= 0.0) || !(b >= 0.0) || (a == 0.0 && b == 0.0)) {
    throw std::invalid_argument("LoadingParameters: need alpha, beta >= 0, not both zero");
  }
}

HermitianMatrix diagonal_loading(const HermitianMatrix& k, const LoadingParameters& params) {
  return HermitianMatrix(params.alpha * k.matrix() +
                         params.beta * CMatrix::Identity(k.dim(), k.dim()));
}

HermitianMatrix cov_p_closed(const HermitianMatrix& k, Index p) {
  const Index m = k.dim();
  if (m < 2) throw std::invalid_argument("cov_p_closed: need m >= 2");
  require_p(p, m, "cov_p_closed");
  const double md = static_cast<double>(m);
  const double pd = static_cast<double>(p);
  const double scale = pd / ((md * md - 1.0) * md);
  return HermitianMatrix(scale * ((md * pd - 1.0) * k.matrix() +
                                  (md - pd) * k.trace() * CMatrix::Identity(m, m)));
}

MonteCarloRun haar_average(Index p, Index m, std::size_t samples, const RandomSource& rng,
                           const std::function<CMatrix(const CMatrix& phi)>& f) {
  require_p(p, m, "haar_average");
  return run_monte_carlo(samples, rng, [&](RandomSource& r, std::size_t&) {
    return f(sample_haar_stiefel(p, m, r).matrix());
  });
}

McEstimate cov_p_mc(const HermitianMatrix& k, Index p, std::size_t samples,
                    const RandomSource& rng) {
  const CMatrix& a = k.matrix();
  const MonteCarloRun run = haar_average(p, k.dim(), samples, rng, [&](const CMatrix& phi) {
    return CMatrix(phi.adjoint() * (phi * a * phi.adjoint()) * phi);
  });
  return to_estimate(run.acc);
}

McEstimate invcov_p_mc(const HermitianMatrix& k, Index p, std::size_t samples,
                       const RandomSource& rng) {
  const Index m = k.dim();
  require_p(p, m, "invcov_p_mc");
  if (samples < 1) throw std::invalid_argument("invcov_p_mc: need samples >= 1");
  const Index rank = numerical_rank(k);
  if (p > rank) {
    throw std::invalid_argument("invcov_p_mc: p=" + std::to_string(p) + " exceeds rank(K)=" +
                                std::to_string(rank));
  }
  constexpr double kMaxCondition = 1e12;
  constexpr int kMaxConsecutive = 1000;
  const CMatrix& a = k.matrix();

  const MonteCarloRun run = run_monte_carlo(samples, rng, [&](RandomSource& r,
                                                              std::size_t& rejected) {
    for (int attempt = 0; attempt < kMaxConsecutive; ++attempt) {
      const CMatrix phi = sample_haar_stiefel(p, m, r).matrix();
      const CMatrix w = phi * a * phi.adjoint();
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(w);
      const RVector& lam = eig.eigenvalues();
      const double lo = lam.cwiseAbs().minCoeff();
      const double hi = lam.cwiseAbs().maxCoeff();
      if (!(lo > 0.0) || hi / lo > kMaxCondition) {
        ++rejected;
        continue;
      }
      const CMatrix half = phi.adjoint() * eig.eigenvectors();
      return CMatrix(half * lam.cwiseInverse().cast<Complex>().asDiagonal() * half.adjoint());
    }
    throw std::runtime_error("invcov_p_mc: compressed matrix persistently ill-conditioned");
  });
  if (static_cast<double>(run.rejected) > 0.01 * static_cast<double>(samples)) {
    throw std::runtime_error("invcov_p_mc: " + std::to_string(run.rejected) +
                             " ill-conditioned draws exceed 1% of " + std::to_string(samples));
  }
  return to_estimate(run.acc, run.rejected);
}

InvcovSpectrum invcov_spectrum(const RVector& nonzero, Index m, Index p, std::size_t samples,
                               const RandomSource& rng) {
  const Index n = nonzero.size();
  if (n < 1 || n > m) throw std::invalid_argument("invcov_spectrum: need 1 <= n <= m");
  RVector d = RVector::Zero(m);
  d.head(n) = nonzero;
  const McEstimate est = invcov_p_mc(HermitianMatrix::diagonal(d), p, samples, rng);
  InvcovSpectrum out;
  out.p = p;
  out.lambdas = est.mean.diagonal_real().head(n);
  out.lambda_standard_errors = est.standard_error.diagonal().head(n);
  if (n < m) {
    out.mu = est.mean.diagonal_real().tail(m - n).mean();
    out.mu_standard_error = est.standard_error.diagonal().tail(m - n).maxCoeff();
  }
  return out;
}

double hook_moment_weight(int big_n, Index n, Index p, int j) {
  if (j < 0 || j >= p || j >= big_n) return 0.0;
  const double nn = static_cast<double>(n);
  const double pp = static_cast<double>(p);
  // (x)! = Gamma(x + 1); factorial overflow is avoided by working in logs.
  const double log_ratio = std::lgamma(big_n + pp - j) + std::lgamma(nn - j) -
                           std::lgamma(big_n + nn - j) - std::lgamma(pp - j);
  return std::exp(log_ratio);
}

double trace_moment(const RVector& d, Index p, int big_n) {
  const Index n = d.size();
  require_p(p, n, "trace_moment");
  if (big_n < 1) throw std::invalid_argument("trace_moment: need N >= 1");
  const std::vector<double> x = diagonal_values(d);
  const PowerSums ps = PowerSums::of(x, big_n);
  double total = 0.0;
  for (int j = 0; j < std::min<Index>(p, big_n); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    total += sign * hook_moment_weight(big_n, n, p, j) * schur_hook_powersum(HookShape(big_n, j), ps);
  }
  return total;
}

ScalarEstimate trace_moment_mc(const RVector& d, Index p, int big_n, std::size_t samples,
                               const RandomSource& rng) {
  const CMatrix dm = d.cast<Complex>().asDiagonal();
  const MonteCarloRun run = haar_average(p, d.size(), samples, rng, [&](const CMatrix& phi) {
    const CMatrix w = phi * dm * phi.adjoint();
    CMatrix power = CMatrix::Identity(p, p);
    for (int k = 0; k < big_n; ++k) power = power * w;
    CMatrix out(1, 1);
    out(0, 0) = power.trace();
    return out;
  });
  return ScalarEstimate{run.acc.mean()(0, 0).real(), run.acc.standard_error()(0, 0),
                        run.acc.count()};
}

RVector MomentCoefficients::apply(const RVector& d) const {
  RVector out = RVector::Zero(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    double pw = 1.0;
    for (double a : coeffs) {
      out(i) += a * pw;
      pw *= d(i);
    }
  }
  return out;
}

MomentCoefficients moment_matrix_coeffs(const RVector& d, Index p, int l) {
  const Index n = d.size();
  require_p(p, n, "moment_matrix_coeffs");
  if (l < 1) throw std::invalid_argument("moment_matrix_coeffs: need l >= 1");
  // The i-th diagonal entry is (1/(l+1)) d/dd_i E Tr((Phi D Phi*)^{l+1}).
  const int big_n = l + 1;
  const PowerSums ps = PowerSums::of(diagonal_values(d), big_n);
  MomentCoefficients out{l, std::vector<double>(static_cast<std::size_t>(l) + 1, 0.0)};
  for (int j = 0; j < std::min<Index>(p, big_n); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double w = sign * hook_moment_weight(big_n, n, p, j) / big_n;
    const std::vector<double> c = schur_hook_derivative_coeffs(HookShape(big_n, j), ps);
    for (int k = 0; k <= l; ++k) out.coeffs[static_cast<std::size_t>(k)] += w * c[static_cast<std::size_t>(k)];
  }
  return out;
}

RVector moment_matrix_l1(const RVector& d, Index p) {
  const Index n = d.size();
  require_p(p, n, "moment_matrix_l1");
  if (n < 2) throw std::invalid_argument("moment_matrix_l1: need n >= 2");
  const double nn = static_cast<double>(n);
  const double pp = static_cast<double>(p);
  const double denom = nn * (nn * nn - 1.0);
  return (pp * (nn * pp - 1.0) / denom) * d +
         RVector::Constant(n, pp * (nn - pp) / denom * d.sum());
}

RVector moment_matrix_l2(const RVector& d, Index p) {
  const Index n = d.size();
  require_p(p, n, "moment_matrix_l2");
  if (n < 3) throw std::invalid_argument("moment_matrix_l2: need n >= 3");
  const int ni = static_cast<int>(n);
  const int pi = static_cast<int>(p);
  const double c0 = factorial(2 + pi) * factorial(ni - 1) * inv_factorial(2 + ni) * inv_factorial(pi - 1) / 3.0;
  const double c1 = factorial(1 + pi) * factorial(ni - 2) * inv_factorial(1 + ni) * inv_factorial(pi - 2) / 3.0;
  const double c2 = factorial(pi) * factorial(ni - 3) * inv_factorial(ni) * inv_factorial(pi - 3) / 3.0;
  const double tr = d.sum();
  const double tr2 = d.squaredNorm();
  const double constant =
      c0 * (tr * tr + tr2) / 2.0 - c1 * tr * tr + c2 * (tr * tr - tr2) / 2.0;
  return (c0 + c1 + c2) * d.cwiseAbs2() + (c0 - c2) * tr * d + RVector::Constant(n, constant);
}

McEstimate moment_matrix_mc(const RVector& d, Index p, int l, std::size_t samples,
                            const RandomSource& rng) {
  const CMatrix dm = d.cast<Complex>().asDiagonal();
  const MonteCarloRun run = haar_average(p, d.size(), samples, rng, [&](const CMatrix& phi) {
    const CMatrix w = phi * dm * phi.adjoint();
    CMatrix power = CMatrix::Identity(p, p);
    for (int k = 0; k < l; ++k) power = power * w;
    return CMatrix(phi.adjoint() * power * phi);
  });
  return to_estimate(run.acc);
}

}  // namespace singcov
