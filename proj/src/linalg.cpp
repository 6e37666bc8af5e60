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

#include "singcov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace singcov {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const CMatrix& a, const char* where) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": non-finite matrix entry");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& a, double rel_tol) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument("HermitianMatrix: need a non-empty square matrix, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  require_finite(a, "HermitianMatrix");
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > rel_tol * scale) {
    throw std::invalid_argument("HermitianMatrix: matrix is not Hermitian (max |a - a*| = " +
                                std::to_string(asym) + ")");
  }
  a_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::from_real(const RMatrix& a) {
  return HermitianMatrix(a.cast<Complex>());
}

HermitianMatrix HermitianMatrix::identity(Index m) {
  return HermitianMatrix(CMatrix::Identity(m, m));
}

HermitianMatrix HermitianMatrix::zero(Index m) { return HermitianMatrix(CMatrix::Zero(m, m)); }

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return HermitianMatrix(d.cast<Complex>().asDiagonal().toDenseMatrix());
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

StiefelMatrix::StiefelMatrix(CMatrix phi, double tol) : phi_(std::move(phi)) {
  if (phi_.rows() < 1 || phi_.rows() > phi_.cols()) {
    throw std::invalid_argument("StiefelMatrix: need 1 <= p <= m");
  }
  const CMatrix gram = phi_ * phi_.adjoint();
  const double err = (gram - CMatrix::Identity(phi_.rows(), phi_.rows())).norm();
  if (!(err <= tol)) {
    throw std::invalid_argument("StiefelMatrix: rows are not orthonormal (|PP* - I| = " +
                                std::to_string(err) + ")");
  }
}

EmpiricalSpectralDistribution::EmpiricalSpectralDistribution(std::vector<double> eigenvalues)
    : values_(std::move(eigenvalues)) {
  if (values_.empty()) {
    throw std::invalid_argument("EmpiricalSpectralDistribution: no eigenvalues");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalSpectralDistribution::cdf(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

SpectralDecomposition eig_hermitian(const HermitianMatrix& k) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(k.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  const Index m = k.dim();
  SpectralDecomposition out{RVector(m), CMatrix(m, m)};
  for (Index j = 0; j < m; ++j) {
    out.eigenvalues(j) = solver.eigenvalues()(m - 1 - j);
    out.eigenvectors.col(j) = solver.eigenvectors().col(m - 1 - j);
  }
  return out;
}

HermitianMatrix pseudoinverse(const HermitianMatrix& k, std::optional<double> rank_tol) {
  const double tol = rank_tol.value_or(static_cast<double>(k.dim()) * kEps);
  if (!(tol > 0.0)) {
    throw std::invalid_argument("pseudoinverse: rank_tol must be positive");
  }
  const SpectralDecomposition eig = eig_hermitian(k);
  const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
  RVector inv = RVector::Zero(k.dim());
  for (Index j = 0; j < k.dim(); ++j) {
    const double lam = eig.eigenvalues(j);
    if (top > 0.0 && std::abs(lam) > tol * top) inv(j) = 1.0 / lam;
  }
  return HermitianMatrix(eig.eigenvectors * inv.cast<Complex>().asDiagonal() *
                         eig.eigenvectors.adjoint());
}

CMatrix pseudoinverse_general(const CMatrix& a) {
  if (a.size() == 0) return CMatrix::Zero(a.cols(), a.rows());
  require_finite(a, "pseudoinverse_general");
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double cutoff =
      static_cast<double>(std::max(a.rows(), a.cols())) * kEps * (sv.size() ? sv(0) : 0.0);
  RVector inv = RVector::Zero(sv.size());
  for (Index j = 0; j < sv.size(); ++j) {
    if (sv(j) > cutoff) inv(j) = 1.0 / sv(j);
  }
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

BlockPinvUpdate block_pinv_update(const CMatrix& a_block, const CVector& a_col) {
  const Index m = a_col.size();
  if (a_block.rows() != m) {
    throw std::invalid_argument("block_pinv_update: A has " + std::to_string(a_block.rows()) +
                                " rows but a has " + std::to_string(m));
  }
  const Index k = a_block.cols();  // n - 1
  const Index n = k + 1;

  const CMatrix a_pinv = pseudoinverse_general(a_block);  // k x m
  const CVector c = a_pinv * a_col;                      // A^+ a
  const double norm_a2 = a_col.squaredNorm();
  const double s = norm_a2 - (a_col.adjoint() * (a_block * c))(0).real();
  // s is a Schur complement and scales with |a|^2.
  const bool nonzero = std::abs(s) > 1e-10 * (1.0 + norm_a2);

  CMatrix e = CMatrix::Zero(n, n);
  if (nonzero) {
    const double inv_s = 1.0 / s;
    e.topLeftCorner(k, k) = inv_s * c * c.adjoint();
    e.topRightCorner(k, 1) = -inv_s * c;
    e.bottomLeftCorner(1, k) = -inv_s * c.adjoint();
    e(k, k) = inv_s;
  } else {
    // b = (A*)^+ (I + c c*)^{-1} c, and (A*)^+ = (A^+)*.
    const CMatrix shifted = CMatrix::Identity(k, k) + c * c.adjoint();
    const CVector b = a_pinv.adjoint() * shifted.ldlt().solve(c);
    const CVector d = a_pinv * b;  // A^+ b
    const double nb2 = b.squaredNorm();
    e.topLeftCorner(k, k) = nb2 * c * c.adjoint() - c * d.adjoint() - d * c.adjoint();
    e.topRightCorner(k, 1) = -nb2 * c + d;
    e.bottomLeftCorner(1, k) = (-nb2 * c + d).adjoint();
    e(k, k) = nb2;
  }

  CMatrix full = e;
  if (k > 0) {
    // (A*A)^+ = A^+ (A^+)*, which reuses the SVD instead of squaring A.
    full.topLeftCorner(k, k) += a_pinv * a_pinv.adjoint();
  }
  return BlockPinvUpdate{HermitianMatrix(full), std::move(e), s, nonzero};
}

double frobenius_norm(const CMatrix& a) { return a.norm(); }

EmpiricalSpectralDistribution esd(const HermitianMatrix& k) {
  const RVector ev = eig_hermitian(k).eigenvalues;
  return EmpiricalSpectralDistribution(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

double levy_bound(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("levy_bound: dimension mismatch");
  }
  const double msq = (a.matrix() - b.matrix()).squaredNorm() / static_cast<double>(a.dim());
  return std::cbrt(msq);
}

HermitianMatrix sample_gaussian_covariance(const HermitianMatrix& sigma, Index n,
                                           RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("sample_gaussian_covariance: need n >= 1");
  const SpectralDecomposition eig = eig_hermitian(sigma);
  const double top = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues.minCoeff() < -1e-10 * top) {
    throw std::invalid_argument("sample_gaussian_covariance: Sigma is not positive semidefinite");
  }
  const Index m = sigma.dim();
  const RVector root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_sigma =
      eig.eigenvectors * root.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
  CMatrix g(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) g(i, j) = rng.complex_normal();
  }
  const CMatrix data = sqrt_sigma * g;
  return HermitianMatrix(data * data.adjoint() / static_cast<double>(n));
}

StiefelMatrix sample_haar_stiefel(Index p, Index m, RandomSource& rng) {
  if (p < 1 || p > m) {
    throw std::invalid_argument("sample_haar_stiefel: need 1 <= p <= m, got p=" +
                                std::to_string(p) + " m=" + std::to_string(m));
  }
  CMatrix z(m, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < m; ++i) z(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, p);
  // Fix the phases so that R has a positive diagonal; this makes the law of Q
  // exactly Haar.
  for (Index j = 0; j < p; ++j) {
    const Complex r = qr.matrixQR()(j, j);
    const double mag = std::abs(r);
    if (mag > 0.0) q.col(j) *= r / mag;
  }
  return StiefelMatrix(q.adjoint());
}

Index numerical_rank(const HermitianMatrix& k, double rel_tol) {
  if (rel_tol < 0.0) rel_tol = 1e-10;
  const RVector ev = eig_hermitian(k).eigenvalues;
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<Index>((ev.array().abs() > rel_tol * top).count());
}

}  // namespace singcov
