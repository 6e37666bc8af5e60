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

#ifndef SINGCOV_LINALG_HPP
#define SINGCOV_LINALG_HPP

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "singcov/random.hpp"

namespace singcov {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Dense complex Hermitian m x m matrix. The constructor accepts matrices that
// are Hermitian up to rounding and stores the exact Hermitian part, so every
// HermitianMatrix satisfies a(i,j) == conj(a(j,i)) bit for bit.
class HermitianMatrix {
 public:
  // Rejects non-square, empty, non-finite, or visibly non-Hermitian input.
  // `rel_tol` bounds max|a - a*| relative to 1 + max|a|.
  explicit HermitianMatrix(const CMatrix& a, double rel_tol = 1e-9);

  static HermitianMatrix from_real(const RMatrix& a);
  static HermitianMatrix identity(Index m);
  static HermitianMatrix zero(Index m);
  static HermitianMatrix diagonal(const RVector& d);

  Index dim() const { return a_.rows(); }
  const CMatrix& matrix() const { return a_; }
  Complex operator()(Index i, Index j) const { return a_(i, j); }
  double trace() const { return a_.trace().real(); }
  RVector diagonal_real() const { return a_.diagonal().real(); }

 private:
  CMatrix a_;
};

// Eigenvalues sorted descending; columns of `eigenvectors` are the matching
// orthonormal eigenvectors, K = U diag(eigenvalues) U*.
struct SpectralDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  CMatrix reconstruct() const;
};

// p x m complex matrix with orthonormal rows.
class StiefelMatrix {
 public:
  explicit StiefelMatrix(CMatrix phi, double tol = 1e-10);

  Index rows() const { return phi_.rows(); }
  Index cols() const { return phi_.cols(); }
  const CMatrix& matrix() const { return phi_; }

 private:
  CMatrix phi_;
};

// The measure placing mass 1/m on each eigenvalue of an m x m matrix.
class EmpiricalSpectralDistribution {
 public:
  explicit EmpiricalSpectralDistribution(std::vector<double> eigenvalues);

  std::size_t size() const { return values_.size(); }
  // Ascending.
  const std::vector<double>& eigenvalues() const { return values_; }
  double cdf(double x) const;
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  // sup_x |F_esd(x) - F(x)| for a continuous distribution function F.
  template <class Cdf>
  double kolmogorov_distance(Cdf&& cdf_fn) const {
    const double m = static_cast<double>(values_.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double f = cdf_fn(values_[i]);
      d = std::max(d, std::max(f - static_cast<double>(i) / m,
                               static_cast<double>(i + 1) / m - f));
    }
    return d;
  }

 private:
  std::vector<double> values_;
};

SpectralDecomposition eig_hermitian(const HermitianMatrix& k);

// Moore-Penrose pseudoinverse of a Hermitian matrix. Eigenvalues with
// |lambda| <= rank_tol * max|lambda| are treated as zero; the default
// rank_tol is m * machine epsilon.
HermitianMatrix pseudoinverse(const HermitianMatrix& k,
                              std::optional<double> rank_tol = std::nullopt);

// SVD-based pseudoinverse of a general rectangular matrix, with the standard
// max(rows, cols) * eps * sigma_max numerical-rank cutoff.
CMatrix pseudoinverse_general(const CMatrix& a);

// B^+ for B = M*M, M = [A a], assembled from the pseudoinverse of A*A by the
// rank-one column update. `correction` is E in
//   B^+ = [(A*A)^+ 0; 0 0] + E.
struct BlockPinvUpdate {
  HermitianMatrix pinv;
  CMatrix correction;
  double schur_complement;  // s = |a|^2 - a* A A^+ a
  bool nonzero_branch;      // true when s was treated as nonzero
};

BlockPinvUpdate block_pinv_update(const CMatrix& a_block, const CVector& a_col);

double frobenius_norm(const CMatrix& a);
inline double frobenius_norm(const HermitianMatrix& a) { return frobenius_norm(a.matrix()); }

EmpiricalSpectralDistribution esd(const HermitianMatrix& k);

// ((1/m) Tr((A-B)(A-B)*))^{1/3}: an upper bound on the Levy distance between
// the two empirical spectral distributions.
double levy_bound(const HermitianMatrix& a, const HermitianMatrix& b);

// K = (1/n) M M* with columns x_i = Sigma^{1/2} g_i, g_i standard complex
// Gaussian.
HermitianMatrix sample_gaussian_covariance(const HermitianMatrix& sigma, Index n,
                                           RandomSource& rng);

// Haar-distributed p x m matrix with orthonormal rows.
StiefelMatrix sample_haar_stiefel(Index p, Index m, RandomSource& rng);

// Number of eigenvalues with |lambda| > rel_tol * max|lambda|.
Index numerical_rank(const HermitianMatrix& k, double rel_tol = -1.0);

}  // namespace singcov

#endif  // SINGCOV_LINALG_HPP
