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

#ifndef SINGCOV_TOEPLITZ_HPP
#define SINGCOV_TOEPLITZ_HPP

#include <vector>

#include "singcov/linalg.hpp"

namespace singcov {

// Symmetric tridiagonal Toeplitz matrix with unit diagonal and off-diagonal b,
// restricted to the PSD, entrywise nonnegative range 0 <= b <= 1/(2 cos(pi/(m+1))).
struct TridiagonalToeplitz {
  TridiagonalToeplitz(Index m, double b);
  static double max_b(Index m);
  HermitianMatrix matrix() const;

  Index m;
  double b;
};

// A_alpha = (alpha^{|i-j|}), 0 <= alpha < 1.
struct PowerToeplitz {
  PowerToeplitz(Index m, double alpha);
  HermitianMatrix matrix() const;

  Index m;
  double alpha;
};

enum class SymbolKind { tridiagonal, power, constant };

// Real symbol x -> shift + scale * a(e^{ix}) of one of the two families. Both
// raw symbols are even in x and decreasing on [0, pi], which gives the
// push-forward distribution function in closed form.
class SymbolFunction {
 public:
  static SymbolFunction tridiagonal(double b);
  static SymbolFunction power(double alpha);
  static SymbolFunction constant(double c);

  // shift + scale * (this symbol); scale >= 0.
  SymbolFunction affine(double scale, double shift) const;

  SymbolKind kind() const { return kind_; }
  double parameter() const { return param_; }
  double eval(double x) const;
  // mu((-inf, value]) for mu the push-forward of dx/2pi.
  double cdf(double value) const;
  double min() const;
  double max() const;

 private:
  SymbolFunction(SymbolKind kind, double param, double scale, double shift);
  double raw(double x) const;
  double raw_cdf(double value) const;
  bool degenerate() const;

  SymbolKind kind_;
  double param_;
  double scale_;
  double shift_;
};

struct SupportInterval {
  SupportInterval(double lo, double hi);
  double lo;
  double hi;
};

// lambda_j = 1 + 2b cos(pi j/(m+1)), v_j = sqrt(2/(m+1)) (sin(k pi j/(m+1)))_k,
// sorted by descending eigenvalue.
SpectralDecomposition tridiag_eigensystem(Index m, double b);

// (1 - alpha^2)^{m-1}.
double power_det(Index m, double alpha);
// (1/(1-alpha^2)) tridiag(-alpha; 1, 1+alpha^2, ..., 1+alpha^2, 1; -alpha).
HermitianMatrix power_inverse(Index m, double alpha);

double symbol_eval(const SymbolFunction& sym, double x);

// Bin-averaged density of the push-forward measure over consecutive `edges`
// (strictly increasing): (F(e_{k+1}) - F(e_k)) / (e_{k+1} - e_k).
std::vector<double> limiting_density(const SymbolFunction& sym, const std::vector<double>& edges);

// Pieces of the Ewens transforms of B and A_alpha.
RMatrix tridiag_t_matrix(Index m);
RMatrix tridiag_l_matrix(Index m, double b);
RMatrix power_j_matrix(Index m, double alpha);

// B_theta = I + (theta^2+theta-2)/den L_m + b(theta-1)/den T_m + 2b(m-1)/den (ee^T - I),
// den = (theta+m-2)(theta+m-1).
HermitianMatrix ewens_transform_tridiagonal(const TridiagonalToeplitz& b, double theta);

// A_theta = I + (theta^2-theta)/den (A - I) + c (ee^T - I) - (theta-1)/((1-alpha) den) J_m,
// c = 2 alpha (alpha^m - m alpha + m - 1 - 2(theta-1)(alpha-1)) / ((1-alpha)^2 den).
HermitianMatrix ewens_transform_power(const PowerToeplitz& a, double theta);

// beta^2/(beta+1)^2, with the beta -> inf limit 1.
double beta_weight(double beta);

// Symbol of I + w (T - I), w = beta_weight(beta): the theta = beta m limit.
SymbolFunction limiting_symbol(const SymbolFunction& raw, double beta);

// [1 - 2bw, 1 + 2bw] and [1 - 2 alpha w/(1+alpha), 1 + 2 alpha w/(1-alpha)].
// beta = 0 gives {1}; beta = +inf gives the support of the raw symbol.
SupportInterval limiting_support_tridiagonal(double b, double beta);
SupportInterval limiting_support_power(double alpha, double beta);

}  // namespace singcov

#endif  // SINGCOV_TOEPLITZ_HPP
