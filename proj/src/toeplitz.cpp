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

#include "singcov/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace singcov {

namespace {

void require_m(Index m, Index min_m, const char* where) {
  if (m < min_m) {
    throw std::invalid_argument(std::string(where) + ": need m >= " + std::to_string(min_m));
  }
}

void require_alpha(double alpha, const char* where) {
  if (!(std::abs(alpha) < 1.0)) {
    throw std::invalid_argument(std::string(where) + ": need |alpha| < 1 (A_alpha is singular at 1)");
  }
}

void require_theta(double theta, const char* where) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument(std::string(where) + ": theta must be positive and finite");
  }
}

}  // namespace

TridiagonalToeplitz::TridiagonalToeplitz(Index dim, double off) : m(dim), b(off) {
  require_m(dim, 1, "TridiagonalToeplitz");
  if (!(off >= 0.0) || off > max_b(dim) * (1.0 + 1e-12)) {
    throw std::invalid_argument("TridiagonalToeplitz: b=" + std::to_string(off) +
                                " outside [0, 1/(2 cos(pi/(m+1)))]");
  }
}

double TridiagonalToeplitz::max_b(Index m) {
  const double c = std::cos(std::numbers::pi / static_cast<double>(m + 1));
  return c > 0.0 ? 0.5 / c : std::numeric_limits<double>::infinity();
}

HermitianMatrix TridiagonalToeplitz::matrix() const {
  return HermitianMatrix::from_real(RMatrix::Identity(m, m) + tridiag_l_matrix(m, b));
}

PowerToeplitz::PowerToeplitz(Index dim, double a) : m(dim), alpha(a) {
  require_m(dim, 1, "PowerToeplitz");
  if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("PowerToeplitz: need 0 <= alpha < 1");
}

HermitianMatrix PowerToeplitz::matrix() const {
  RMatrix a(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) a(i, j) = std::pow(alpha, static_cast<double>(std::abs(i - j)));
  }
  return HermitianMatrix::from_real(a);
}

SymbolFunction::SymbolFunction(SymbolKind kind, double param, double scale, double shift)
    : kind_(kind), param_(param), scale_(scale), shift_(shift) {}

SymbolFunction SymbolFunction::tridiagonal(double b) {
  if (!(b >= 0.0)) throw std::invalid_argument("SymbolFunction::tridiagonal: need b >= 0");
  return SymbolFunction(SymbolKind::tridiagonal, b, 1.0, 0.0);
}

SymbolFunction SymbolFunction::power(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("SymbolFunction::power: need 0 <= alpha < 1");
  }
  return SymbolFunction(SymbolKind::power, alpha, 1.0, 0.0);
}

SymbolFunction SymbolFunction::constant(double c) {
  return SymbolFunction(SymbolKind::constant, c, 1.0, 0.0);
}

SymbolFunction SymbolFunction::affine(double scale, double shift) const {
  if (!(scale >= 0.0)) throw std::invalid_argument("SymbolFunction::affine: need scale >= 0");
  return SymbolFunction(kind_, param_, scale_ * scale, shift_ * scale + shift);
}

double SymbolFunction::raw(double x) const {
  switch (kind_) {
    case SymbolKind::tridiagonal:
      return 1.0 + 2.0 * param_ * std::cos(x);
    case SymbolKind::power: {
      const double a = param_;
      return (1.0 - a * a) / (1.0 - 2.0 * a * std::cos(x) + a * a);
    }
    case SymbolKind::constant:
      break;
  }
  return param_;
}

bool SymbolFunction::degenerate() const {
  return scale_ == 0.0 || kind_ == SymbolKind::constant || param_ == 0.0;
}

double SymbolFunction::eval(double x) const { return shift_ + scale_ * raw(x); }

double SymbolFunction::min() const { return eval(std::numbers::pi); }
double SymbolFunction::max() const { return eval(0.0); }

// Both raw symbols increase with c = cos x, so mu(raw <= v) = P(cos x <= c*)
// = 1 - arccos(c*)/pi for x uniform on [0, pi].
double SymbolFunction::raw_cdf(double value) const {
  double c = 0.0;
  if (kind_ == SymbolKind::tridiagonal) {
    c = (value - 1.0) / (2.0 * param_);
  } else {
    const double a = param_;
    if (value <= 0.0) return 0.0;
    c = (1.0 + a * a - (1.0 - a * a) / value) / (2.0 * a);
  }
  c = std::clamp(c, -1.0, 1.0);
  return 1.0 - std::acos(c) / std::numbers::pi;
}

double SymbolFunction::cdf(double value) const {
  if (degenerate()) return value >= eval(0.0) ? 1.0 : 0.0;
  return raw_cdf((value - shift_) / scale_);
}

SupportInterval::SupportInterval(double l, double h) : lo(l), hi(h) {
  if (!(lo <= hi)) throw std::invalid_argument("SupportInterval: need lo <= hi");
}

SpectralDecomposition tridiag_eigensystem(Index m, double b) {
  require_m(m, 1, "tridiag_eigensystem");
  const double h = std::numbers::pi / static_cast<double>(m + 1);
  const double norm = std::sqrt(2.0 / static_cast<double>(m + 1));
  SpectralDecomposition out{RVector(m), CMatrix(m, m)};
  // j = 1..m gives descending eigenvalues for b >= 0; reverse for b < 0.
  for (Index c = 0; c < m; ++c) {
    const Index j = b >= 0.0 ? c + 1 : m - c;
    out.eigenvalues(c) = 1.0 + 2.0 * b * std::cos(h * static_cast<double>(j));
    for (Index k = 0; k < m; ++k) {
      out.eigenvectors(k, c) = norm * std::sin(h * static_cast<double>((k + 1) * j));
    }
  }
  return out;
}

double power_det(Index m, double alpha) {
  require_m(m, 1, "power_det");
  require_alpha(alpha, "power_det");
  return std::pow(1.0 - alpha * alpha, static_cast<double>(m - 1));
}

HermitianMatrix power_inverse(Index m, double alpha) {
  require_m(m, 1, "power_inverse");
  require_alpha(alpha, "power_inverse");
  const double s = 1.0 / (1.0 - alpha * alpha);
  RMatrix out = RMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    const bool end = (i == 0 || i == m - 1);
    out(i, i) = s * (end ? 1.0 : 1.0 + alpha * alpha);
    if (i + 1 < m) out(i, i + 1) = out(i + 1, i) = -s * alpha;
  }
  if (m == 1) out(0, 0) = 1.0;
  return HermitianMatrix::from_real(out);
}

double symbol_eval(const SymbolFunction& sym, double x) { return sym.eval(x); }

std::vector<double> limiting_density(const SymbolFunction& sym, const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("limiting_density: need at least two edges");
  std::vector<double> out(edges.size() - 1);
  double prev = sym.cdf(edges[0]);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double width = edges[k + 1] - edges[k];
    if (!(width > 0.0)) throw std::invalid_argument("limiting_density: edges must increase");
    const double next = sym.cdf(edges[k + 1]);
    out[k] = (next - prev) / width;
    prev = next;
  }
  return out;
}

// Off-diagonal entry (i, j) collects sum_{k != i,j} (b_ik + b_kj) / b, the
// number of band neighbours of i other than j plus those of j other than i.
RMatrix tridiag_t_matrix(Index m) {
  require_m(m, 1, "tridiag_t_matrix");
  auto neighbours = [m](Index i) -> double { return (i > 0 ? 1.0 : 0.0) + (i + 1 < m ? 1.0 : 0.0); };
  RMatrix t = RMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (i == j) continue;
      const double adjacent = std::abs(i - j) == 1 ? 1.0 : 0.0;
      t(i, j) = neighbours(i) + neighbours(j) - 2.0 * adjacent;
    }
  }
  return t;
}

RMatrix tridiag_l_matrix(Index m, double b) {
  require_m(m, 1, "tridiag_l_matrix");
  RMatrix l = RMatrix::Zero(m, m);
  for (Index i = 0; i + 1 < m; ++i) l(i, i + 1) = l(i + 1, i) = b;
  return l;
}

RMatrix power_j_matrix(Index m, double alpha) {
  require_m(m, 1, "power_j_matrix");
  const auto pw = [alpha](Index k) { return std::pow(alpha, static_cast<double>(k)); };
  RMatrix j = RMatrix::Zero(m, m);
  for (Index r = 1; r <= m; ++r) {
    for (Index c = 1; c <= m; ++c) {
      if (r != c) j(r - 1, c - 1) = pw(r) + pw(c) + pw(m + 1 - r) + pw(m + 1 - c);
    }
  }
  return j;
}

HermitianMatrix ewens_transform_tridiagonal(const TridiagonalToeplitz& tb, double theta) {
  require_theta(theta, "ewens_transform_tridiagonal");
  const Index m = tb.m;
  require_m(m, 2, "ewens_transform_tridiagonal");
  const double md = static_cast<double>(m);
  const double den = (theta + md - 2.0) * (theta + md - 1.0);
  const RMatrix id = RMatrix::Identity(m, m);
  const RMatrix ones = RMatrix::Ones(m, m);
  const RMatrix out = id + (theta * theta + theta - 2.0) / den * tridiag_l_matrix(m, tb.b) +
                      tb.b * (theta - 1.0) / den * tridiag_t_matrix(m) +
                      2.0 * tb.b * (md - 1.0) / den * (ones - id);
  return HermitianMatrix::from_real(out);
}

HermitianMatrix ewens_transform_power(const PowerToeplitz& pa, double theta) {
  require_theta(theta, "ewens_transform_power");
  const Index m = pa.m;
  require_m(m, 2, "ewens_transform_power");
  const double a = pa.alpha;
  const double md = static_cast<double>(m);
  const double den = (theta + md - 2.0) * (theta + md - 1.0);
  const double ee_coeff = 2.0 * a *
                          (std::pow(a, md) - md * a + md - 1.0 - 2.0 * (theta - 1.0) * (a - 1.0)) /
                          ((1.0 - a) * (1.0 - a) * den);
  const RMatrix id = RMatrix::Identity(m, m);
  const RMatrix ones = RMatrix::Ones(m, m);
  const RMatrix am = pa.matrix().matrix().real();
  const RMatrix out = id + (theta * theta - theta) / den * (am - id) + ee_coeff * (ones - id) -
                      (theta - 1.0) / ((1.0 - a) * den) * power_j_matrix(m, a);
  return HermitianMatrix::from_real(out);
}

double beta_weight(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta_weight: need beta >= 0");
  if (std::isinf(beta)) return 1.0;
  const double r = beta / (beta + 1.0);
  return r * r;
}

SymbolFunction limiting_symbol(const SymbolFunction& raw, double beta) {
  const double w = beta_weight(beta);
  return raw.affine(w, 1.0 - w);
}

SupportInterval limiting_support_tridiagonal(double b, double beta) {
  const double w = beta_weight(beta);
  return SupportInterval(1.0 - 2.0 * std::abs(b) * w, 1.0 + 2.0 * std::abs(b) * w);
}

SupportInterval limiting_support_power(double alpha, double beta) {
  require_alpha(alpha, "limiting_support_power");
  const double w = beta_weight(beta);
  return SupportInterval(1.0 - 2.0 * alpha * w / (1.0 + alpha),
                         1.0 + 2.0 * alpha * w / (1.0 - alpha));
}

}  // namespace singcov
