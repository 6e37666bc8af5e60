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

#include "singcov/ewens.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace singcov {

namespace {

void require_theta(double theta, const char* where) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument(std::string(where) + ": theta must be positive and finite");
  }
}

void require_p(Index p, Index m, const char* where) {
  if (p < 1 || p > m) {
    throw std::invalid_argument(std::string(where) + ": need 1 <= p <= m, got p=" +
                                std::to_string(p) + " m=" + std::to_string(m));
  }
}

// log(theta (theta+1) ... (theta+m-1)).
double log_rising(double theta, Index m) {
  double s = 0.0;
  for (Index t = 0; t < m; ++t) s += std::log(theta + static_cast<double>(t));
  return s;
}

double injection_count(Index m, Index p) {
  double n = 1.0;
  for (Index t = 0; t < p; ++t) n *= static_cast<double>(m - t);
  return n;
}

// Forward orbits of an injective partial map on [p] either return to their
// start or leave [p], so one visited mark per element suffices.
Index count_closed_cycles(const std::vector<Index>& images, Index p) {
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  Index cycles = 0;
  for (Index start = 0; start < p; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    Index j = start;
    while (j < p && !seen[static_cast<std::size_t>(j)]) {
      seen[static_cast<std::size_t>(j)] = 1;
      j = images[static_cast<std::size_t>(j)];
    }
    if (j == start) ++cycles;
  }
  return cycles;
}

CMatrix principal_block(const CMatrix& k, const std::vector<Index>& idx) {
  const Index p = static_cast<Index>(idx.size());
  CMatrix w(p, p);
  for (Index a = 0; a < p; ++a) {
    for (Index b = 0; b < p; ++b) w(a, b) = k(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  return w;
}

void scatter_add(CMatrix& out, const CMatrix& block, const std::vector<Index>& idx, double w) {
  const Index p = static_cast<Index>(idx.size());
  for (Index a = 0; a < p; ++a) {
    for (Index b = 0; b < p; ++b) {
      out(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]) += w * block(a, b);
    }
  }
}

CMatrix lifted_pinv(const CMatrix& k, const Injection& sigma) {
  const CMatrix block = principal_block(k, sigma.images());
  CMatrix out = CMatrix::Zero(k.rows(), k.cols());
  scatter_add(out, pseudoinverse(HermitianMatrix(block)).matrix(), sigma.images(), 1.0);
  return out;
}

McEstimate shifted(const McEstimate& est, const CMatrix& offset) {
  return McEstimate{HermitianMatrix(est.mean.matrix() + offset), est.standard_error, est.samples,
                    est.rejected};
}

}  // namespace

EwensParams::EwensParams(double t, Index dim) : theta(t), m(dim) {
  require_theta(t, "EwensParams");
  if (dim < 1) throw std::invalid_argument("EwensParams: need m >= 1");
}

Permutation::Permutation(std::vector<Index> images) : images_(std::move(images)) {
  const Index m = size();
  std::vector<char> hit(images_.size(), 0);
  for (Index v : images_) {
    if (v < 0 || v >= m || hit[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("Permutation: images are not a bijection on [m]");
    }
    hit[static_cast<std::size_t>(v)] = 1;
  }
  cycles_ = count_closed_cycles(images_, m);
}

Permutation Permutation::identity(Index m) {
  std::vector<Index> id(static_cast<std::size_t>(m));
  std::iota(id.begin(), id.end(), Index{0});
  return Permutation(std::move(id));
}

RMatrix Permutation::matrix() const {
  const Index m = size();
  RMatrix out = RMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) out(i, (*this)(i)) = 1.0;
  return out;
}

Injection::Injection(std::vector<Index> images, Index m) : images_(std::move(images)), m_(m) {
  if (p() > m) throw std::invalid_argument("Injection: p exceeds m");
  std::vector<char> hit(static_cast<std::size_t>(std::max<Index>(m, 0)), 0);
  for (Index v : images_) {
    if (v < 0 || v >= m || hit[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("Injection: images must be distinct values in [m]");
    }
    hit[static_cast<std::size_t>(v)] = 1;
  }
}

Injection Injection::restrict(const Permutation& sigma, Index p) {
  require_p(p, sigma.size(), "Injection::restrict");
  return Injection(std::vector<Index>(sigma.images().begin(), sigma.images().begin() + p),
                   sigma.size());
}

Index Injection::closed_cycle_count() const { return count_closed_cycles(images_, p()); }

RMatrix Injection::matrix() const {
  RMatrix out = RMatrix::Zero(p(), m_);
  for (Index i = 0; i < p(); ++i) out(i, (*this)(i)) = 1.0;
  return out;
}

double ewens_log_probability(const Permutation& sigma, double theta) {
  require_theta(theta, "ewens_probability");
  return static_cast<double>(sigma.cycle_count()) * std::log(theta) - log_rising(theta, sigma.size());
}

double ewens_probability(const Permutation& sigma, double theta) {
  return std::exp(ewens_log_probability(sigma, theta));
}

Permutation sample_ewens(Index m, double theta, RandomSource& rng) {
  require_theta(theta, "sample_ewens");
  if (m < 1) throw std::invalid_argument("sample_ewens: need m >= 1");
  std::vector<Index> images(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (rng.uniform() * (theta + static_cast<double>(k)) < theta) {
      images[ku] = k;
    } else {
      const auto j = static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(k)));
      images[ku] = images[j];
      images[j] = k;
    }
  }
  return Permutation(std::move(images));
}

Injection sample_injection(Index m, Index p, double theta, RandomSource& rng) {
  require_p(p, m, "sample_injection");
  return Injection::restrict(sample_ewens(m, theta, rng), p);
}

void for_each_permutation(Index m, const std::function<void(const Permutation&)>& f) {
  if (m < 1) throw std::invalid_argument("for_each_permutation: need m >= 1");
  if (m > kMaxPermutationEnumeration) {
    throw std::invalid_argument("for_each_permutation: m=" + std::to_string(m) +
                                " exceeds the enumeration budget m <= " +
                                std::to_string(kMaxPermutationEnumeration));
  }
  std::vector<Index> images(static_cast<std::size_t>(m));
  std::iota(images.begin(), images.end(), Index{0});
  do {
    f(Permutation(images));
  } while (std::next_permutation(images.begin(), images.end()));
}

void for_each_injection(Index m, Index p, const std::function<void(const Injection&)>& f) {
  require_p(p, m, "for_each_injection");
  const double count = injection_count(m, p);
  if (count > kMaxInjectionEnumeration) {
    throw std::invalid_argument("for_each_injection: " + std::to_string(count) +
                                " injections exceed the enumeration budget of 5e5");
  }
  std::vector<Index> images(static_cast<std::size_t>(p));
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  std::function<void(Index)> fill = [&](Index depth) {
    if (depth == p) {
      f(Injection(images, m));
      return;
    }
    for (Index v = 0; v < m; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[static_cast<std::size_t>(v)] = 1;
      images[static_cast<std::size_t>(depth)] = v;
      fill(depth + 1);
      used[static_cast<std::size_t>(v)] = 0;
    }
  };
  fill(0);
}

double injection_probability_enumerated(const Injection& sigma, double theta) {
  require_theta(theta, "injection_probability");
  const Index m = sigma.m();
  const Index p = sigma.p();
  if (m - p > 8) {
    throw std::invalid_argument("injection_probability_enumerated: (m-p)! completions exceed "
                                "the budget m - p <= 8");
  }
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (Index v : sigma.images()) used[static_cast<std::size_t>(v)] = 1;
  std::vector<Index> rest;
  for (Index v = 0; v < m; ++v) {
    if (!used[static_cast<std::size_t>(v)]) rest.push_back(v);
  }
  std::vector<Index> images(sigma.images());
  images.resize(static_cast<std::size_t>(m));
  const double log_norm = log_rising(theta, m);
  const double log_theta = std::log(theta);
  double total = 0.0;
  do {
    std::copy(rest.begin(), rest.end(), images.begin() + p);
    total += std::exp(static_cast<double>(count_closed_cycles(images, m)) * log_theta - log_norm);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return total;
}

double injection_probability_product(const Injection& sigma, double theta) {
  require_theta(theta, "injection_probability");
  const double mm = static_cast<double>(sigma.m());
  double log_mu = static_cast<double>(sigma.closed_cycle_count()) * std::log(theta);
  for (Index t = 0; t < sigma.p(); ++t) log_mu -= std::log(theta + mm - 1.0 - static_cast<double>(t));
  return std::exp(log_mu);
}

double injection_probability(const Injection& sigma, double theta) {
  if (sigma.m() - sigma.p() <= 8) return injection_probability_enumerated(sigma, theta);
  return injection_probability_product(sigma, theta);
}

CMatrix ewens_estimator(const CMatrix& k, double theta) {
  require_theta(theta, "ewens_estimator");
  const Index m = k.rows();
  if (m != k.cols() || m < 1) throw std::invalid_argument("ewens_estimator: K must be square");
  if (m == 1) return k;
  const double md = static_cast<double>(m);
  const Complex tr = k.trace();
  const Complex total = k.sum();
  const CVector row = k.rowwise().sum();
  const CVector col = k.colwise().sum().transpose();
  const double den1 = theta + md - 1.0;
  const double den2 = (theta + md - 2.0) * den1;
  const Complex off_all = total - tr;  // sum over l != k of a_lk

  CMatrix out(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (i == j) {
        out(i, i) = ((theta - 1.0) * k(i, i) + tr) / den1;
        continue;
      }
      const Complex side = (row(i) - k(i, i) - k(i, j)) + (col(j) - k(i, j) - k(j, j));
      out(i, j) = ((theta * theta - 1.0) * k(i, j) + (theta - 1.0) * k(j, i) +
                   (theta - 1.0) * side + off_all) /
                  den2;
    }
  }
  return out;
}

HermitianMatrix ewens_estimator(const HermitianMatrix& k, double theta) {
  return HermitianMatrix(ewens_estimator(k.matrix(), theta));
}

HermitianMatrix ewens_estimator_bruteforce(const HermitianMatrix& k, double theta) {
  require_theta(theta, "ewens_estimator_bruteforce");
  const Index m = k.dim();
  const CMatrix& a = k.matrix();
  CMatrix out = CMatrix::Zero(m, m);
  for_each_permutation(m, [&](const Permutation& sigma) {
    const double w = ewens_probability(sigma, theta);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) out(i, j) += w * a(sigma(i), sigma(j));
    }
  });
  return HermitianMatrix(out);
}

double hybrid_coefficient(Index i, Index j, Index m, double theta, Index p) {
  const double md = static_cast<double>(m);
  const double pd = static_cast<double>(p);
  const double den1 = theta + md - 1.0;
  const bool in_i = i < p;
  const bool in_j = j < p;
  if (i == j) return in_i ? (theta + pd - 1.0) / den1 : pd / den1;
  const double den2 = den1 * (theta + md - 2.0);
  if (in_i && in_j) return (theta + pd - 1.0) * (theta + pd - 2.0) / den2;
  if (in_i || in_j) return (pd - 1.0) * (theta + pd - 1.0) / den2;
  return pd * (pd - 1.0) / den2;
}

CMatrix hybrid_estimator(const CMatrix& k, double theta, Index p) {
  require_theta(theta, "hybrid_estimator");
  const Index m = k.rows();
  if (m != k.cols()) throw std::invalid_argument("hybrid_estimator: K must be square");
  if (m < 2) throw std::invalid_argument("hybrid_estimator: need m >= 2");
  require_p(p, m, "hybrid_estimator");
  CMatrix out(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) out(i, j) = hybrid_coefficient(i, j, m, theta, p) * k(i, j);
  }
  return out;
}

HermitianMatrix hybrid_estimator(const HermitianMatrix& k, double theta, Index p) {
  return HermitianMatrix(hybrid_estimator(k.matrix(), theta, p));
}

HermitianMatrix hybrid_estimator_exhaustive(const HermitianMatrix& k, double theta, Index p) {
  require_theta(theta, "hybrid_estimator_exhaustive");
  const Index m = k.dim();
  const CMatrix& a = k.matrix();
  CMatrix out = CMatrix::Zero(m, m);
  for_each_injection(m, p, [&](const Injection& sigma) {
    scatter_add(out, principal_block(a, sigma.images()), sigma.images(),
                injection_probability(sigma, theta));
  });
  return HermitianMatrix(out);
}

HermitianMatrix hybrid_inverse_diagonal(const RVector& nonzero, Index m, double theta, Index p) {
  require_theta(theta, "hybrid_inverse_diagonal");
  const Index n = nonzero.size();
  if (n < 1 || n > m) throw std::invalid_argument("hybrid_inverse_diagonal: need 1 <= n <= m");
  if (m < 2) throw std::invalid_argument("hybrid_inverse_diagonal: need m >= 2");
  require_p(p, m, "hybrid_inverse_diagonal");
  if (!(nonzero.array() > 0.0).all()) {
    throw std::invalid_argument("hybrid_inverse_diagonal: d_1..d_n must be positive");
  }
  RVector out = RVector::Zero(m);
  for (Index i = 0; i < n; ++i) out(i) = hybrid_coefficient(i, i, m, theta, p) / nonzero(i);
  return HermitianMatrix::diagonal(out);
}

HermitianMatrix hybrid_inverse_exhaustive(const HermitianMatrix& k, double theta, Index p) {
  require_theta(theta, "hybrid_inverse_exhaustive");
  const Index m = k.dim();
  CMatrix out = CMatrix::Zero(m, m);
  for_each_injection(m, p, [&](const Injection& sigma) {
    const CMatrix block = principal_block(k.matrix(), sigma.images());
    scatter_add(out, pseudoinverse(HermitianMatrix(block)).matrix(), sigma.images(),
                injection_probability(sigma, theta));
  });
  return HermitianMatrix(out);
}

McEstimate hybrid_inverse_mc(const HermitianMatrix& k, double theta, Index p,
                             std::size_t samples, const RandomSource& rng) {
  require_theta(theta, "hybrid_inverse_mc");
  require_p(p, k.dim(), "hybrid_inverse_mc");
  if (samples < 1) throw std::invalid_argument("hybrid_inverse_mc: need samples >= 1");
  const Index m = k.dim();
  const MonteCarloRun run = run_monte_carlo(samples, rng, [&](RandomSource& r, std::size_t&) {
    return lifted_pinv(k.matrix(), sample_injection(m, p, theta, r));
  });
  return to_estimate(run.acc);
}

HermitianMatrix hybrid_inverse_base(const HermitianMatrix& k, double theta) {
  require_theta(theta, "hybrid_inverse_base");
  const Index m = k.dim();
  RVector out = RVector::Zero(m);
  for (Index i = 0; i < m; ++i) {
    const double a = k(i, i).real();
    if (a != 0.0) out(i) = hybrid_coefficient(i, i, m, theta, 1) / a;
  }
  return HermitianMatrix::diagonal(out);
}

CMatrix psd_root(const HermitianMatrix& k) {
  const SpectralDecomposition eig = eig_hermitian(k);
  const double top = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues.minCoeff() < -1e-10 * top) {
    throw std::invalid_argument("psd_root: K is not positive semidefinite");
  }
  const RVector root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors * root.cast<Complex>().asDiagonal();
}

InductiveDraw inductive_draw(const CMatrix& root, const Injection& sigma) {
  const Index p = sigma.p();
  if (p < 2) throw std::invalid_argument("inductive_draw: need p >= 2");
  const Index m = root.rows();
  CMatrix rows(p, root.cols());
  for (Index a = 0; a < p; ++a) rows.row(a) = root.row(sigma(a));
  const CMatrix mm = rows.adjoint();  // M = [M_1 a]
  BlockPinvUpdate update = block_pinv_update(mm.leftCols(p - 1), mm.col(p - 1));
  CMatrix lifted = CMatrix::Zero(m, m);
  scatter_add(lifted, update.correction, sigma.images(), 1.0);
  return InductiveDraw{sigma, std::move(update), std::move(lifted)};
}

McEstimate hybrid_inverse_inductive_step(const HermitianMatrix& k, const McEstimate& previous,
                                         double theta, Index p, std::size_t samples,
                                         const RandomSource& rng) {
  require_theta(theta, "hybrid_inverse_inductive_step");
  const Index m = k.dim();
  require_p(p, m, "hybrid_inverse_inductive_step");
  if (p < 2) throw std::invalid_argument("hybrid_inverse_inductive_step: need p >= 2");
  if (previous.mean.dim() != m) {
    throw std::invalid_argument("hybrid_inverse_inductive_step: dimension mismatch");
  }
  if (samples < 1) throw std::invalid_argument("hybrid_inverse_inductive_step: need samples >= 1");
  const CMatrix root = psd_root(k);
  const MonteCarloRun run = run_monte_carlo(samples, rng, [&](RandomSource& r, std::size_t&) {
    return inductive_draw(root, sample_injection(m, p, theta, r)).lifted_correction;
  });
  const RMatrix step_se = run.acc.standard_error();
  RMatrix se = step_se;
  if (previous.standard_error.size() == step_se.size()) {
    se = (previous.standard_error.cwiseAbs2() + step_se.cwiseAbs2()).cwiseSqrt();
  }
  McEstimate out = shifted(McEstimate{previous.mean, se, samples, 0}, run.acc.mean());
  return out;
}

McEstimate hybrid_inverse_inductive(const HermitianMatrix& k, double theta, Index p,
                                    std::size_t samples, const RandomSource& rng) {
  require_p(p, k.dim(), "hybrid_inverse_inductive");
  const Index m = k.dim();
  McEstimate est{hybrid_inverse_base(k, theta), RMatrix::Zero(m, m), 0, 0};
  for (Index q = 2; q <= p; ++q) {
    est = hybrid_inverse_inductive_step(k, est, theta, q, samples,
                                        rng.substream(static_cast<std::uint64_t>(q)));
  }
  return est;
}

}  // namespace singcov
