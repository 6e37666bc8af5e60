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

#ifndef SINGCOV_EWENS_HPP
#define SINGCOV_EWENS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "singcov/linalg.hpp"
#include "singcov/monte_carlo.hpp"
#include "singcov/random.hpp"

namespace singcov {

// Ewens measure on S_m: p(sigma) = theta^{K(sigma)} / (theta (theta+1) ... (theta+m-1)),
// K(sigma) the number of cycles. theta = 1 is the uniform measure.
struct EwensParams {
  EwensParams(double theta, Index m);
  double theta;
  Index m;
};

// Indices are 0-based throughout: images[i] = sigma(i).
class Permutation {
 public:
  explicit Permutation(std::vector<Index> images);
  static Permutation identity(Index m);

  Index size() const { return static_cast<Index>(images_.size()); }
  const std::vector<Index>& images() const { return images_; }
  Index operator()(Index i) const { return images_[static_cast<std::size_t>(i)]; }
  Index cycle_count() const { return cycles_; }

  // M_sigma with rows e_{sigma(1)}, ..., e_{sigma(m)}.
  RMatrix matrix() const;

 private:
  std::vector<Index> images_;
  Index cycles_;
};

// An injection [p] -> [m].
class Injection {
 public:
  Injection(std::vector<Index> images, Index m);
  static Injection restrict(const Permutation& sigma, Index p);

  Index p() const { return static_cast<Index>(images_.size()); }
  Index m() const { return m_; }
  const std::vector<Index>& images() const { return images_; }
  Index operator()(Index i) const { return images_[static_cast<std::size_t>(i)]; }

  // Cycles of the partial map lying entirely inside [p]. Every completion
  // to a permutation of [m] keeps these cycles.
  Index closed_cycle_count() const;

  // V_sigma, the p x m matrix with rows e_{sigma(1)}, ..., e_{sigma(p)}.
  RMatrix matrix() const;

 private:
  std::vector<Index> images_;
  Index m_;
};

inline constexpr Index kMaxPermutationEnumeration = 9;
inline constexpr double kMaxInjectionEnumeration = 5e5;

double ewens_probability(const Permutation& sigma, double theta);
double ewens_log_probability(const Permutation& sigma, double theta);

// Chinese-restaurant (Feller) construction: element k opens a new cycle with
// probability theta / (theta + k), otherwise it is inserted after a uniformly
// chosen earlier element.
Permutation sample_ewens(Index m, double theta, RandomSource& rng);

// Draw a full Ewens permutation and keep its first p images.
Injection sample_injection(Index m, Index p, double theta, RandomSource& rng);

// Visits every permutation of [m] in lexicographic order. Rejects m above the
// enumeration budget.
void for_each_permutation(Index m, const std::function<void(const Permutation&)>& f);

// Visits every injection [p] -> [m]. Rejects more than 5e5 injections.
void for_each_injection(Index m, Index p, const std::function<void(const Injection&)>& f);

// mu_{theta,m,p}(sigma): the Ewens mass of all permutations extending sigma.
// Enumerates the (m-p)! completions when m - p <= 8 and otherwise uses the
// product form theta^{closed cycles} / prod_{t<p} (theta + m - 1 - t).
double injection_probability(const Injection& sigma, double theta);
double injection_probability_enumerated(const Injection& sigma, double theta);
double injection_probability_product(const Injection& sigma, double theta);

// K_theta = E[M_sigma K M_sigma*]. Valid for any square matrix; m = 1 returns K.
CMatrix ewens_estimator(const CMatrix& k, double theta);
HermitianMatrix ewens_estimator(const HermitianMatrix& k, double theta);
HermitianMatrix ewens_estimator_bruteforce(const HermitianMatrix& k, double theta);

// K_{theta,m,p} = E[V_sigma^T (V_sigma K V_sigma^T) V_sigma], an entrywise
// rescaling of K with coefficients set by whether i and j lie in [p].
CMatrix hybrid_estimator(const CMatrix& k, double theta, Index p);
HermitianMatrix hybrid_estimator(const HermitianMatrix& k, double theta, Index p);
HermitianMatrix hybrid_estimator_exhaustive(const HermitianMatrix& k, double theta, Index p);

// Coefficient multiplying a_ij in K_{theta,m,p}.
double hybrid_coefficient(Index i, Index j, Index m, double theta, Index p);

// Ktilde_{theta,m,p} for D = diag(d_1..d_n, 0..0) in dimension m.
HermitianMatrix hybrid_inverse_diagonal(const RVector& nonzero, Index m, double theta, Index p);

// Ktilde_{theta,m,p} = E[V_sigma^T (V_sigma K V_sigma^T)^+ V_sigma].
HermitianMatrix hybrid_inverse_exhaustive(const HermitianMatrix& k, double theta, Index p);
McEstimate hybrid_inverse_mc(const HermitianMatrix& k, double theta, Index p,
                             std::size_t samples, const RandomSource& rng);

// Ktilde_{theta,m,1} is diagonal: theta/(theta+m-1) a_11^+ then a_ii^+/(theta+m-1).
HermitianMatrix hybrid_inverse_base(const HermitianMatrix& k, double theta);

// Per-draw pieces of the rank-one update from p-1 to p: with K = R R*,
// R = U D^{1/2}, M = R[sigma(1..p), :]^*, M = [M_1 a],
//   (M* M)^+ = [(M_1* M_1)^+ 0; 0 0] + E_sigma.
struct InductiveDraw {
  Injection sigma;
  BlockPinvUpdate update;
  CMatrix lifted_correction;  // V_sigma^T E_sigma V_sigma
};

InductiveDraw inductive_draw(const CMatrix& root, const Injection& sigma);

// R with K = R R*; requires K positive semidefinite.
CMatrix psd_root(const HermitianMatrix& k);

// Ktilde_{theta,m,p} built as Ktilde_{theta,m,1} plus the Monte Carlo means of
// V_sigma^T E_sigma V_sigma for q = 2..p. Level q uses rng.substream(q); the
// reported standard errors add the levels in quadrature.
McEstimate hybrid_inverse_inductive(const HermitianMatrix& k, double theta, Index p,
                                    std::size_t samples, const RandomSource& rng);

// One step: `previous` (an estimate of Ktilde_{theta,m,p-1}) plus the Monte
// Carlo mean of V_sigma^T E_sigma V_sigma over sigma ~ mu_{theta,m,p}.
McEstimate hybrid_inverse_inductive_step(const HermitianMatrix& k, const McEstimate& previous,
                                         double theta, Index p, std::size_t samples,
                                         const RandomSource& rng);

}  // namespace singcov

#endif  // SINGCOV_EWENS_HPP
