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

#ifndef SINGCOV_COMBINATORICS_HPP
#define SINGCOV_COMBINATORICS_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace singcov {

// Integer partition d_1 >= d_2 >= ... > 0. The empty partition has weight 0.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int weight() const { return weight_; }
  int length() const { return static_cast<int>(parts_.size()); }
  // Part i (0-based), zero past the end.
  int part(int i) const { return i < length() ? parts_[static_cast<std::size_t>(i)] : 0; }

  Partition conjugate() const;

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

// The hook (N - j, 1^j).
class HookShape {
 public:
  HookShape(int weight, int leg);

  int weight() const { return weight_; }
  int leg() const { return leg_; }
  int arm() const { return weight_ - leg_; }
  Partition partition() const;

 private:
  int weight_;
  int leg_;
};

// rho = (1^{r_1} 2^{r_2} ... N^{r_N}), stored as multiplicities r_l.
class CycleType {
 public:
  explicit CycleType(std::vector<int> multiplicities);
  static CycleType from_partition(const Partition& rho);

  int weight() const { return weight_; }
  // r_l for l >= 1; zero beyond the stored range.
  int multiplicity(int l) const;
  int max_length() const { return static_cast<int>(mult_.size()); }
  Partition partition() const;
  // z_rho = prod_l l^{r_l} r_l!
  std::int64_t centralizer_size() const;

 private:
  std::vector<int> mult_;
  int weight_ = 0;
};

// Power sums p_l = Tr(D^l) = sum_i x_i^l for l = 1..degree.
class PowerSums {
 public:
  explicit PowerSums(std::vector<double> values);
  static PowerSums of(std::span<const double> x, int degree);

  int degree() const { return static_cast<int>(values_.size()); }
  // 1-based.
  double operator[](int l) const { return values_[static_cast<std::size_t>(l - 1)]; }

 private:
  std::vector<double> values_;
};

// All partitions of n in descending lexicographic order: (n), (n-1,1), ...
std::vector<Partition> enumerate_partitions(int n);

// Hook length of every box, row by row, left to right.
std::vector<int> hook_lengths(const Partition& lambda);
std::int64_t hook_product(const Partition& lambda);

// chi^lambda(rho) by recursive border-strip removal (Murnaghan-Nakayama).
// Memoized per thread.
std::int64_t character(const Partition& lambda, const CycleType& rho);
std::int64_t hook_character(const HookShape& shape, const CycleType& rho);

// s_{(N-j,1^j)} = sum_rho chi(rho) prod_l p_l^{r_l} / (l^{r_l} r_l!).
double schur_hook_powersum(const HookShape& shape, const PowerSums& p);

// Coefficients c_0..c_{N-1} with d s_{(N-j,1^j)} / d x_i = sum_k c_k x_i^k.
std::vector<double> schur_hook_derivative_coeffs(const HookShape& shape, const PowerSums& p);

// s_lambda(x) as the alternant ratio a_{lambda+delta}(x) / a_delta(x). When two
// variables nearly coincide (gap < 1e-8 max|x|) the ratio is 0/0, so the value
// comes from the power-sum route instead: the hook expansion for hook shapes,
// Jacobi-Trudi over complete homogeneous polynomials otherwise.
std::complex<double> schur_bialternant(const Partition& lambda,
                                       std::span<const std::complex<double>> x);
double schur_bialternant(const Partition& lambda, std::span<const double> x);

// s_lambda(x) = det(h_{lambda_i - i + j}), h_k from Newton's identities.
std::complex<double> schur_jacobi_trudi(const Partition& lambda,
                                        std::span<const std::complex<double>> x);

}  // namespace singcov

#endif  // SINGCOV_COMBINATORICS_HPP
