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

#include "singcov/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace singcov {

namespace {

using Complex = std::complex<double>;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// prod_l p_l^{r_l} / (l^{r_l} r_l!), skipping l == skip (used for derivatives).
template <class T>
T powersum_monomial(const CycleType& rho, const std::vector<T>& p, int skip = 0) {
  T term(1.0);
  for (int l = 1; l <= rho.max_length(); ++l) {
    const int r = rho.multiplicity(l);
    if (r == 0 || l == skip) continue;
    term *= std::pow(p[static_cast<std::size_t>(l - 1)], r) /
            (std::pow(static_cast<double>(l), r) * factorial(r));
  }
  return term;
}

template <class T>
T hook_powersum_impl(const HookShape& shape, const std::vector<T>& p) {
  const int n = shape.weight();
  if (static_cast<int>(p.size()) < n) {
    throw std::invalid_argument("schur_hook_powersum: power sums cover degree " +
                                std::to_string(p.size()) + " but shape has weight " +
                                std::to_string(n));
  }
  const Partition lambda = shape.partition();
  T sum(0.0);
  for (const Partition& rho_part : enumerate_partitions(n)) {
    const CycleType rho = CycleType::from_partition(rho_part);
    const std::int64_t chi = character(lambda, rho);
    if (chi != 0) sum += static_cast<double>(chi) * powersum_monomial(rho, p);
  }
  return sum;
}

std::vector<Complex> complex_power_sums(std::span<const Complex> x, int degree) {
  std::vector<Complex> p(static_cast<std::size_t>(degree), Complex(0.0));
  for (const Complex& xi : x) {
    Complex pw = 1.0;
    for (int l = 0; l < degree; ++l) {
      pw *= xi;
      p[static_cast<std::size_t>(l)] += pw;
    }
  }
  return p;
}

using MemoKey = std::pair<std::vector<int>, std::vector<int>>;

// rho_parts sorted descending; strips are removed largest first.
std::int64_t character_impl(const std::vector<int>& parts, const std::vector<int>& rho_parts,
                            std::map<MemoKey, std::int64_t>& memo) {
  if (parts.empty()) return rho_parts.empty() ? 1 : 0;
  MemoKey key{parts, rho_parts};
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const int r = rho_parts.front();
  const std::vector<int> rest(rho_parts.begin() + 1, rho_parts.end());
  const int len = static_cast<int>(parts.size());
  // Beta numbers: distinct, descending. Removing a border strip of size r
  // moves one bead from b to b - r; its height is the number of beads jumped.
  std::vector<int> beta(parts.size());
  for (int i = 0; i < len; ++i) beta[static_cast<std::size_t>(i)] = parts[static_cast<std::size_t>(i)] + (len - 1 - i);

  std::int64_t total = 0;
  for (int i = 0; i < len; ++i) {
    const int from = beta[static_cast<std::size_t>(i)];
    const int to = from - r;
    if (to < 0 || std::find(beta.begin(), beta.end(), to) != beta.end()) continue;
    int height = 0;
    for (int b : beta) height += (b > to && b < from) ? 1 : 0;
    std::vector<int> moved = beta;
    moved[static_cast<std::size_t>(i)] = to;
    std::sort(moved.begin(), moved.end(), std::greater<>());
    std::vector<int> next;
    for (int k = 0; k < len; ++k) {
      const int part = moved[static_cast<std::size_t>(k)] - (len - 1 - k);
      if (part > 0) next.push_back(part);
    }
    const std::int64_t sub = character_impl(next, rest, memo);
    total += (height % 2 == 0) ? sub : -sub;
  }
  memo.emplace(std::move(key), total);
  return total;
}

void enumerate_rec(int remaining, int max_part, std::vector<int>& prefix,
                   std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    enumerate_rec(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw std::invalid_argument("Partition: parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) {
      throw std::invalid_argument("Partition: parts must be non-increasing");
    }
    weight_ += parts_[i];
  }
}

Partition Partition::conjugate() const {
  std::vector<int> conj;
  for (int c = 1; c <= part(0); ++c) {
    int count = 0;
    for (int d : parts_) count += d >= c ? 1 : 0;
    conj.push_back(count);
  }
  return Partition(std::move(conj));
}

HookShape::HookShape(int weight, int leg) : weight_(weight), leg_(leg) {
  if (weight < 1 || leg < 0 || leg > weight - 1) {
    throw std::invalid_argument("HookShape: need N >= 1 and 0 <= j <= N-1, got N=" +
                                std::to_string(weight) + " j=" + std::to_string(leg));
  }
}

Partition HookShape::partition() const {
  std::vector<int> parts{arm()};
  parts.insert(parts.end(), static_cast<std::size_t>(leg_), 1);
  return Partition(std::move(parts));
}

CycleType::CycleType(std::vector<int> multiplicities) : mult_(std::move(multiplicities)) {
  while (!mult_.empty() && mult_.back() == 0) mult_.pop_back();
  for (std::size_t l = 0; l < mult_.size(); ++l) {
    if (mult_[l] < 0) throw std::invalid_argument("CycleType: negative multiplicity");
    weight_ += static_cast<int>(l + 1) * mult_[l];
  }
}

CycleType CycleType::from_partition(const Partition& rho) {
  std::vector<int> mult(static_cast<std::size_t>(rho.part(0)), 0);
  for (int part : rho.parts()) ++mult[static_cast<std::size_t>(part - 1)];
  return CycleType(std::move(mult));
}

int CycleType::multiplicity(int l) const {
  return (l >= 1 && l <= max_length()) ? mult_[static_cast<std::size_t>(l - 1)] : 0;
}

Partition CycleType::partition() const {
  std::vector<int> parts;
  for (int l = max_length(); l >= 1; --l) parts.insert(parts.end(), static_cast<std::size_t>(multiplicity(l)), l);
  return Partition(std::move(parts));
}

std::int64_t CycleType::centralizer_size() const {
  std::int64_t z = 1;
  for (int l = 1; l <= max_length(); ++l) {
    for (int k = 1; k <= multiplicity(l); ++k) z *= static_cast<std::int64_t>(l) * k;
  }
  return z;
}

PowerSums::PowerSums(std::vector<double> values) : values_(std::move(values)) {}

PowerSums PowerSums::of(std::span<const double> x, int degree) {
  std::vector<double> p(static_cast<std::size_t>(degree), 0.0);
  for (double xi : x) {
    double pw = 1.0;
    for (int l = 0; l < degree; ++l) {
      pw *= xi;
      p[static_cast<std::size_t>(l)] += pw;
    }
  }
  return PowerSums(std::move(p));
}

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 0) throw std::invalid_argument("enumerate_partitions: n must be >= 0");
  std::vector<Partition> out;
  std::vector<int> prefix;
  enumerate_rec(n, n, prefix, out);
  return out;
}

std::vector<int> hook_lengths(const Partition& lambda) {
  const Partition conj = lambda.conjugate();
  std::vector<int> hooks;
  hooks.reserve(static_cast<std::size_t>(lambda.weight()));
  for (int i = 0; i < lambda.length(); ++i) {
    for (int j = 0; j < lambda.part(i); ++j) {
      const int arm = lambda.part(i) - j - 1;
      const int leg = conj.part(j) - i - 1;
      hooks.push_back(arm + leg + 1);
    }
  }
  return hooks;
}

std::int64_t hook_product(const Partition& lambda) {
  std::int64_t prod = 1;
  for (int h : hook_lengths(lambda)) prod *= h;
  return prod;
}

std::int64_t character(const Partition& lambda, const CycleType& rho) {
  if (lambda.weight() != rho.weight()) {
    throw std::invalid_argument("character: shape weight " + std::to_string(lambda.weight()) +
                                " differs from cycle type weight " +
                                std::to_string(rho.weight()));
  }
  thread_local std::map<MemoKey, std::int64_t> memo;
  return character_impl(lambda.parts(), rho.partition().parts(), memo);
}

std::int64_t hook_character(const HookShape& shape, const CycleType& rho) {
  return character(shape.partition(), rho);
}

double schur_hook_powersum(const HookShape& shape, const PowerSums& p) {
  std::vector<double> values(static_cast<std::size_t>(p.degree()));
  for (int l = 1; l <= p.degree(); ++l) values[static_cast<std::size_t>(l - 1)] = p[l];
  return hook_powersum_impl(shape, values);
}

std::vector<double> schur_hook_derivative_coeffs(const HookShape& shape, const PowerSums& p) {
  const int n = shape.weight();
  if (p.degree() < n) {
    throw std::invalid_argument("schur_hook_derivative_coeffs: insufficient power sums");
  }
  std::vector<double> values(static_cast<std::size_t>(p.degree()));
  for (int l = 1; l <= p.degree(); ++l) values[static_cast<std::size_t>(l - 1)] = p[l];

  // d/dx_i p_k^{r_k} / (k^{r_k} r_k!) = r_k p_k^{r_k-1} x_i^{k-1} / (k^{r_k-1} r_k!)
  std::vector<double> coeffs(static_cast<std::size_t>(n), 0.0);
  const Partition lambda = shape.partition();
  for (const Partition& rho_part : enumerate_partitions(n)) {
    const CycleType rho = CycleType::from_partition(rho_part);
    const std::int64_t chi = character(lambda, rho);
    if (chi == 0) continue;
    for (int k = 1; k <= n; ++k) {
      const int r = rho.multiplicity(k);
      if (r == 0) continue;
      const double own = r * std::pow(p[k], r - 1) / (std::pow(static_cast<double>(k), r - 1) * factorial(r));
      coeffs[static_cast<std::size_t>(k - 1)] +=
          static_cast<double>(chi) * own * powersum_monomial(rho, values, k);
    }
  }
  return coeffs;
}

Complex schur_jacobi_trudi(const Partition& lambda, std::span<const Complex> x) {
  const int len = lambda.length();
  if (len == 0) return 1.0;
  const int top = lambda.part(0) + len;
  const std::vector<Complex> p = complex_power_sums(x, top);
  // Newton: k h_k = sum_{i=1}^k p_i h_{k-i}.
  std::vector<Complex> h(static_cast<std::size_t>(top) + 1, Complex(0.0));
  h[0] = 1.0;
  for (int k = 1; k <= top; ++k) {
    Complex acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += p[static_cast<std::size_t>(i - 1)] * h[static_cast<std::size_t>(k - i)];
    h[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
  }
  Eigen::MatrixXcd jt(len, len);
  for (int i = 0; i < len; ++i) {
    for (int j = 0; j < len; ++j) {
      const int idx = lambda.part(i) - i + j;
      jt(i, j) = (idx < 0 || idx > top) ? Complex(0.0) : h[static_cast<std::size_t>(idx)];
    }
  }
  return jt.partialPivLu().determinant();
}

Complex schur_bialternant(const Partition& lambda, std::span<const Complex> x) {
  const int n = static_cast<int>(x.size());
  if (lambda.length() > n) {
    throw std::invalid_argument("schur_bialternant: partition has " +
                                std::to_string(lambda.length()) + " parts but only " +
                                std::to_string(n) + " variables");
  }
  if (n == 0) return 1.0;

  double scale = 0.0;
  for (const Complex& xi : x) scale = std::max(scale, std::abs(xi));
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) gap = std::min(gap, std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]));
  }
  if (n > 1 && !(gap >= 1e-8 * scale && scale > 0.0)) {
    const bool hook = lambda.length() <= 1 || lambda.part(1) <= 1;
    if (hook && lambda.weight() > 0) {
      const HookShape shape(lambda.weight(), lambda.length() - 1);
      return hook_powersum_impl(shape, complex_power_sums(x, lambda.weight()));
    }
    return schur_jacobi_trudi(lambda, x);
  }

  Eigen::MatrixXcd alt(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      alt(i, j) = std::pow(x[static_cast<std::size_t>(i)], lambda.part(j) + n - 1 - j);
    }
  }
  Complex vandermonde = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) vandermonde *= x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
  }
  return alt.partialPivLu().determinant() / vandermonde;
}

double schur_bialternant(const Partition& lambda, std::span<const double> x) {
  std::vector<Complex> cx(x.begin(), x.end());
  return schur_bialternant(lambda, std::span<const Complex>(cx)).real();
}

}  // namespace singcov
