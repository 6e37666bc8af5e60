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

#include "singcov/monte_carlo.hpp"

#include <stdexcept>

namespace singcov {

namespace {
std::atomic<unsigned> g_threads{1};
}

void MatrixAccumulator::add(const CMatrix& x) {
  if (n_ == 0) {
    mean_ = CMatrix::Zero(x.rows(), x.cols());
    m2_ = RMatrix::Zero(x.rows(), x.cols());
  } else if (x.rows() != mean_.rows() || x.cols() != mean_.cols()) {
    throw std::invalid_argument("MatrixAccumulator: shape changed between samples");
  }
  ++n_;
  const CMatrix delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += (delta.conjugate().array() * (x - mean_).array()).real().matrix();
}

void MatrixAccumulator::merge(const MatrixAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const CMatrix delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2_ += other.m2_ + delta.cwiseAbs2() * (na * nb / n);
  n_ += other.n_;
}

RMatrix MatrixAccumulator::standard_error() const {
  if (n_ < 2) return RMatrix::Constant(mean_.rows(), mean_.cols(), 0.0);
  const double n = static_cast<double>(n_);
  return (m2_ / (n * (n - 1.0))).cwiseSqrt();
}

McEstimate to_estimate(const MatrixAccumulator& acc, std::size_t rejected) {
  return McEstimate{HermitianMatrix(acc.mean()), acc.standard_error(), acc.count(), rejected};
}

void set_mc_threads(unsigned n) { g_threads = std::max(1u, n); }

unsigned mc_threads() { return g_threads; }

}  // namespace singcov
