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

#ifndef SINGCOV_RANDOM_HPP
#define SINGCOV_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace singcov {

// Deterministic pseudorandom stream addressed by (seed, stream). Sub-streams
// derived with substream() are independent of each other and of the parent,
// so Monte Carlo work can be split into chunks whose results do not depend on
// how the chunks are scheduled.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  RandomSource substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double uniform();
  double normal();
  // Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2),
  // so E|z|^2 = 1.
  std::complex<double> complex_normal();
  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace singcov

#endif  // SINGCOV_RANDOM_HPP
