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

#ifndef SINGCOV_MONTE_CARLO_HPP
#define SINGCOV_MONTE_CARLO_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "singcov/linalg.hpp"
#include "singcov/random.hpp"

namespace singcov {

// Entrywise Welford accumulator over complex matrices. M2 tracks the sum of
// |x - mean|^2, so the standard error covers both real and imaginary parts.
class MatrixAccumulator {
 public:
  void add(const CMatrix& x);
  // Chan et al. pairwise merge of (count, mean, M2).
  void merge(const MatrixAccumulator& other);

  std::size_t count() const { return n_; }
  const CMatrix& mean() const { return mean_; }
  RMatrix standard_error() const;

 private:
  std::size_t n_ = 0;
  CMatrix mean_;
  RMatrix m2_;
};

// Sample mean of a Hermitian-valued Monte Carlo estimator with its per-entry
// standard errors.
struct McEstimate {
  HermitianMatrix mean;
  RMatrix standard_error;
  std::size_t samples = 0;
  std::size_t rejected = 0;
};

McEstimate to_estimate(const MatrixAccumulator& acc, std::size_t rejected = 0);

struct ScalarEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Worker threads used by run_monte_carlo. Results never depend on this value.
void set_mc_threads(unsigned n);
unsigned mc_threads();

struct MonteCarloRun {
  MatrixAccumulator acc;
  std::size_t rejected = 0;
};

inline constexpr std::size_t kMonteCarloChunk = 2048;

// Runs `samples` draws of `draw(RandomSource&, std::size_t& rejected)`.
// Draws are grouped in fixed-size chunks; chunk c consumes rng.substream(c)
// and the chunk accumulators are merged in chunk order, so the result is a
// pure function of (rng, samples) regardless of the thread count.
template <class Draw>
MonteCarloRun run_monte_carlo(std::size_t samples, const RandomSource& rng, Draw&& draw) {
  const std::size_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<MonteCarloRun> parts(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        RandomSource local = rng.substream(c);
        const std::size_t begin = c * kMonteCarloChunk;
        const std::size_t end = std::min(samples, begin + kMonteCarloChunk);
        for (std::size_t s = begin; s < end; ++s) parts[c].acc.add(draw(local, parts[c].rejected));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, mc_threads()), chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloRun total;
  for (const auto& part : parts) {
    total.acc.merge(part.acc);
    total.rejected += part.rejected;
  }
  return total;
}

}  // namespace singcov

#endif  // SINGCOV_MONTE_CARLO_HPP
