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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "singcov/ewens.hpp"
#include "test_util.hpp"

namespace singcov {
namespace {

using testing::max_abs;

double rising(double theta, Index m) {
  double r = 1.0;
  for (Index t = 0; t < m; ++t) r *= theta + static_cast<double>(t);
  return r;
}

TEST(Permutation, CyclesAndValidation) {
  EXPECT_EQ(Permutation::identity(4).cycle_count(), 4);
  EXPECT_EQ(Permutation({1, 2, 0, 3}).cycle_count(), 2);
  EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 3}), std::invalid_argument);
  const RMatrix mat = Permutation({1, 2, 0}).matrix();
  EXPECT_EQ(mat(0, 1), 1.0);
  EXPECT_EQ(mat(2, 0), 1.0);
  EXPECT_EQ(mat.sum(), 3.0);
}

TEST(Injection, ClosedCyclesAndRestriction) {
  // 0 -> 1 -> 0 closes inside [2]; 2 -> 3 leaves [3].
  EXPECT_EQ(Injection({1, 0, 3}, 5).closed_cycle_count(), 1);
  EXPECT_EQ(Injection({0, 2}, 3).closed_cycle_count(), 1);
  EXPECT_EQ(Injection({2, 0}, 3).closed_cycle_count(), 0);
  EXPECT_THROW(Injection({1, 1}, 3), std::invalid_argument);
  EXPECT_THROW(Injection({0, 1, 2, 3}, 3), std::invalid_argument);
  const Injection r = Injection::restrict(Permutation({2, 0, 1, 3}), 2);
  EXPECT_EQ(r.images(), (std::vector<Index>{2, 0}));
  const RMatrix v = r.matrix();
  EXPECT_EQ(v.rows(), 2);
  EXPECT_EQ(v.cols(), 4);
  EXPECT_LT((v * v.transpose() - RMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EwensProbability, Examples) {
  for_each_permutation(4, [](const Permutation& s) { EXPECT_NEAR(ewens_probability(s, 1.0), 1.0 / 24.0, 1e-15); });
  EXPECT_NEAR(ewens_probability(Permutation::identity(2), 2.0), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(ewens_probability(Permutation::identity(2), 0.0), std::invalid_argument);
}

TEST(EwensProbability, SumsToOne) {
  for (double theta : {0.3, 1.0, 2.5, 40.0}) {
    for (Index m = 1; m <= 6; ++m) {
      double total = 0.0;
      for_each_permutation(m, [&](const Permutation& s) {
        total += ewens_probability(s, theta);
        EXPECT_NEAR(std::log(ewens_probability(s, theta)), ewens_log_probability(s, theta), 1e-12);
      });
      EXPECT_NEAR(total, 1.0, 1e-12) << "theta=" << theta << " m=" << m;
    }
  }
}

TEST(EnumerationBudget, RejectsLargeInputs) {
  EXPECT_THROW(for_each_permutation(kMaxPermutationEnumeration + 1, [](const Permutation&) {}),
               std::invalid_argument);
  EXPECT_THROW(for_each_injection(40, 6, [](const Injection&) {}), std::invalid_argument);
  std::size_t count = 0;
  for_each_injection(5, 3, [&](const Injection&) { ++count; });
  EXPECT_EQ(count, 60u);
}

TEST(SampleEwens, UniformFrequencies) {
  RandomSource rng(2026);
  const int draws = 100000;
  std::map<std::vector<Index>, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[sample_ewens(3, 1.0, rng).images()];
  ASSERT_EQ(counts.size(), 6u);
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(draws * p * (1.0 - p));
  for (const auto& [images, c] : counts) EXPECT_LT(std::abs(c - draws * p), 3.0 * sigma);
}

TEST(SampleEwens, IdentityFrequency) {
  RandomSource rng(7);
  const int draws = 100000;
  const double theta = 5.0;
  int identity = 0;
  for (int i = 0; i < draws; ++i) identity += sample_ewens(3, theta, rng).cycle_count() == 3 ? 1 : 0;
  const double p = std::pow(theta, 3) / (theta * (theta + 1.0) * (theta + 2.0));
  EXPECT_LT(std::abs(identity - draws * p), 3.0 * std::sqrt(draws * p * (1.0 - p)));
}

TEST(SampleEwens, SingletonIsIdentity) {
  RandomSource rng(1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_ewens(1, 0.7, rng).images(), std::vector<Index>{0});
}

TEST(SampleInjection, MatchesInjectionProbability) {
  RandomSource rng(8);
  const int draws = 60000;
  const double theta = 2.0;
  std::map<std::vector<Index>, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[sample_injection(4, 2, theta, rng).images()];
  for_each_injection(4, 2, [&](const Injection& s) {
    const double p = injection_probability(s, theta);
    const double sigma = std::sqrt(draws * p * (1.0 - p));
    EXPECT_LT(std::abs(counts[s.images()] - draws * p), 4.0 * sigma);
  });
}

TEST(InjectionProbability, FullAndSingleton) {
  const double theta = 1.7;
  for_each_permutation(4, [&](const Permutation& s) {
    EXPECT_NEAR(injection_probability(Injection::restrict(s, 4), theta), ewens_probability(s, theta), 1e-15);
  });
  const Index m = 5;
  EXPECT_NEAR(injection_probability(Injection({0}, m), theta), theta / (theta + m - 1), 1e-15);
  EXPECT_NEAR(injection_probability(Injection({3}, m), theta), 1.0 / (theta + m - 1), 1e-15);
}

TEST(InjectionProbability, ProductFormMatchesEnumeration) {
  for (double theta : {0.5, 1.0, 3.2}) {
    for (Index p = 1; p <= 4; ++p) {
      double total = 0.0;
      for_each_injection(6, p, [&](const Injection& s) {
        const double e = injection_probability_enumerated(s, theta);
        EXPECT_NEAR(injection_probability_product(s, theta), e, 1e-14);
        total += e;
      });
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(EwensEstimator, UniformMeasureRemark) {
  RandomSource rng(10);
  const Index m = 5;
  const HermitianMatrix k = testing::random_hermitian(m, rng);
  const CMatrix e = CMatrix::Ones(m, m);
  const Complex alpha = k.matrix().sum() / static_cast<double>(m);
  const Complex beta = (k.trace() - alpha) / static_cast<double>(m - 1);
  const CMatrix expected = alpha * e / static_cast<double>(m) +
                           beta * (CMatrix::Identity(m, m) - e / static_cast<double>(m));
  EXPECT_LT(max_abs(ewens_estimator(k, 1.0).matrix() - expected), 1e-12);
}

TEST(EwensEstimator, DiagonalIsLoading) {
  const RVector d{{1.0, 4.0, 2.0, 0.5}};
  const double theta = 3.3;
  const HermitianMatrix out = ewens_estimator(HermitianMatrix::diagonal(d), theta);
  const RVector expected = ((theta - 1.0) * d.array() + d.sum()) / (theta + 3.0);
  EXPECT_LT(max_abs(out.matrix() - CMatrix(expected.cast<Complex>().asDiagonal())), 1e-14);
}

TEST(EwensEstimator, MatchesEnumeration) {
  RandomSource rng(11);
  for (Index m : {2, 3, 4, 6}) {
    const HermitianMatrix k = testing::random_hermitian(m, rng);
    for (double theta : {0.4, 1.0, 2.5}) {
      const CMatrix brute = ewens_estimator_bruteforce(k, theta).matrix();
      EXPECT_LT(max_abs(ewens_estimator(k, theta).matrix() - brute), 1e-12 * (1.0 + max_abs(brute)));
    }
  }
}

TEST(EwensEstimator, NonHermitianInput) {
  // The entrywise formula holds for any square matrix.
  RandomSource rng(12);
  const CMatrix a = testing::random_complex(3, 3, rng);
  const double theta = 1.9;
  CMatrix brute = CMatrix::Zero(3, 3);
  for_each_permutation(3, [&](const Permutation& s) {
    const CMatrix mat = s.matrix().cast<Complex>();
    brute += ewens_probability(s, theta) * mat * a * mat.adjoint();
  });
  EXPECT_LT(max_abs(ewens_estimator(a, theta) - brute), 1e-13);
}

TEST(EwensEstimator, Invariants) {
  RandomSource rng(13);
  const HermitianMatrix k = testing::random_psd(6, rng);
  for (double theta : {0.5, 7.0}) {
    const HermitianMatrix out = ewens_estimator(k, theta);
    EXPECT_NEAR(out.trace(), k.trace(), 1e-12);
    EXPECT_GT(eig_hermitian(out).eigenvalues.minCoeff(), 0.0);
    EXPECT_LT(max_abs(ewens_estimator(HermitianMatrix::identity(6), theta).matrix() - CMatrix::Identity(6, 6)),
              1e-14);
  }
  EXPECT_LE(frobenius_norm(CMatrix(ewens_estimator(k, 1e8).matrix() - k.matrix())), 1e-6 * frobenius_norm(k));
  const HermitianMatrix one = HermitianMatrix::diagonal(RVector{{2.0}});
  EXPECT_EQ(ewens_estimator(one, 3.0).matrix()(0, 0), Complex(2.0));
}

TEST(HybridEstimator, ThreeByThreeRemarks) {
  RandomSource rng(14);
  const HermitianMatrix k = testing::random_hermitian(3, rng);
  const double theta = 2.2;
  const CMatrix& a = k.matrix();
  CMatrix expected(3, 3);
  expected << (theta + 1) * a(0, 0), theta * a(0, 1), a(0, 2),
              theta * a(1, 0), (theta + 1) * a(1, 1), a(1, 2),
              a(2, 0), a(2, 1), 2.0 * a(2, 2);
  EXPECT_LT(max_abs(hybrid_estimator(k, theta, 2).matrix() - expected / (theta + 2.0)), 1e-14);

  const RVector d{{1.5, 2.0, 0.3}};
  const RVector diag = hybrid_estimator(HermitianMatrix::diagonal(d), theta, 1).diagonal_real();
  EXPECT_NEAR(diag(0), theta * 1.5 / (theta + 2.0), 1e-14);
  EXPECT_NEAR(diag(1), 2.0 / (theta + 2.0), 1e-14);
  EXPECT_NEAR(diag(2), 0.3 / (theta + 2.0), 1e-14);
}

TEST(HybridEstimator, MatchesExhaustiveSum) {
  RandomSource rng(15);
  const HermitianMatrix k = testing::random_hermitian(5, rng);
  for (Index p = 1; p <= 5; ++p) {
    const CMatrix brute = hybrid_estimator_exhaustive(k, 1.7, p).matrix();
    EXPECT_LT(max_abs(hybrid_estimator(k, 1.7, p).matrix() - brute), 1e-12 * (1.0 + max_abs(brute)))
        << "p=" << p;
  }
}

TEST(HybridEstimator, FullCompressionReturnsInput) {
  // Every coefficient collapses to 1 at p = m, so nothing is averaged.
  RandomSource rng(16);
  const HermitianMatrix k = testing::random_hermitian(4, rng);
  EXPECT_LT(max_abs(hybrid_estimator(k, 0.8, 4).matrix() - k.matrix()), 1e-14);
  EXPECT_THROW(hybrid_estimator(k, 0.8, 5), std::invalid_argument);
  EXPECT_THROW(hybrid_estimator(HermitianMatrix::identity(1), 1.0, 1), std::invalid_argument);
}

TEST(HybridInverseDiagonal, Examples) {
  const double theta = 2.0;
  const RVector d{{2.0, 0.5, 1.25}};
  const HermitianMatrix full = hybrid_inverse_diagonal(d, 3, theta, 3);
  EXPECT_LT(max_abs(full.matrix() - hybrid_inverse_exhaustive(HermitianMatrix::diagonal(d), theta, 3).matrix()),
            1e-13);

  const HermitianMatrix single = hybrid_inverse_diagonal(RVector{{4.0}}, 3, theta, 1);
  EXPECT_NEAR(single.matrix()(0, 0).real(), theta / (theta + 2.0) / 4.0, 1e-15);
  EXPECT_EQ(max_abs(single.matrix().bottomRightCorner(2, 2)), 0.0);
}

TEST(HybridInverseDiagonal, MatchesExhaustiveOnSingularDiagonals) {
  const RVector nonzero{{3.0, 1.0, 0.4}};
  RVector padded = RVector::Zero(6);
  padded.head(3) = nonzero;
  for (double theta : {0.5, 1.0, 4.0}) {
    for (Index p = 1; p <= 3; ++p) {
      const CMatrix brute = hybrid_inverse_exhaustive(HermitianMatrix::diagonal(padded), theta, p).matrix();
      EXPECT_LT(max_abs(hybrid_inverse_diagonal(nonzero, 6, theta, p).matrix() - brute), 1e-12)
          << "theta=" << theta << " p=" << p;
    }
  }
}

TEST(HybridInverseDiagonal, EqualEntries) {
  const RVector ones = RVector::Ones(4);
  for (Index p = 1; p <= 4; ++p) {
    const HermitianMatrix out = hybrid_inverse_diagonal(ones, 4, 1.5, p);
    const HermitianMatrix brute = hybrid_inverse_exhaustive(HermitianMatrix::identity(4), 1.5, p);
    EXPECT_NEAR(out.trace(), brute.trace(), 1e-12);
  }
}

TEST(HybridInverse, BaseCaseIsExact) {
  RandomSource rng(17);
  const HermitianMatrix k = testing::random_psd(4, rng);
  EXPECT_LT(max_abs(hybrid_inverse_base(k, 2.5).matrix() - hybrid_inverse_exhaustive(k, 2.5, 1).matrix()),
            1e-14);
}

TEST(HybridInverse, LargeThetaFullCompressionIsInverse) {
  RandomSource rng(18);
  const HermitianMatrix k = testing::random_psd(4, rng);
  const McEstimate est = hybrid_inverse_mc(k, 1e6, 4, 200, RandomSource(19));
  EXPECT_LT(max_abs(est.mean.matrix() - k.matrix().inverse()), 1e-3);
}

TEST(HybridInverse, MonteCarloMatchesExhaustive) {
  RandomSource rng(20);
  const HermitianMatrix k = testing::random_psd(4, rng);
  const CMatrix exact = hybrid_inverse_exhaustive(k, 1.3, 2).matrix();
  EXPECT_LT(testing::max_z(hybrid_inverse_mc(k, 1.3, 2, 40000, RandomSource(21)), exact), 5.0);
}

TEST(HybridInverse, InductiveStepMatchesDiagonal) {
  const RVector d{{2.0, 1.0, 0.7, 0.3}};
  const double theta = 1.6;
  const HermitianMatrix k = HermitianMatrix::diagonal(d);
  const McEstimate est = hybrid_inverse_inductive(k, theta, 2, 40000, RandomSource(22));
  EXPECT_LT(testing::max_z(est, hybrid_inverse_diagonal(d, 4, theta, 2).matrix()), 5.0);
}

TEST(HybridInverse, InductiveAgreesWithDirectOnDenseInput) {
  RandomSource rng(23);
  const HermitianMatrix k = testing::random_psd(4, rng);
  const double theta = 0.9;
  const McEstimate base{hybrid_inverse_base(k, theta), RMatrix::Zero(4, 4), 0, 0};
  const McEstimate step = hybrid_inverse_inductive_step(k, base, theta, 2, 40000, RandomSource(24));
  EXPECT_LT(testing::max_z(step, hybrid_inverse_exhaustive(k, theta, 2).matrix()), 5.0);
}

TEST(InductiveDraw, ReassemblesPseudoinverse) {
  RandomSource rng(25);
  const HermitianMatrix k = testing::random_psd(5, rng);
  const CMatrix root = psd_root(k);
  EXPECT_LT(max_abs(root * root.adjoint() - k.matrix()), 1e-12);
  const Injection sigma({3, 0, 4}, 5);
  const InductiveDraw draw = inductive_draw(root, sigma);
  const RMatrix v = sigma.matrix();
  const CMatrix compressed = v.cast<Complex>() * k.matrix() * v.transpose().cast<Complex>();
  EXPECT_LT(max_abs(draw.update.pinv.matrix() - compressed.inverse()), 1e-10);
}

}  // namespace
}  // namespace singcov
