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

#ifndef SINGCOV_BENCH_HPP
#define SINGCOV_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "singcov/linalg.hpp"
#include "singcov/random.hpp"
#include "singcov/toeplitz.hpp"

namespace singcov {

enum class TruthFamily { tridiagonal, power, identity };

struct TruthSpec {
  TruthFamily family = TruthFamily::identity;
  double b = 0.0;
  double alpha = 0.0;

  HermitianMatrix matrix(Index m) const;
  SymbolFunction symbol() const;
  std::string label() const;
};

// Estimator names accepted in configs and by `estimate`.
inline const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names = {
      "sample", "diagonal-loading", "covp", "invcovp", "ewens", "hybrid", "hybrid-inverse", "truth"};
  return names;
}

// n evenly spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

struct ExperimentConfig {
  Index m = 0;
  Index n = 0;
  TruthSpec truth;
  std::vector<std::string> estimators;
  std::vector<double> theta_grid;
  std::vector<Index> p_grid;
  std::vector<double> beta_grid;
  std::vector<double> loading_alpha_grid = linspace(0.0, 1.0, 21);
  std::vector<double> loading_beta_grid = linspace(0.0, 2.0, 41);
  std::size_t mc_samples = 1000;
  std::uint64_t seed = 0;
  std::size_t trials = 10;
  std::size_t density_bins = 200;
  std::string output_dir = "out";

  // Throws std::invalid_argument on malformed JSON, unknown keys, or values
  // that violate the invariants.
  static ExperimentConfig parse(std::string_view json_text);
  static ExperimentConfig load(const std::string& path);
  void validate() const;
};

// One per-trial value. Invalid rows keep the reason and no value.
struct RawMetric {
  std::string estimator;
  std::string metric;  // F, f or g
  std::optional<double> theta;
  std::optional<Index> p;
  std::size_t trial = 0;
  std::optional<double> value;
  std::string reason;
};

struct MetricRow {
  std::string estimator;
  std::string metric;
  std::optional<double> theta;
  std::optional<Index> p;
  std::size_t trials = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over trials
  bool valid = true;
  std::string reason;
};

struct MetricReport {
  std::vector<RawMetric> raw;
  std::vector<MetricRow> rows;

  // First row matching (estimator, metric, theta, p).
  const MetricRow* find(std::string_view estimator, std::string_view metric,
                        std::optional<double> theta = std::nullopt,
                        std::optional<Index> p = std::nullopt) const;
};

// Metrics, with Sigma the truth and K the sample covariance:
//   F = |Sigma - estimate|_F for covariance estimates,
//   f = |Sigma - (p/m) invcov_p(K)^+|_F,
//   g = |Sigma^{-1} - inverse estimate|_F, with (m/p) invcov_p(K) for invcovp.
// covp is rescaled by m/p so that cov_p(Sigma) is unbiased in trace.
// diagonal-loading reports the best grid point (DL-oracle).
MetricReport run_experiment(const ExperimentConfig& config);

// Aggregates raw rows in first-appearance order of their keys.
std::vector<MetricRow> aggregate(const std::vector<RawMetric>& raw);

// raw.csv: estimator,metric,theta,p,trial,value,valid,reason
// metrics.csv: estimator,metric,theta,p,trials,mean,std,valid,reason
void write_metric_report(const MetricReport& report, const std::string& dir);

// ESD files (index,eigenvalue) for the truth, one sample covariance, and the
// Ewens transform of the truth at every theta in theta_grid and at theta =
// beta m for every beta in beta_grid; density files (abscissa,density) of the
// limiting symbol push-forward for the truth and each beta. Returns the paths
// written.
std::vector<std::string> spectrum_report(const ExperimentConfig& config);

struct EstimatorOptions {
  double theta = 1.0;
  Index p = 1;
  std::size_t samples = 1000;
  double loading_alpha = 1.0;
  double loading_beta = 0.0;
};

// Single estimator applied to K, as exposed by `singcov estimate`.
HermitianMatrix apply_estimator(const std::string& name, const HermitianMatrix& k,
                                const EstimatorOptions& options, const RandomSource& rng);

}  // namespace singcov

#endif  // SINGCOV_BENCH_HPP
