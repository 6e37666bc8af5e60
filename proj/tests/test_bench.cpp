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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "singcov/bench.hpp"
#include "singcov/ewens.hpp"
#include "singcov/toeplitz.hpp"
#include "test_util.hpp"

namespace singcov {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("singcov_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(ExperimentConfig, ParsesAndAppliesDefaults) {
  const ExperimentConfig c = ExperimentConfig::parse(
      R"({"m": 10, "truth": {"family": "tridiagonal", "b": 0.3}, "estimators": ["ewens"],
          "theta_grid": [1, 2]})");
  EXPECT_EQ(c.m, 10);
  EXPECT_EQ(c.n, 10);
  EXPECT_EQ(c.truth.family, TruthFamily::tridiagonal);
  EXPECT_EQ(c.trials, 10u);
  EXPECT_EQ(c.mc_samples, 1000u);
  EXPECT_EQ(c.loading_alpha_grid.size(), 21u);
  EXPECT_EQ(c.loading_beta_grid.size(), 41u);
  EXPECT_EQ(c.truth.label(), "tridiagonal(b=0.3)");
}

TEST(ExperimentConfig, RejectsBadInput) {
  const char* bad[] = {
      "not json",
      "[1, 2]",
      R"({"truth": {"family": "identity"}})",
      R"({"m": 5})",
      R"({"m": 5, "truth": {"family": "identity"}, "colour": 1})",
      R"({"m": 5, "truth": {"family": "circulant"}})",
      R"({"m": 5, "truth": {"family": "power", "alpha": 1.5}})",
      R"({"m": 5, "truth": {"family": "tridiagonal", "b": 0.9}})",
      R"({"m": 5, "truth": {"family": "identity"}, "estimators": ["oracle"]})",
      R"({"m": 5, "truth": {"family": "identity"}, "estimators": ["ewens"]})",
      R"({"m": 5, "truth": {"family": "identity"}, "estimators": ["covp"], "p_grid": [6]})",
      R"({"m": 5, "truth": {"family": "identity"}, "estimators": ["ewens"], "theta_grid": [0]})",
      R"({"m": 1, "truth": {"family": "identity"}})",
      R"({"m": "five", "truth": {"family": "identity"}})",
      R"({"m": 5, "truth": {"family": "identity"}, "trials": 0})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(ExperimentConfig::parse(text), std::invalid_argument) << text;
  }
  EXPECT_THROW(ExperimentConfig::load("/nonexistent/config.json"), std::invalid_argument);
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.m = 6;
  c.n = 4;
  c.truth.family = TruthFamily::power;
  c.truth.alpha = 0.5;
  c.theta_grid = {1.0, 1e8};
  c.p_grid = {2, 5};
  c.mc_samples = 200;
  c.trials = 3;
  c.seed = 11;
  return c;
}

TEST(RunExperiment, TruthPassthroughIsZero) {
  ExperimentConfig c = small_config();
  c.estimators = {"truth"};
  const MetricReport report = run_experiment(c);
  for (const char* metric : {"F", "f", "g"}) {
    const MetricRow* row = report.find("truth", metric);
    ASSERT_NE(row, nullptr) << metric;
    EXPECT_EQ(row->mean, 0.0);
    EXPECT_EQ(row->trials, 3u);
  }
}

TEST(RunExperiment, EwensApproachesSampleAtLargeTheta) {
  ExperimentConfig c = small_config();
  c.estimators = {"sample", "ewens"};
  const MetricReport report = run_experiment(c);
  const MetricRow* sample = report.find("sample", "F");
  const MetricRow* ewens = report.find("ewens", "F", 1e8);
  ASSERT_NE(sample, nullptr);
  ASSERT_NE(ewens, nullptr);
  EXPECT_NEAR(ewens->mean, sample->mean, 1e-4);
  EXPECT_EQ(report.rows.size(), 1u + c.theta_grid.size());
}

TEST(RunExperiment, InvcovBeyondRankIsInvalid) {
  ExperimentConfig c = small_config();
  c.estimators = {"invcovp"};
  const MetricReport report = run_experiment(c);
  const MetricRow* ok = report.find("invcovp", "f", std::nullopt, 2);
  const MetricRow* beyond = report.find("invcovp", "f", std::nullopt, 5);
  ASSERT_NE(ok, nullptr);
  ASSERT_NE(beyond, nullptr);
  EXPECT_TRUE(ok->valid);
  EXPECT_GE(ok->mean, 0.0);
  EXPECT_FALSE(beyond->valid);
  EXPECT_NE(beyond->reason.find("exceeds rank"), std::string::npos);
}

TEST(RunExperiment, MetricsAreNonNegativeAndCountsMatch) {
  ExperimentConfig c = small_config();
  c.estimators = estimator_names();
  c.loading_alpha_grid = {0.0, 0.5, 1.0};
  c.loading_beta_grid = {0.0, 0.5};
  const MetricReport report = run_experiment(c);
  for (const RawMetric& r : report.raw) {
    if (r.value) EXPECT_GE(*r.value, 0.0) << r.estimator << " " << r.metric;
  }
  for (const MetricRow& row : report.rows) EXPECT_EQ(row.trials, c.trials);
  // sample 1, loading 1, covp |p|, invcovp 2|p|, ewens |theta|, hybrid and
  // hybrid-inverse |theta||p|, truth 3.
  const std::size_t np = c.p_grid.size(), nt = c.theta_grid.size();
  EXPECT_EQ(report.rows.size(), 1 + 1 + np + 2 * np + nt + 2 * nt * np + 3);
}

TEST(RunExperiment, LoadingOracleIsLabelledAndNoWorseThanSample) {
  ExperimentConfig c = small_config();
  c.estimators = {"sample", "diagonal-loading"};
  const MetricReport report = run_experiment(c);
  EXPECT_EQ(report.find("diagonal-loading", "F"), nullptr);
  const MetricRow* oracle = report.find("DL-oracle", "F");
  ASSERT_NE(oracle, nullptr);
  // (alpha, beta) = (1, 0) is on the default grid, so the oracle never loses.
  EXPECT_LE(oracle->mean, report.find("sample", "F")->mean + 1e-12);
}

TEST(RunExperiment, SampleCovarianceZeroEigenvalues) {
  const Index m = 40, n = 30;
  RandomSource rng(20260101);
  const HermitianMatrix k = sample_gaussian_covariance(PowerToeplitz(m, 0.5).matrix(), n, rng);
  const RVector ev = eig_hermitian(k).eigenvalues;
  Index zeros = 0;
  for (Index i = 0; i < m; ++i) zeros += std::abs(ev(i)) < 1e-10 * ev(0) ? 1 : 0;
  EXPECT_EQ(zeros, m - n);
  EXPECT_GT(eig_hermitian(ewens_estimator(k, 50.0)).eigenvalues.minCoeff(), 0.0);
}

TEST(Aggregate, MeanAndSampleStd) {
  std::vector<RawMetric> raw;
  for (std::size_t t = 0; t < 4; ++t) {
    raw.push_back({"ewens", "F", 2.0, std::nullopt, t, 1.0 + static_cast<double>(t), ""});
  }
  raw.push_back({"invcovp", "f", std::nullopt, 3, 0, std::nullopt, "p=3 exceeds rank(K)=2"});
  const std::vector<MetricRow> rows = aggregate(raw);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].mean, 2.5, 1e-15);
  EXPECT_NEAR(rows[0].std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_FALSE(rows[1].valid);
  EXPECT_EQ(rows[1].reason, "p=3 exceeds rank(K)=2");
}

TEST(WriteMetricReport, HeadersAndDeterminism) {
  ExperimentConfig c = small_config();
  c.estimators = {"sample", "ewens", "hybrid-inverse"};
  const fs::path a = scratch_dir("report_a");
  const fs::path b = scratch_dir("report_b");
  fs::create_directories(a);
  fs::create_directories(b);
  write_metric_report(run_experiment(c), a.string());
  write_metric_report(run_experiment(c), b.string());
  const std::string raw = slurp(a / "raw.csv");
  EXPECT_EQ(raw.substr(0, raw.find('\n')), "estimator,metric,theta,p,trial,value,valid,reason");
  const std::string metrics = slurp(a / "metrics.csv");
  EXPECT_EQ(metrics.substr(0, metrics.find('\n')), "estimator,metric,theta,p,trials,mean,std,valid,reason");
  EXPECT_EQ(raw, slurp(b / "raw.csv"));
  EXPECT_EQ(metrics, slurp(b / "metrics.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(SpectrumReport, IdentityTruthGivesPointMasses) {
  ExperimentConfig c;
  c.m = 12;
  c.n = 12;
  c.truth.family = TruthFamily::identity;
  c.theta_grid = {3.0};
  c.beta_grid = {1.0};
  c.density_bins = 20;
  c.seed = 5;
  const fs::path dir = scratch_dir("spectrum");
  c.output_dir = dir.string();
  const std::vector<std::string> files = spectrum_report(c);
  for (const char* name : {"esd_truth.csv", "esd_sample.csv", "esd_ewens_theta=3.csv", "density_truth.csv",
                           "esd_ewens_beta=1.csv", "density_beta=1.csv"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  EXPECT_EQ(files.size(), 6u);
  // Ewens transforms of I are I.
  for (const char* name : {"esd_truth.csv", "esd_ewens_theta=3.csv", "esd_ewens_beta=1.csv"}) {
    std::ifstream in(dir / name);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      EXPECT_NEAR(std::stod(line.substr(line.find(',') + 1)), 1.0, 1e-12) << name;
      ++rows;
    }
    EXPECT_EQ(rows, 12);
  }
  fs::remove_all(dir);
}

TEST(ApplyEstimator, DispatchAndErrors) {
  RandomSource rng(3);
  const HermitianMatrix k = testing::random_psd(5, rng);
  EstimatorOptions opts;
  opts.theta = 2.0;
  opts.p = 3;
  EXPECT_LT(testing::max_abs(apply_estimator("sample", k, opts, rng).matrix() - k.matrix()), 1e-15);
  EXPECT_LT(testing::max_abs(apply_estimator("ewens", k, opts, rng).matrix() - ewens_estimator(k, 2.0).matrix()),
            1e-15);
  EXPECT_LT(testing::max_abs(apply_estimator("hybrid", k, opts, rng).matrix() -
                             hybrid_estimator(k, 2.0, 3).matrix()),
            1e-15);
  EXPECT_THROW(apply_estimator("oracle", k, opts, rng), std::invalid_argument);
}

}  // namespace
}  // namespace singcov
