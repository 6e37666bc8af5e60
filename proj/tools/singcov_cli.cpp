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

// singcov: covariance estimators built from Haar and Ewens averages.
//
//   singcov estimate --input K.csv --estimator ewens --theta 5 [--out out.csv]
//   singcov experiment --config exp.json [--seed S] [--out DIR] [--threads N]
//   singcov spectrum --config exp.json [--out DIR]
//   singcov verify <suite|all> [--seed S] [--out report.json]
//
// Exit codes: 0 success, 1 validation or input error, 2 a verify suite failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "singcov/bench.hpp"
#include "singcov/matrix_io.hpp"
#include "singcov/monte_carlo.hpp"
#include "singcov/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_config) {
  if (with_config) cmd->add_option("--config", c.config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Override the random seed");
  cmd->add_option("--out", c.out, "Output location");
  cmd->add_option("--threads", c.threads, "Monte Carlo worker threads")->check(CLI::Range(1u, 1024u));
}

singcov::ExperimentConfig load_config(const Common& c) {
  singcov::ExperimentConfig cfg = singcov::ExperimentConfig::load(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

int run_verify(const std::string& suite, const Common& c) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = singcov::available_suites();
  } else {
    names.push_back(suite);
  }
  singcov::VerifyOptions options;
  if (c.seed) options.seed = *c.seed;
  bool all_passed = true;
  std::string json = names.size() > 1 ? "[\n" : "";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const singcov::SuiteReport report = singcov::run_suite(names[i], options);
    all_passed = all_passed && report.passed();
    json += singcov::to_json(report);
    if (names.size() > 1) json += i + 1 < names.size() ? ",\n" : "\n]";
  }
  json += '\n';
  if (c.out.empty()) {
    std::cout << json;
  } else {
    std::ofstream f(c.out);
    if (!f) throw std::invalid_argument("verify: cannot write " + c.out);
    f << json;
    std::cout << (all_passed ? "PASS" : "FAIL") << '\n';
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariance estimation by Haar and Ewens averaging"};
  app.require_subcommand(1);

  Common est_c;
  std::string input;
  std::string estimator;
  singcov::EstimatorOptions est_opts;
  auto* estimate = app.add_subcommand("estimate", "Apply one estimator to a matrix CSV");
  add_common(estimate, est_c, false);
  estimate->add_option("--input", input, "Matrix CSV (m=<dim> header, re,im pairs)")->required()->check(CLI::ExistingFile);
  estimate->add_option("--estimator", estimator, "sample, diagonal-loading, covp, invcovp, ewens, hybrid, hybrid-inverse")->required();
  estimate->add_option("--theta", est_opts.theta, "Ewens parameter");
  estimate->add_option("--p", est_opts.p, "Compression dimension");
  estimate->add_option("--samples", est_opts.samples, "Monte Carlo draws");
  estimate->add_option("--alpha", est_opts.loading_alpha, "Loading alpha");
  estimate->add_option("--beta", est_opts.loading_beta, "Loading beta");

  Common exp_c;
  auto* experiment = app.add_subcommand("experiment", "Run a metric sweep and write raw.csv/metrics.csv");
  add_common(experiment, exp_c, true);

  Common spec_c;
  auto* spectrum = app.add_subcommand("spectrum", "Write ESD and limiting-density CSVs");
  add_common(spectrum, spec_c, true);

  Common ver_c;
  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run an oracle suite and print a JSON report");
  add_common(verify, ver_c, false);
  verify->add_option("suite", suite, "Suite name or 'all'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*estimate) {
      singcov::set_mc_threads(est_c.threads);
      const singcov::HermitianMatrix k(singcov::read_matrix_csv_file(input));
      const singcov::RandomSource rng(est_c.seed.value_or(0));
      const singcov::HermitianMatrix result = singcov::apply_estimator(estimator, k, est_opts, rng);
      if (est_c.out.empty()) {
        singcov::write_matrix_csv(std::cout, result.matrix());
      } else {
        singcov::write_matrix_csv_file(est_c.out, result.matrix());
      }
    } else if (*experiment) {
      singcov::set_mc_threads(exp_c.threads);
      const singcov::ExperimentConfig cfg = load_config(exp_c);
      const singcov::MetricReport report = singcov::run_experiment(cfg);
      singcov::write_metric_report(report, cfg.output_dir);
      std::cout << "wrote " << report.rows.size() << " metric rows to " << cfg.output_dir << '\n';
    } else if (*spectrum) {
      singcov::set_mc_threads(spec_c.threads);
      const singcov::ExperimentConfig cfg = load_config(spec_c);
      for (const std::string& path : singcov::spectrum_report(cfg)) std::cout << path << '\n';
    } else if (*verify) {
      singcov::set_mc_threads(ver_c.threads);
      return run_verify(suite, ver_c);
    }
  } catch (const std::exception& e) {
    std::cerr << "singcov: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}
