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

#include "singcov/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "singcov/ewens.hpp"
#include "singcov/haar.hpp"
#include "singcov/matrix_io.hpp"

namespace singcov {

namespace {

using nlohmann::json;

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: bad value for \"") + key + "\": " + e.what());
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw std::invalid_argument(std::string("config: unknown key \"") + key + "\" in " + where);
    }
  }
}

TruthSpec parse_truth(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: \"truth\" must be an object");
  reject_unknown(j, {"family", "b", "alpha"}, "truth");
  if (!j.contains("family")) throw std::invalid_argument("config: truth.family is required");
  const std::string family = get_as<std::string>(j.at("family"), "truth.family");
  TruthSpec t;
  if (family == "tridiagonal") {
    t.family = TruthFamily::tridiagonal;
    if (!j.contains("b")) throw std::invalid_argument("config: tridiagonal truth needs \"b\"");
    t.b = get_as<double>(j.at("b"), "truth.b");
    if (j.contains("alpha")) throw std::invalid_argument("config: tridiagonal truth takes no alpha");
  } else if (family == "power") {
    t.family = TruthFamily::power;
    if (!j.contains("alpha")) throw std::invalid_argument("config: power truth needs \"alpha\"");
    t.alpha = get_as<double>(j.at("alpha"), "truth.alpha");
    if (j.contains("b")) throw std::invalid_argument("config: power truth takes no b");
  } else if (family == "identity") {
    t.family = TruthFamily::identity;
    if (j.contains("b") || j.contains("alpha")) {
      throw std::invalid_argument("config: identity truth takes no parameters");
    }
  } else {
    throw std::invalid_argument("config: unknown truth family \"" + family +
                                "\" (tridiagonal, power, identity)");
  }
  return t;
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

std::string format_optional(const std::optional<Index>& x) {
  return x ? std::to_string(*x) : std::string();
}

// CSV-safe reason text: commas and newlines would break the column layout.
std::string csv_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Compact label for file names: 0.5 -> 0.5, 300 -> 300.
std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

bool uses(const ExperimentConfig& c, std::string_view name) {
  return std::find(c.estimators.begin(), c.estimators.end(), name) != c.estimators.end();
}

struct TrialContext {
  const ExperimentConfig& config;
  const HermitianMatrix& sigma;
  const HermitianMatrix& sigma_inv;
  std::size_t trial;
  std::vector<RawMetric>& out;

  void record(const std::string& est, const std::string& metric, std::optional<double> theta,
              std::optional<Index> p, std::optional<double> value, std::string reason = {}) {
    out.push_back(RawMetric{est, metric, theta, p, trial, value, std::move(reason)});
  }
};

double distance(const HermitianMatrix& a, const CMatrix& b) { return (a.matrix() - b).norm(); }

void run_trial(TrialContext& ctx, const RandomSource& rng) {
  const ExperimentConfig& c = ctx.config;
  const Index m = c.m;
  RandomSource data_rng = rng.substream(0);
  const HermitianMatrix k = sample_gaussian_covariance(ctx.sigma, c.n, data_rng);
  const Index rank = numerical_rank(k);
  // Monte Carlo streams are addressed by (estimator slot, grid index) so that
  // adding estimators to a config leaves the others' draws untouched.
  auto mc_stream = [&](std::uint64_t slot, std::uint64_t index) {
    return rng.substream(1 + slot).substream(index);
  };

  for (const std::string& est : c.estimators) {
    if (est == "truth") {
      ctx.record(est, "F", std::nullopt, std::nullopt, 0.0);
      ctx.record(est, "f", std::nullopt, std::nullopt, 0.0);
      ctx.record(est, "g", std::nullopt, std::nullopt, 0.0);
    } else if (est == "sample") {
      ctx.record(est, "F", std::nullopt, std::nullopt, distance(ctx.sigma, k.matrix()));
    } else if (est == "diagonal-loading") {
      double best = std::numeric_limits<double>::infinity();
      for (double a : c.loading_alpha_grid) {
        for (double b : c.loading_beta_grid) {
          if (a == 0.0 && b == 0.0) continue;
          best = std::min(best, distance(ctx.sigma, a * k.matrix() +
                                                        b * CMatrix::Identity(m, m)));
        }
      }
      // Best grid point with the truth in hand: an oracle, not a data-driven
      // shrinkage rule, and labelled as such in reports.
      ctx.record("DL-oracle", "F", std::nullopt, std::nullopt, best);
    } else if (est == "covp") {
      for (Index p : c.p_grid) {
        const double scale = static_cast<double>(m) / static_cast<double>(p);
        ctx.record(est, "F", std::nullopt, p,
                   distance(ctx.sigma, scale * cov_p_closed(k, p).matrix()));
      }
    } else if (est == "invcovp") {
      for (std::size_t idx = 0; idx < c.p_grid.size(); ++idx) {
        const Index p = c.p_grid[idx];
        if (p > rank) {
          const std::string why = "p=" + std::to_string(p) + " exceeds rank(K)=" + std::to_string(rank);
          ctx.record(est, "f", std::nullopt, p, std::nullopt, why);
          ctx.record(est, "g", std::nullopt, p, std::nullopt, why);
          continue;
        }
        try {
          const McEstimate inv = invcov_p_mc(k, p, c.mc_samples, mc_stream(0, idx));
          const double pm = static_cast<double>(p) / static_cast<double>(m);
          const SpectralDecomposition eig = eig_hermitian(inv.mean);
          const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
          const double bottom = eig.eigenvalues.cwiseAbs().minCoeff();
          std::string note;
          if (!(bottom > 1e-12 * top)) note = "near-singular; pseudoinverse used";
          const HermitianMatrix cov = pseudoinverse(inv.mean);
          ctx.record(est, "f", std::nullopt, p, distance(ctx.sigma, pm * cov.matrix()), note);
          ctx.record(est, "g", std::nullopt, p, distance(ctx.sigma_inv, inv.mean.matrix() / pm),
                     note);
        } catch (const std::exception& e) {
          ctx.record(est, "f", std::nullopt, p, std::nullopt, e.what());
          ctx.record(est, "g", std::nullopt, p, std::nullopt, e.what());
        }
      }
    } else if (est == "ewens") {
      for (double theta : c.theta_grid) {
        ctx.record(est, "F", theta, std::nullopt, distance(ctx.sigma, ewens_estimator(k.matrix(), theta)));
      }
    } else if (est == "hybrid") {
      for (double theta : c.theta_grid) {
        for (Index p : c.p_grid) {
          ctx.record(est, "F", theta, p, distance(ctx.sigma, hybrid_estimator(k.matrix(), theta, p)));
        }
      }
    } else if (est == "hybrid-inverse") {
      std::uint64_t idx = 0;
      for (double theta : c.theta_grid) {
        for (Index p : c.p_grid) {
          const McEstimate inv = hybrid_inverse_mc(k, theta, p, c.mc_samples, mc_stream(1, idx++));
          ctx.record(est, "g", theta, p, distance(ctx.sigma_inv, inv.mean.matrix()));
        }
      }
    }
  }
}

void write_esd_file(const std::string& path, const HermitianMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_esd_csv(out, esd(a));
}

void write_density_file(const std::string& path, const SymbolFunction& sym, std::size_t bins) {
  const double lo = sym.min();
  const double hi = sym.max();
  const double pad = std::max(0.05 * (hi - lo), 0.05);
  const std::vector<double> edges = linspace(lo - pad, hi + pad, bins + 1);
  const std::vector<double> density = limiting_density(sym, edges);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "abscissa,density\n";
  for (std::size_t k = 0; k < density.size(); ++k) {
    out << format_double(0.5 * (edges[k] + edges[k + 1])) << ',' << format_double(density[k]) << '\n';
  }
}

}  // namespace

HermitianMatrix TruthSpec::matrix(Index m) const {
  switch (family) {
    case TruthFamily::tridiagonal:
      return TridiagonalToeplitz(m, b).matrix();
    case TruthFamily::power:
      return PowerToeplitz(m, alpha).matrix();
    case TruthFamily::identity:
      break;
  }
  return HermitianMatrix::identity(m);
}

SymbolFunction TruthSpec::symbol() const {
  switch (family) {
    case TruthFamily::tridiagonal:
      return SymbolFunction::tridiagonal(b);
    case TruthFamily::power:
      return SymbolFunction::power(alpha);
    case TruthFamily::identity:
      break;
  }
  return SymbolFunction::constant(1.0);
}

std::string TruthSpec::label() const {
  switch (family) {
    case TruthFamily::tridiagonal:
      return "tridiagonal(b=" + short_number(b) + ")";
    case TruthFamily::power:
      return "power(alpha=" + short_number(alpha) + ")";
    case TruthFamily::identity:
      break;
  }
  return "identity";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

ExperimentConfig ExperimentConfig::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(j,
                 {"m", "n", "truth", "estimators", "theta_grid", "p_grid", "beta_grid",
                  "loading_alpha_grid", "loading_beta_grid", "mc_samples", "seed", "trials",
                  "density_bins", "output_dir"},
                 "config");
  ExperimentConfig c;
  if (!j.contains("m")) throw std::invalid_argument("config: \"m\" is required");
  if (!j.contains("truth")) throw std::invalid_argument("config: \"truth\" is required");
  c.m = get_as<Index>(j.at("m"), "m");
  c.n = j.contains("n") ? get_as<Index>(j.at("n"), "n") : c.m;
  c.truth = parse_truth(j.at("truth"));
  if (j.contains("estimators")) c.estimators = get_as<std::vector<std::string>>(j.at("estimators"), "estimators");
  if (j.contains("theta_grid")) c.theta_grid = get_as<std::vector<double>>(j.at("theta_grid"), "theta_grid");
  if (j.contains("p_grid")) c.p_grid = get_as<std::vector<Index>>(j.at("p_grid"), "p_grid");
  if (j.contains("beta_grid")) c.beta_grid = get_as<std::vector<double>>(j.at("beta_grid"), "beta_grid");
  if (j.contains("loading_alpha_grid")) {
    c.loading_alpha_grid = get_as<std::vector<double>>(j.at("loading_alpha_grid"), "loading_alpha_grid");
  }
  if (j.contains("loading_beta_grid")) {
    c.loading_beta_grid = get_as<std::vector<double>>(j.at("loading_beta_grid"), "loading_beta_grid");
  }
  if (j.contains("mc_samples")) c.mc_samples = get_as<std::size_t>(j.at("mc_samples"), "mc_samples");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("trials")) c.trials = get_as<std::size_t>(j.at("trials"), "trials");
  if (j.contains("density_bins")) c.density_bins = get_as<std::size_t>(j.at("density_bins"), "density_bins");
  if (j.contains("output_dir")) c.output_dir = get_as<std::string>(j.at("output_dir"), "output_dir");
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (m < 2) fail("need m >= 2");
  if (n < 1) fail("need n >= 1");
  if (trials < 1) fail("need trials >= 1");
  if (density_bins < 1) fail("need density_bins >= 1");
  // Constructing the truth checks its parameters.
  (void)truth.matrix(std::min<Index>(m, 2));
  if (truth.family == TruthFamily::tridiagonal) (void)TridiagonalToeplitz(m, truth.b);
  for (const std::string& e : estimators) {
    const auto& names = estimator_names();
    if (std::find(names.begin(), names.end(), e) == names.end()) fail("unknown estimator \"" + e + "\"");
  }
  const bool needs_theta = uses(*this, "ewens") || uses(*this, "hybrid") || uses(*this, "hybrid-inverse");
  const bool needs_p = uses(*this, "covp") || uses(*this, "invcovp") || uses(*this, "hybrid") ||
                       uses(*this, "hybrid-inverse");
  if (needs_theta && theta_grid.empty()) fail("theta_grid must be nonempty for ewens/hybrid estimators");
  if (needs_p && p_grid.empty()) fail("p_grid must be nonempty for covp/invcovp/hybrid estimators");
  for (double t : theta_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) fail("theta values must be positive and finite");
  }
  for (Index p : p_grid) {
    if (p < 1 || p > m) fail("p values must lie in [1, m]");
  }
  for (double b : beta_grid) {
    if (!(b > 0.0) || !std::isfinite(b)) fail("beta values must be positive and finite");
  }
  if ((uses(*this, "invcovp") || uses(*this, "hybrid-inverse")) && mc_samples < 1) {
    fail("need mc_samples >= 1");
  }
  if (uses(*this, "diagonal-loading")) {
    if (loading_alpha_grid.empty() || loading_beta_grid.empty()) fail("loading grids must be nonempty");
    for (double a : loading_alpha_grid) {
      if (!(a >= 0.0)) fail("loading alpha values must be >= 0");
    }
    for (double b : loading_beta_grid) {
      if (!(b >= 0.0)) fail("loading beta values must be >= 0");
    }
  }
}

const MetricRow* MetricReport::find(std::string_view estimator, std::string_view metric,
                                    std::optional<double> theta, std::optional<Index> p) const {
  for (const MetricRow& r : rows) {
    if (r.estimator == estimator && r.metric == metric && r.theta == theta && r.p == p) return &r;
  }
  return nullptr;
}

std::vector<MetricRow> aggregate(const std::vector<RawMetric>& raw) {
  std::vector<MetricRow> rows;
  std::vector<std::vector<double>> values;
  std::map<std::tuple<std::string, std::string, std::string, std::string>, std::size_t> index;
  for (const RawMetric& r : raw) {
    const auto key = std::make_tuple(r.estimator, r.metric, format_optional(r.theta), format_optional(r.p));
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back(MetricRow{r.estimator, r.metric, r.theta, r.p, 0, 0.0, 0.0, true, {}});
      values.emplace_back();
    }
    MetricRow& row = rows[it->second];
    ++row.trials;
    if (r.value) {
      values[it->second].push_back(*r.value);
      if (row.reason.empty() && !r.reason.empty()) row.reason = r.reason;
    } else {
      if (row.valid) row.reason = r.reason;
      row.valid = false;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::vector<double>& v = values[i];
    if (!rows[i].valid || v.empty()) {
      rows[i].valid = false;
      continue;
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    rows[i].mean = mean;
    rows[i].std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  return rows;
}

MetricReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const HermitianMatrix sigma = config.truth.matrix(config.m);
  const HermitianMatrix sigma_inv = config.truth.family == TruthFamily::power
                                        ? power_inverse(config.m, config.truth.alpha)
                                        : pseudoinverse(sigma);
  const RandomSource root(config.seed);
  MetricReport report;
  for (std::size_t t = 0; t < config.trials; ++t) {
    TrialContext ctx{config, sigma, sigma_inv, t, report.raw};
    run_trial(ctx, root.substream(t));
  }
  report.rows = aggregate(report.raw);
  return report;
}

void write_metric_report(const MetricReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(std::filesystem::path(dir) / "raw.csv");
    if (!out) throw std::runtime_error("cannot write raw.csv in " + dir);
    out << "estimator,metric,theta,p,trial,value,valid,reason\n";
    for (const RawMetric& r : report.raw) {
      out << r.estimator << ',' << r.metric << ',' << format_optional(r.theta) << ','
          << format_optional(r.p) << ',' << r.trial << ',' << format_optional(r.value) << ','
          << (r.value ? 1 : 0) << ',' << csv_text(r.reason) << '\n';
    }
  }
  std::ofstream out(std::filesystem::path(dir) / "metrics.csv");
  if (!out) throw std::runtime_error("cannot write metrics.csv in " + dir);
  out << "estimator,metric,theta,p,trials,mean,std,valid,reason\n";
  for (const MetricRow& r : report.rows) {
    out << r.estimator << ',' << r.metric << ',' << format_optional(r.theta) << ','
        << format_optional(r.p) << ',' << r.trials << ',';
    if (r.valid) {
      out << format_double(r.mean) << ',' << format_double(r.std);
    } else {
      out << ',';
    }
    out << ',' << (r.valid ? 1 : 0) << ',' << csv_text(r.reason) << '\n';
  }
}

std::vector<std::string> spectrum_report(const ExperimentConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  std::vector<std::string> written;
  auto path = [&](const std::string& name) {
    written.push_back((fs::path(config.output_dir) / name).string());
    return written.back();
  };
  const Index m = config.m;
  const HermitianMatrix sigma = config.truth.matrix(m);
  write_esd_file(path("esd_truth.csv"), sigma);

  RandomSource rng = RandomSource(config.seed).substream(0);
  write_esd_file(path("esd_sample.csv"), sample_gaussian_covariance(sigma, config.n, rng));

  for (double theta : config.theta_grid) {
    write_esd_file(path("esd_ewens_theta=" + short_number(theta) + ".csv"),
                   ewens_estimator(sigma, theta));
  }
  const SymbolFunction sym = config.truth.symbol();
  write_density_file(path("density_truth.csv"), sym, config.density_bins);
  for (double beta : config.beta_grid) {
    const double theta = beta * static_cast<double>(m);
    write_esd_file(path("esd_ewens_beta=" + short_number(beta) + ".csv"),
                   ewens_estimator(sigma, theta));
    write_density_file(path("density_beta=" + short_number(beta) + ".csv"),
                       limiting_symbol(sym, beta), config.density_bins);
  }
  return written;
}

HermitianMatrix apply_estimator(const std::string& name, const HermitianMatrix& k,
                                const EstimatorOptions& o, const RandomSource& rng) {
  if (name == "sample") return k;
  if (name == "diagonal-loading") {
    return diagonal_loading(k, LoadingParameters(o.loading_alpha, o.loading_beta));
  }
  if (name == "covp") return cov_p_closed(k, o.p);
  if (name == "invcovp") return invcov_p_mc(k, o.p, o.samples, rng).mean;
  if (name == "ewens") return ewens_estimator(k, o.theta);
  if (name == "hybrid") return hybrid_estimator(k, o.theta, o.p);
  if (name == "hybrid-inverse") return hybrid_inverse_mc(k, o.theta, o.p, o.samples, rng).mean;
  throw std::invalid_argument("estimate: unknown estimator \"" + name +
                              "\" (sample, diagonal-loading, covp, invcovp, ewens, hybrid, "
                              "hybrid-inverse)");
}

}  // namespace singcov
