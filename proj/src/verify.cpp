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

#include "singcov/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "singcov/combinatorics.hpp"
#include "singcov/ewens.hpp"
#include "singcov/haar.hpp"
#include "singcov/linalg.hpp"
#include "singcov/toeplitz.hpp"

namespace singcov {

namespace {

const std::vector<double> kThetaGrid = {0.5, 1.0, 2.0, 5.0};

class Recorder {
 public:
  explicit Recorder(SuiteReport& r) : report_(r) {}

  void check(const std::string& group, const std::string& label, double residual, double tol,
             std::string note = {}) {
    const bool ok = std::isfinite(residual) && residual <= tol;
    report_.checks.push_back(CheckResult{group, label, residual, tol, ok, std::move(note)});
  }

 private:
  SuiteReport& report_;
};

std::string fmt(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

CMatrix random_complex(Index rows, Index cols, RandomSource& rng) {
  CMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) = rng.complex_normal();
  }
  return a;
}

HermitianMatrix random_hermitian(Index m, RandomSource& rng) {
  const CMatrix g = random_complex(m, m, rng);
  return HermitianMatrix(0.5 * (g + g.adjoint()));
}

HermitianMatrix random_psd(Index m, RandomSource& rng) {
  const CMatrix g = random_complex(m, m, rng);
  return HermitianMatrix(g * g.adjoint() / static_cast<double>(m));
}

// max |a - b| / max |b|.
double relative_max(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

// Largest |mc - exact| / se over the entries; a zero standard error only
// tolerates an exact match.
double max_z(const CMatrix& mc, const RMatrix& se, const CMatrix& exact) {
  double z = 0.0;
  for (Index j = 0; j < mc.cols(); ++j) {
    for (Index i = 0; i < mc.rows(); ++i) {
      const double d = std::abs(mc(i, j) - exact(i, j));
      const double s = se(i, j);
      z = std::max(z, s > 0.0 ? d / s : (d == 0.0 ? 0.0 : INFINITY));
    }
  }
  return z;
}

double z_diff(double a, double se_a, double b, double se_b) {
  const double s = se_a + se_b;
  return s > 0.0 ? std::abs(a - b) / s : (a == b ? 0.0 : INFINITY);
}

std::vector<double> uniform_vector(std::size_t n, double lo, double hi, RandomSource& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = lo + (hi - lo) * rng.uniform();
  return x;
}

RVector to_rvector(const std::vector<double>& x) {
  return Eigen::Map<const RVector>(x.data(), static_cast<Index>(x.size()));
}

// ---------------------------------------------------------------------------

void suite_ewens_closedform(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(1);
  double trace_err = 0.0;
  double psd_min = 0.0;
  for (Index m = 2; m <= 7; ++m) {
    for (double theta : kThetaGrid) {
      double worst = 0.0;
      for (int rep = 0; rep < 20; ++rep) {
        const HermitianMatrix k = random_hermitian(m, rng);
        const HermitianMatrix closed = ewens_estimator(k, theta);
        worst = std::max(worst, relative_max(closed.matrix(), ewens_estimator_bruteforce(k, theta).matrix()));
        trace_err = std::max(trace_err, std::abs(closed.trace() - k.trace()) / (1.0 + std::abs(k.trace())));
      }
      rec.check("1", "closed form vs S_m enumeration, m=" + std::to_string(m) + " theta=" + fmt(theta),
                worst, 1e-12);
      const HermitianMatrix psd = random_psd(m, rng);
      psd_min = std::min(psd_min, eig_hermitian(ewens_estimator(psd, theta)).eigenvalues.minCoeff());
    }
  }
  rec.check("ewens-trace", "Tr(K_theta) = Tr(K)", trace_err, 1e-12);
  rec.check("ewens-psd", "K PSD implies K_theta PSD (negated smallest eigenvalue)", -psd_min, 1e-10);

  // theta = 1: alpha ee^T/m + beta (I - ee^T/m).
  double uniform_err = 0.0;
  double diag_err = 0.0;
  double limit_err = 0.0;
  for (Index m = 2; m <= 7; ++m) {
    const HermitianMatrix k = random_hermitian(m, rng);
    const double md = static_cast<double>(m);
    const CMatrix ee = CMatrix::Ones(m, m);
    const Complex alpha = k.matrix().sum() / md;
    const Complex beta = (k.trace() - alpha) / (md - 1.0);
    const CMatrix remark = alpha * ee / md + beta * (CMatrix::Identity(m, m) - ee / md);
    uniform_err = std::max(uniform_err, relative_max(ewens_estimator(k, 1.0).matrix(), remark));

    const RVector d = to_rvector(uniform_vector(static_cast<std::size_t>(m), 0.1, 3.0, rng));
    for (double theta : kThetaGrid) {
      const RVector loaded = ((theta - 1.0) * d + RVector::Constant(m, d.sum())) / (theta + md - 1.0);
      diag_err = std::max(diag_err, relative_max(ewens_estimator(HermitianMatrix::diagonal(d), theta).matrix(),
                                                 loaded.cast<Complex>().asDiagonal().toDenseMatrix()));
    }
    limit_err = std::max(limit_err, (ewens_estimator(k, 1e8).matrix() - k.matrix()).norm() / k.matrix().norm());
  }
  rec.check("ewens-uniform", "theta=1 equals alpha ee^T/m + beta (I - ee^T/m)", uniform_err, 1e-12);
  rec.check("ewens-diagonal", "diagonal K gives ((theta-1)D + Tr(D) I)/(theta+m-1)", diag_err, 1e-12);
  rec.check("ewens-limit", "|K_theta - K|_F / |K|_F at theta=1e8", limit_err, 1e-6);
}

void suite_hybrid_closedform(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(2);
  for (Index m = 2; m <= 7; ++m) {
    for (Index p = 1; p <= m; ++p) {
      double worst = 0.0;
      for (double theta : kThetaGrid) {
        for (int rep = 0; rep < 3; ++rep) {
          const HermitianMatrix k = random_hermitian(m, rng);
          worst = std::max(worst, relative_max(hybrid_estimator(k, theta, p).matrix(),
                                               hybrid_estimator_exhaustive(k, theta, p).matrix()));
        }
      }
      rec.check("2", "closed form vs S_{p,m} enumeration, m=" + std::to_string(m) + " p=" + std::to_string(p),
                worst, 1e-12);
    }
  }

  // The two worked 3 x 3 examples, on a general complex matrix.
  double remark_err = 0.0;
  for (double theta : kThetaGrid) {
    const CMatrix a = random_complex(3, 3, rng);
    CMatrix k32(3, 3);
    k32 << (theta + 1.0) * a(0, 0), theta * a(0, 1), a(0, 2),
           theta * a(1, 0), (theta + 1.0) * a(1, 1), a(1, 2),
           a(2, 0), a(2, 1), 2.0 * a(2, 2);
    k32 /= theta + 2.0;
    remark_err = std::max(remark_err, relative_max(hybrid_estimator(a, theta, 2), k32));
    const RVector d = to_rvector(uniform_vector(3, 0.1, 3.0, rng));
    RVector k31(3);
    k31 << theta * d(0), d(1), d(2);
    k31 /= theta + 2.0;
    remark_err = std::max(remark_err, relative_max(hybrid_estimator(CMatrix(d.cast<Complex>().asDiagonal()), theta, 1),
                                                   CMatrix(k31.cast<Complex>().asDiagonal())));
  }
  rec.check("2", "worked examples K_{theta,3,2} and K_{theta,3,1}", remark_err, 1e-14);

  // p = m: V_sigma^T V_sigma = I for every injection, so K is returned.
  double pm_err = 0.0;
  double block_err = 0.0;
  for (Index m = 2; m <= 7; ++m) {
    const CMatrix a = random_complex(m, m, rng);
    pm_err = std::max(pm_err, relative_max(hybrid_estimator(a, 1.7, m), a));
    // Entry ratios are constant on the four (i<p, j<p) blocks, split by i = j.
    for (Index p = 1; p <= m; ++p) {
      const CMatrix h = hybrid_estimator(a, 2.3, p);
      std::map<std::tuple<bool, bool, bool>, Complex> seen;
      for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
          const Complex r = h(i, j) / a(i, j);
          const auto key = std::make_tuple(i < p, j < p, i == j);
          auto [it, fresh] = seen.emplace(key, r);
          if (!fresh) block_err = std::max(block_err, std::abs(r - it->second));
        }
      }
    }
  }
  rec.check("hybrid-pm", "p=m reproduces K", pm_err, 1e-15);
  rec.check("hybrid-blocks", "entry ratios constant within each block", block_err, 1e-12);

  // mu_{theta,m,p}: product form vs completions, normalization.
  double prod_err = 0.0;
  double norm_err = 0.0;
  double pm_prob_err = 0.0;
  for (Index m = 1; m <= 6; ++m) {
    for (Index p = 1; p <= m; ++p) {
      for (double theta : kThetaGrid) {
        double total = 0.0;
        for_each_injection(m, p, [&](const Injection& s) {
          const double e = injection_probability_enumerated(s, theta);
          prod_err = std::max(prod_err, std::abs(injection_probability_product(s, theta) - e) / e);
          total += e;
          if (p == m) {
            const Permutation full(s.images());
            pm_prob_err = std::max(pm_prob_err, std::abs(e - ewens_probability(full, theta)) / e);
          }
        });
        norm_err = std::max(norm_err, std::abs(total - 1.0));
      }
    }
  }
  rec.check("injection-product", "product form matches completion sums", prod_err, 1e-12);
  rec.check("injection-normalization", "mu_{theta,m,p} sums to 1", norm_err, 1e-12);
  rec.check("injection-pm", "p=m equals the Ewens probability", pm_prob_err, 1e-14);
}

void suite_hybrid_inverse_diagonal(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(3);
  double statement_worst = 0.0;
  double swapped_worst = 0.0;
  for (Index m = 2; m <= 6; ++m) {
    double worst_m = 0.0;
    for (Index n = 1; n <= m; ++n) {
      for (Index p = 1; p <= n; ++p) {
        for (double theta : kThetaGrid) {
          const RVector d = to_rvector(uniform_vector(static_cast<std::size_t>(n), 0.2, 4.0, rng));
          RVector full = RVector::Zero(m);
          full.head(n) = d;
          const CMatrix oracle = hybrid_inverse_exhaustive(HermitianMatrix::diagonal(full), theta, p).matrix();
          const double err = relative_max(hybrid_inverse_diagonal(d, m, theta, p).matrix(), oracle);
          worst_m = std::max(worst_m, err);
          // The proof's case labels put the enhanced coefficient on p < i <= n.
          RVector swapped = RVector::Zero(m);
          const double md = static_cast<double>(m);
          const double pd = static_cast<double>(p);
          for (Index i = 0; i < n; ++i) {
            swapped(i) = (i < p ? pd : theta + pd - 1.0) / (theta + md - 1.0) / d(i);
          }
          if (p < n && theta != 1.0) {
            swapped_worst = std::max(swapped_worst,
                                     relative_max(CMatrix(swapped.cast<Complex>().asDiagonal()), oracle));
          }
        }
      }
    }
    statement_worst = std::max(statement_worst, worst_m);
    rec.check("3", "diagonal Ktilde vs S_{p,m} enumeration, m=" + std::to_string(m) + ", all p <= n <= m",
              worst_m, 1e-12);
  }
  rec.check("3", "statement reading: (theta+p-1)/(theta+m-1) on entries 1..p", statement_worst, 1e-12,
            "confirmed by enumeration");
  // Passing means the proof-case reading disagrees with enumeration by at
  // least 1e-3 wherever the two readings differ.
  rec.check("3", "proof-case reading rejected (inverse of its residual)",
            swapped_worst > 0.0 ? 1.0 / swapped_worst : INFINITY, 1e3,
            "proof-case reading residual " + fmt(swapped_worst));
}

void suite_covp_haar(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(4);
  const Index m = 6;
  const HermitianMatrix k = random_hermitian(m, rng);
  for (Index p : {2, 3, 4}) {
    const HermitianMatrix closed = cov_p_closed(k, p);
    const McEstimate mc = cov_p_mc(k, p, 200000, rng.substream(static_cast<std::uint64_t>(100 + p)));
    rec.check("4", "cov_p closed form vs 2e5 Haar draws, m=6 p=" + std::to_string(p) + " (max |z|)",
              max_z(mc.mean.matrix(), mc.standard_error, closed.matrix()), 5.0);
    const double target = static_cast<double>(p) / static_cast<double>(m) * k.trace();
    rec.check("4", "Tr cov_p(K) = (p/m) Tr K, p=" + std::to_string(p),
              std::abs(closed.trace() - target) / std::max(1.0, std::abs(target)), 1e-12);
  }
  const HermitianMatrix id = cov_p_closed(HermitianMatrix::identity(m), 3);
  rec.check("covp-identity", "cov_p(I) = (p/m) I", relative_max(id.matrix(), 0.5 * CMatrix::Identity(m, m)),
            1e-15);
}

void suite_haar_moments(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(5);
  for (Index n : {4, 5}) {
    for (Index p : {2, 3}) {
      const RVector d = to_rvector(uniform_vector(static_cast<std::size_t>(n), 0.5, 3.0, rng));
      const std::string tag = "n=" + std::to_string(n) + " p=" + std::to_string(p);
      for (int l : {1, 2}) {
        const RVector closed = l == 1 ? moment_matrix_l1(d, p) : moment_matrix_l2(d, p);
        const RVector via_schur = moment_matrix_coeffs(d, p, l).apply(d);
        rec.check("5", "l=" + std::to_string(l) + " closed form vs Schur coefficients, " + tag,
                  (closed - via_schur).cwiseAbs().maxCoeff() / closed.cwiseAbs().maxCoeff(), 1e-10);
        const McEstimate mc = moment_matrix_mc(d, p, l, 100000, rng.substream(static_cast<std::uint64_t>(10 * n + p + 100 * l)));
        const CMatrix exact = closed.cast<Complex>().asDiagonal();
        rec.check("5", "l=" + std::to_string(l) + " closed form vs 1e5 Haar draws, " + tag + " (max |z|)",
                  max_z(mc.mean.matrix(), mc.standard_error, exact), 5.0);
        rec.check("moment-trace", "Tr of moment matrix equals trace moment N=l, l=" + std::to_string(l) + " " + tag,
                  std::abs(closed.sum() - trace_moment(d, p, l)) / std::abs(closed.sum()), 1e-10);
      }
      for (int big_n = 1; big_n <= 4; ++big_n) {
        const ScalarEstimate mc = trace_moment_mc(d, p, big_n, 100000, rng.substream(static_cast<std::uint64_t>(1000 + 10 * n + p + 100 * big_n)));
        const double exact = trace_moment(d, p, big_n);
        rec.check("5", "trace moment N=" + std::to_string(big_n) + " vs 1e5 Haar draws, " + tag + " (|z|)",
                  std::abs(mc.mean - exact) / mc.standard_error, 5.0);
      }
    }
  }
}

void suite_schur(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(6);
  double route_err = 0.0;
  double short_err = 0.0;
  for (int big_n = 1; big_n <= 6; ++big_n) {
    for (int j = 0; j < big_n; ++j) {
      const HookShape shape(big_n, j);
      for (int n = 1; n <= 5; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
          const std::vector<double> x = uniform_vector(static_cast<std::size_t>(n), 0.2, 2.0, rng);
          const double via_ps = schur_hook_powersum(shape, PowerSums::of(x, big_n));
          if (j + 1 > n) {
            // Too many rows for n variables: the polynomial vanishes.
            short_err = std::max(short_err, std::abs(via_ps) / std::pow(2.0, big_n));
            continue;
          }
          const double via_bi = schur_bialternant(shape.partition(), x);
          route_err = std::max(route_err, std::abs(via_ps - via_bi) / std::abs(via_bi));
        }
      }
    }
  }
  rec.check("6", "Murnaghan-Nakayama vs bialternant, hooks N<=6, n<=5", route_err, 1e-10);
  rec.check("6", "hooks longer than n vanish in the power-sum route", short_err, 1e-10);

  // chi^{lambda_j}(rho) for rho = (1^3), (1,2), (3).
  const std::int64_t table[3][3] = {{1, 1, 1}, {2, 0, -1}, {1, -1, 1}};
  const CycleType rhos[3] = {CycleType({3}), CycleType({1, 1}), CycleType({0, 0, 1})};
  double table_err = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int r = 0; r < 3; ++r) {
      table_err = std::max(table_err, static_cast<double>(std::llabs(hook_character(HookShape(3, j), rhos[r]) - table[j][r])));
    }
  }
  rec.check("6", "N=3 hook character table", table_err, 0.0);

  double closed_err = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<double> x = uniform_vector(3, -2.0, 2.0, rng);
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    const double s211 = x1 * x2 * x3 * (x1 + x2 + x3);
    const double s22 = x1 * x1 * x2 * x2 + x1 * x1 * x3 * x3 + x2 * x2 * x3 * x3 + x1 * x1 * x2 * x3 +
                       x1 * x2 * x2 * x3 + x1 * x2 * x3 * x3;
    closed_err = std::max(closed_err, std::abs(schur_bialternant(Partition({2, 1, 1}), x) - s211) / (1.0 + std::abs(s211)));
    closed_err = std::max(closed_err, std::abs(schur_bialternant(Partition({2, 2, 0}), x) - s22) / (1.0 + std::abs(s22)));
  }
  rec.check("6", "s_(2,1,1) and s_(2,2,0) expansions at 20 random points", closed_err, 1e-10);

  std::int64_t orth_err = 0;
  for (int big_n = 1; big_n <= 5; ++big_n) {
    std::int64_t fact = 1;
    for (int t = 2; t <= big_n; ++t) fact *= t;
    for (int j = 0; j < big_n; ++j) {
      std::int64_t total = 0;
      for (const Partition& rho : enumerate_partitions(big_n)) {
        const CycleType ct = CycleType::from_partition(rho);
        const std::int64_t chi = hook_character(HookShape(big_n, j), ct);
        total += fact / ct.centralizer_size() * chi * chi;
      }
      orth_err = std::max(orth_err, total > fact ? total - fact : fact - total);
    }
  }
  rec.check("schur-orthogonality", "sum_rho (N!/z_rho) chi^2 = N! for hooks N<=5", static_cast<double>(orth_err), 0.0);
}

void suite_invcov_structure(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(7);
  const Index m = 6;
  RVector d(m);
  d << 3.0, 2.0, 1.5, 0.7, 0.0, 0.0;
  const McEstimate est = invcov_p_mc(HermitianMatrix::diagonal(d), 3, 200000, rng.substream(1));
  const CMatrix diag_only = est.mean.matrix().diagonal().asDiagonal();
  rec.check("7", "off-diagonal entries vanish, m=6 n=4 p=3 (max |z|)",
            max_z(est.mean.matrix(), est.standard_error, diag_only), 5.0);
  rec.check("7", "zero-block diagonal entries equal (|z|)",
            z_diff(est.mean(4, 4).real(), est.standard_error(4, 4), est.mean(5, 5).real(), est.standard_error(5, 5)),
            5.0, "mu = " + fmt(0.5 * (est.mean(4, 4).real() + est.mean(5, 5).real())));
  RVector tied(m);
  tied << 2.0, 2.0, 1.2, 0.5, 0.0, 0.0;
  const McEstimate t = invcov_p_mc(HermitianMatrix::diagonal(tied), 3, 200000, rng.substream(2));
  rec.check("7", "d_1 = d_2 gives lambda_1 = lambda_2 (|z|)",
            z_diff(t.mean(0, 0).real(), t.standard_error(0, 0), t.mean(1, 1).real(), t.standard_error(1, 1)), 5.0);
}

void suite_block_pinv(Recorder& rec, const VerifyOptions& o) {
  RandomSource rng = RandomSource(o.seed).substream(8);
  std::size_t nonzero_count = 0;
  std::size_t zero_count = 0;
  for (Index rows = 2; rows <= 6; ++rows) {
    for (Index cols = 2; cols <= 6; ++cols) {
      const Index k = cols - 1;
      double worst = 0.0;
      for (int inst = 0; inst < 100; ++inst) {
        CMatrix a_block = random_complex(rows, k, rng);
        CVector a_col;
        if (inst % 2 == 0) {
          // Zeroing the last row keeps e_last out of range(A): s != 0.
          a_block.row(rows - 1).setZero();
          a_col = random_complex(rows, 1, rng).col(0);
        } else {
          // a in range(A): s = 0.
          a_col = a_block * random_complex(k, 1, rng).col(0);
        }
        CMatrix mm(rows, cols);
        mm << a_block, a_col;
        const BlockPinvUpdate up = block_pinv_update(a_block, a_col);
        (up.nonzero_branch ? nonzero_count : zero_count)++;
        const CMatrix m_pinv = pseudoinverse_general(mm);
        const CMatrix reference = m_pinv * m_pinv.adjoint();  // (M*M)^+
        worst = std::max(worst, (up.pinv.matrix() - reference).norm() / reference.norm());
      }
      rec.check("8", "rank-one update vs SVD pseudoinverse, A " + std::to_string(rows) + "x" +
                         std::to_string(k) + " (100 instances)", worst, 1e-8);
    }
  }
  rec.check("8", "both s-branches exercised (min branch count, inverted)",
            1.0 / static_cast<double>(std::max<std::size_t>(1, std::min(nonzero_count, zero_count))), 1.0,
            "s!=0: " + std::to_string(nonzero_count) + ", s=0: " + std::to_string(zero_count));
}

void suite_toeplitz_spectra(Recorder& rec, const VerifyOptions&) {
  {
    const Index m = 200;
    const double b = 0.3;
    const SpectralDecomposition closed = tridiag_eigensystem(m, b);
    const HermitianMatrix bm = TridiagonalToeplitz(m, b).matrix();
    const RVector numeric = eig_hermitian(bm).eigenvalues;
    rec.check("9a", "tridiagonal eigenvalues closed form vs numeric, m=200",
              (closed.eigenvalues - numeric).cwiseAbs().maxCoeff(), 1e-10);
    const CMatrix resid = bm.matrix() * closed.eigenvectors -
                          closed.eigenvectors * closed.eigenvalues.cast<Complex>().asDiagonal();
    rec.check("9a", "B v_j = lambda_j v_j residual, m=200", resid.cwiseAbs().maxCoeff(), 1e-10);
  }
  double det_err = 0.0;
  double inv_err = 0.0;
  for (Index m = 1; m <= 50; ++m) {
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const CMatrix a = PowerToeplitz(m, alpha).matrix().matrix();
      const double lu = Eigen::PartialPivLU<RMatrix>(a.real()).determinant();
      const double closed = power_det(m, alpha);
      det_err = std::max(det_err, std::abs(lu - closed) / closed);
      const CMatrix inv = power_inverse(m, alpha).matrix();
      inv_err = std::max(inv_err, (a * inv - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff());
      if (alpha <= 0.7) {
        inv_err = std::max(inv_err, relative_max(inv, CMatrix(a.inverse())));
      }
    }
  }
  rec.check("9b", "det A_alpha = (1-alpha^2)^{m-1} vs LU, m<=50", det_err, 1e-10);
  rec.check("power-inverse", "displayed inverse: A A^{-1} = I and matches numeric inverse", inv_err, 1e-10);

  {
    const Index m = 300;
    const HermitianMatrix bm = TridiagonalToeplitz(m, 0.3).matrix();
    const SymbolFunction sym = SymbolFunction::tridiagonal(0.3);
    const double ks = esd(bm).kolmogorov_distance([&](double x) { return sym.cdf(x); });
    rec.check("9e", "ESD of B (m=300, b=0.3) vs symbol push-forward, Kolmogorov distance", ks, 0.05);
    const HermitianMatrix am = PowerToeplitz(m, 0.5).matrix();
    const SymbolFunction psym = SymbolFunction::power(0.5);
    rec.check("symbol-power", "ESD of A_0.5 (m=300) vs symbol push-forward, Kolmogorov distance",
              esd(am).kolmogorov_distance([&](double x) { return psym.cdf(x); }), 0.05);
  }
  double mass_err = 0.0;
  for (const SymbolFunction& sym : {SymbolFunction::tridiagonal(0.3), SymbolFunction::power(0.5),
                                    limiting_symbol(SymbolFunction::power(0.5), 1.0)}) {
    std::vector<double> edges(401);
    const double lo = sym.min() - 0.1;
    const double hi = sym.max() + 0.1;
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = lo + (hi - lo) * static_cast<double>(i) / 400.0;
    const std::vector<double> dens = limiting_density(sym, edges);
    double mass = 0.0;
    for (std::size_t i = 0; i < dens.size(); ++i) mass += dens[i] * (edges[i + 1] - edges[i]);
    mass_err = std::max(mass_err, std::abs(mass - 1.0));
  }
  rec.check("density-mass", "limiting densities integrate to 1", mass_err, 1e-3);
  const SymbolFunction p5 = SymbolFunction::power(0.5);
  rec.check("symbol-power", "power symbol endpoints (1+a)/(1-a) and (1-a)/(1+a)",
            std::max(std::abs(p5.eval(0.0) - 3.0), std::abs(p5.eval(std::acos(-1.0)) - 1.0 / 3.0)), 1e-14);
}

void suite_toeplitz_decomp(Recorder& rec, const VerifyOptions&) {
  double b_err = 0.0;
  double a_err = 0.0;
  for (Index m = 5; m <= 50; ++m) {
    const double md = static_cast<double>(m);
    for (double theta : {0.5, 1.0, 2.0, 3.0, 10.0, md, 3.0 * md}) {
      const TridiagonalToeplitz tb(m, 0.3);
      b_err = std::max(b_err, relative_max(ewens_transform_tridiagonal(tb, theta).matrix(),
                                           ewens_estimator(tb.matrix(), theta).matrix()));
      const PowerToeplitz pa(m, 0.5);
      a_err = std::max(a_err, relative_max(ewens_transform_power(pa, theta).matrix(),
                                           ewens_estimator(pa.matrix(), theta).matrix()));
    }
  }
  rec.check("9c", "B_theta decomposition vs Ewens closed form, m=5..50", b_err, 1e-10);
  rec.check("9c", "A_theta decomposition vs Ewens closed form, m=5..50", a_err, 1e-10);

  const TridiagonalToeplitz tb(5, 0.3);
  rec.check("toeplitz-limit", "B_theta -> B at theta=1e8",
            (ewens_transform_tridiagonal(tb, 1e8).matrix() - tb.matrix().matrix()).cwiseAbs().maxCoeff(), 1e-6);
  // The displayed T_m pattern for m = 7.
  RMatrix t7(7, 7);
  t7 << 0, 1, 3, 3, 3, 3, 2,
        1, 0, 2, 4, 4, 4, 3,
        3, 2, 0, 2, 4, 4, 3,
        3, 4, 2, 0, 2, 4, 3,
        3, 4, 4, 2, 0, 2, 3,
        3, 4, 4, 4, 2, 0, 1,
        2, 3, 3, 3, 3, 1, 0;
  rec.check("toeplitz-tm", "T_7 matches the displayed pattern", (tridiag_t_matrix(7) - t7).cwiseAbs().maxCoeff(), 0.0);
}

void suite_toeplitz_support(Recorder& rec, const VerifyOptions&) {
  const Index m = 300;
  const double b = 0.3;
  const SupportInterval target = limiting_support_tridiagonal(b, 1.0);
  const RVector ev = eig_hermitian(ewens_transform_tridiagonal(TridiagonalToeplitz(m, b), static_cast<double>(m))).eigenvalues;
  const std::string bulk = "bulk edges [" + fmt(ev(m - 1)) + ", " + fmt(ev(1)) + "]; lambda_max = " + fmt(ev(0)) +
                           " is the Perron outlier along e";
  rec.check("9d", "lambda_max of B_theta within 0.05 of 1.15 (m=300, theta=m)", std::abs(ev(0) - target.hi), 0.05, bulk);
  rec.check("9d", "lambda_min of B_theta within 0.05 of 0.85 (m=300, theta=m)", std::abs(ev(m - 1) - target.lo), 0.05);
  rec.check("support-bulk", "second-largest eigenvalue within 0.05 of 1.15 (outlier excluded)",
            std::abs(ev(1) - target.hi), 0.05);

  const SupportInterval s1 = limiting_support_tridiagonal(b, 1.0);
  rec.check("support-formula", "b=0.3, beta=1 gives [0.85, 1.15]",
            std::max(std::abs(s1.lo - 0.85), std::abs(s1.hi - 1.15)), 1e-15);
  const SupportInterval inf_t = limiting_support_tridiagonal(b, INFINITY);
  const SupportInterval inf_p = limiting_support_power(0.5, INFINITY);
  rec.check("support-formula", "beta -> inf recovers [1-2b, 1+2b] and [(1-a)/(1+a), (1+a)/(1-a)]",
            std::max({std::abs(inf_t.lo - 0.4), std::abs(inf_t.hi - 1.6), std::abs(inf_p.lo - 1.0 / 3.0),
                      std::abs(inf_p.hi - 3.0)}),
            1e-15);
  const SupportInterval zero_t = limiting_support_tridiagonal(b, 0.0);
  const SupportInterval zero_p = limiting_support_power(0.5, 0.0);
  rec.check("support-formula", "beta -> 0 collapses to {1}",
            std::max({std::abs(zero_t.lo - 1.0), std::abs(zero_t.hi - 1.0), std::abs(zero_p.lo - 1.0),
                      std::abs(zero_p.hi - 1.0)}),
            0.0);
  const SupportInterval big = limiting_support_power(0.5, 1e9);
  rec.check("support-formula", "power support at beta=1e9 approaches the raw support",
            std::max(std::abs(big.lo - 1.0 / 3.0), std::abs(big.hi - 3.0)), 1e-8);

  // Fixed theta: all but the rank-one outlier concentrate at 1.
  const RVector fixed = eig_hermitian(ewens_transform_tridiagonal(TridiagonalToeplitz(m, b), 2.0)).eigenvalues;
  Index outside = 0;
  for (Index i = 1; i < m; ++i) {
    if (std::abs(fixed(i) - 1.0) > 0.05) ++outside;
  }
  rec.check("support-fixed-theta", "fraction outside [0.95, 1.05] at theta=2, outlier excluded",
            static_cast<double>(outside) / static_cast<double>(m), 0.02);

  const RMatrix t = tridiag_t_matrix(m) / static_cast<double>(m);
  const double md = static_cast<double>(m);
  rec.check("support-tm", "(1/m) Tr((T_m/m)^2) <= 16/m", (t * t).trace() / md, 16.0 / md);
}

struct SuiteEntry {
  const char* name;
  void (*run)(Recorder&, const VerifyOptions&);
};

const SuiteEntry kSuites[] = {
    {"ewens-closedform", suite_ewens_closedform},
    {"hybrid-closedform", suite_hybrid_closedform},
    {"hybrid-inverse-diagonal", suite_hybrid_inverse_diagonal},
    {"covp-haar", suite_covp_haar},
    {"haar-moments", suite_haar_moments},
    {"schur", suite_schur},
    {"invcov-structure", suite_invcov_structure},
    {"block-pinv", suite_block_pinv},
    {"toeplitz-spectra", suite_toeplitz_spectra},
    {"toeplitz-decomp", suite_toeplitz_decomp},
    {"toeplitz-support", suite_toeplitz_support},
};

}  // namespace

bool SuiteReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<CheckResult> SuiteReport::group(const std::string& g) const {
  std::vector<CheckResult> out;
  for (const CheckResult& c : checks) {
    if (c.group == g) out.push_back(c);
  }
  return out;
}

const std::vector<std::string>& available_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const SuiteEntry& e : kSuites) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& options) {
  for (const SuiteEntry& e : kSuites) {
    if (name != e.name) continue;
    SuiteReport report;
    report.name = name;
    Recorder rec(report);
    const auto start = std::chrono::steady_clock::now();
    e.run(rec, options);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }
  std::string list;
  for (const std::string& s : available_suites()) list += (list.empty() ? "" : ", ") + s;
  throw std::invalid_argument("verify: unknown suite \"" + name + "\"; available: " + list);
}

std::string to_json(const SuiteReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = report.name;
  j["passed"] = report.passed();
  j["seconds"] = report.seconds;
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::ordered_json cj;
    cj["group"] = c.group;
    cj["label"] = c.label;
    // JSON has no infinity; an unbounded residual is reported as null.
    if (std::isfinite(c.residual)) {
      cj["residual"] = c.residual;
    } else {
      cj["residual"] = nullptr;
    }
    cj["tolerance"] = c.tolerance;
    cj["passed"] = c.passed;
    if (!c.note.empty()) cj["note"] = c.note;
    j["checks"].push_back(std::move(cj));
  }
  return j.dump(2);
}

}  // namespace singcov
