/*
   Copyright 2026 The fflab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fflab/errors.hpp"
#include "fflab/rmt.hpp"
#include "fflab/stats.hpp"

using namespace fflab;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

RmtSample wrap(MatrixEnsemble e, const Eigen::MatrixXcd& A) {
  RmtSample s;
  s.ensemble = e;
  s.N = e == MatrixEnsemble::kU ? static_cast<int>(A.rows()) : static_cast<int>(A.rows() / 2);
  s.angles = e == MatrixEnsemble::kU ? unitary_angles(A) : paired_angles(A);
  return s;
}

}  // namespace

TEST(Rmt, ResidualsAndGroupMembership) {
  auto g = shard_rng(3, 0);
  for (int N : {1, 5, 64}) {
    for (int k = 0; k < 4; ++k) {
      Eigen::MatrixXcd A = haar_usp(N, g);
      EXPECT_LE(unitarity_residual(A, true), kUnitarityTolerance);
      Eigen::MatrixXd O = haar_so(N, g);
      EXPECT_LE(unitarity_residual(O.cast<cd>(), false), kUnitarityTolerance);
      EXPECT_NEAR(O.determinant(), 1.0, 1e-9);
      EXPECT_LE(unitarity_residual(haar_u(N, g), false), kUnitarityTolerance);
    }
  }
  // A unitary matrix that is not symplectic is caught.
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Identity(2, 2);
  D(0, 0) = cd(0, 1);
  EXPECT_LE(unitarity_residual(D, false), 1e-15);
  EXPECT_GT(unitarity_residual(D, true), 0.5);
}

TEST(Rmt, SpectraComeInConjugatePairs) {
  auto g = shard_rng(4, 0);
  for (int N : {2, 7, 30}) {
    Eigen::MatrixXcd A = haar_usp(N, g);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    ASSERT_EQ(es.info(), Eigen::Success);
    const auto& ev = es.eigenvalues();
    std::vector<double> upper;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      EXPECT_NEAR(std::abs(ev(i)), 1.0, 1e-10);
      double best = 1e9;
      for (Eigen::Index j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev(j) - std::conj(ev(i))));
      EXPECT_LE(best, 1e-9);
      if (ev(i).imag() >= 0) upper.push_back(std::arg(ev(i)));
    }
    std::sort(upper.begin(), upper.end());
    auto s = wrap(MatrixEnsemble::kUSp, A);
    ASSERT_EQ(static_cast<int>(s.angles.size()), N);
    ASSERT_EQ(static_cast<int>(upper.size()), N);
    for (int j = 0; j < N; ++j) EXPECT_NEAR(s.angles[static_cast<std::size_t>(j)], upper[static_cast<std::size_t>(j)], 1e-7);
    EXPECT_TRUE(std::is_sorted(s.angles.begin(), s.angles.end()));
  }
}

TEST(Rmt, Usp2AngleFollowsTheWeylDensity) {
  auto g = shard_rng(5, 0);
  std::vector<double> haar, weyl;
  for (int i = 0; i < 20000; ++i) {
    haar.push_back(sample_haar(MatrixEnsemble::kUSp, 1, g).angles[0]);
    weyl.push_back(weyl_usp_angles(1, g)[0]);
  }
  double crit = ks_critical(haar.size(), 0.001);
  EXPECT_LE(ks_distance(haar, usp2_angle_cdf), crit);
  EXPECT_LE(ks_distance(weyl, usp2_angle_cdf), crit);
  // The marginal is not uniform.
  EXPECT_GT(ks_distance(haar, [](double p) { return std::clamp(p / kPi, 0.0, 1.0); }), 5 * crit);
  EXPECT_NEAR(usp2_angle_cdf(kPi / 2), 0.5, 1e-15);
}

TEST(Rmt, HaarAgreesWithWeylRejection) {
  auto g = shard_rng(6, 0);
  for (int N : {2, 3}) {
    const int M = 8000;
    std::vector<std::vector<double>> haar(static_cast<std::size_t>(N)), weyl(static_cast<std::size_t>(N));
    for (int i = 0; i < M; ++i) {
      auto a = sample_haar(MatrixEnsemble::kUSp, N, g).angles;
      auto b = weyl_usp_angles(N, g);
      for (int j = 0; j < N; ++j) {
        haar[static_cast<std::size_t>(j)].push_back(a[static_cast<std::size_t>(j)]);
        weyl[static_cast<std::size_t>(j)].push_back(b[static_cast<std::size_t>(j)]);
      }
    }
    for (int j = 0; j < N; ++j)
      EXPECT_LE(ks_two_sample(haar[static_cast<std::size_t>(j)], weyl[static_cast<std::size_t>(j)]), ks_critical(M, M, 0.001))
          << "N=" << N << " order statistic " << j;
  }
}

TEST(Rmt, TraceMoments) {
  RmtConfig cfg;
  cfg.N = 20;
  cfg.samples = 100000;
  cfg.seed = 11;
  cfg.shard_size = 1000;
  auto r = rmt_sweep(cfg);
  std::vector<double> t1, t2;
  for (const auto& rec : r.records) {
    t1.push_back(rec.trace1.real());
    t2.push_back(rec.trace2.real());
    EXPECT_EQ(rec.trace2.imag(), 0.0);
  }
  auto e2 = mean_estimate(t2), e1 = mean_estimate(t1);
  EXPECT_LE(std::abs(e2.value + 1), 3 * e2.se) << e2.value << " +- " << e2.se;
  EXPECT_LE(std::abs(e1.value), 3 * e1.se);
  EXPECT_LE(r.max_residual, kUnitarityTolerance);

  cfg.ensemble = MatrixEnsemble::kSO;
  cfg.N = 10;
  cfg.samples = 20000;
  r = rmt_sweep(cfg);
  t2.clear();
  for (const auto& rec : r.records) t2.push_back(rec.trace2.real());
  e2 = mean_estimate(t2);
  EXPECT_LE(std::abs(e2.value - 1), 3 * e2.se);

  cfg.ensemble = MatrixEnsemble::kU;
  r = rmt_sweep(cfg);
  std::vector<double> re, im, sq;
  for (const auto& rec : r.records) {
    re.push_back(rec.trace1.real());
    im.push_back(rec.trace1.imag());
    sq.push_back(std::norm(rec.trace1));
  }
  for (const auto& v : {re, im}) {
    auto e = mean_estimate(v);
    EXPECT_LE(std::abs(e.value), 3 * e.se);
  }
  auto es = mean_estimate(sq);
  EXPECT_LE(std::abs(es.value - 1), 3 * es.se);
}

TEST(Rmt, CharacteristicPolynomialBranchAndDeterminant) {
  auto g = shard_rng(7, 0);
  for (int k = 0; k < 8; ++k) {
    Eigen::MatrixXcd A = haar_usp(8, g);
    auto s = wrap(MatrixEnsemble::kUSp, A);
    // Conjugate symmetry makes Z real at 0 and pi, and Z(0) >= 0.
    for (double th : {0.0, kPi}) EXPECT_NEAR(log_char_poly(s, th).imag(), 0.0, 1e-12);
    for (double th : {0.0, 0.37, 1.9, -2.5, kPi}) {
      cd det = (Eigen::MatrixXcd::Identity(16, 16) - A * std::polar(1.0, -th)).determinant();
      cd lz = log_char_poly(s, th);
      EXPECT_NEAR(lz.real(), std::log(std::abs(det)), 1e-8);
      EXPECT_LE(std::abs(std::exp(lz) - det), 1e-8 * std::max(1.0, std::abs(det)));
    }
    EXPECT_GT(std::exp(log_char_poly(s, 0).real()), 0.0);
  }
  auto o = wrap(MatrixEnsemble::kSO, haar_so(4, g).cast<cd>());
  EXPECT_NEAR(log_char_poly(o, kPi).imag(), 0.0, 1e-12);
  // A hit takes the midpoint of the two one-sided arguments.
  RmtSample hit;
  hit.ensemble = MatrixEnsemble::kUSp;
  hit.N = 1;
  hit.angles = {0.5};
  cd h = log_char_poly(hit, 0.5);
  EXPECT_TRUE(std::isinf(h.real()) && h.real() < 0);
  EXPECT_DOUBLE_EQ(h.imag(), std::arg(1.0 - std::polar(1.0, -1.0)));
}

TEST(Rmt, ExactFiniteNMean) {
  RmtConfig cfg;
  cfg.N = 4;
  cfg.samples = 40000;
  cfg.seed = 12;
  cfg.theta = {0.3, 1.0, 2.2};
  auto r = rmt_sweep(cfg);
  for (const auto& row : rmt_means(r, cfg)) {
    EXPECT_LE(std::abs(row.re.value - row.exact_re), 4 * row.re.se) << row.theta;
    EXPECT_LE(std::abs(row.im.value - row.exact_im), 4 * row.im.se) << row.theta;
  }
  EXPECT_NEAR(usp_mean_log_char_poly(1, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(usp_mean_log_char_poly(3, kPi / 2).real(), -0.5 + 0.25 - 1.0 / 6, 1e-15);
}

TEST(Rmt, EigenphaseCountsMatchTheCountingIdentity) {
  auto g = shard_rng(8, 0);
  for (auto e : {MatrixEnsemble::kUSp, MatrixEnsemble::kSO, MatrixEnsemble::kU}) {
    auto s = sample_haar(e, 6, g);
    auto Z = as_eigenphases(s);
    int kappa = e == MatrixEnsemble::kU ? 6 : 12;
    ASSERT_EQ(static_cast<int>(Z.theta.size()), kappa);
    EXPECT_DOUBLE_EQ(zero_count(Z, 1.0), kappa);
    EXPECT_DOUBLE_EQ(zero_count(Z, 0.0), 0.0);
    if (e != MatrixEnsemble::kU) EXPECT_DOUBLE_EQ(zero_count(Z, 0.5), 6.0);
  }
}

TEST(Rmt, DeterministicForAnyThreadCount) {
  RmtConfig cfg;
  cfg.N = 6;
  cfg.samples = 300;
  cfg.seed = 99;
  cfg.shard_size = 32;
  cfg.theta = {0.2, 0.9};
  cfg.count_theta = {0.1, 0.3};
  cfg.threads = 1;
  auto a = rmt_sweep(cfg);
  cfg.threads = 3;
  auto b = rmt_sweep(cfg);
  ASSERT_EQ(a.records.size(), 300u);
  ASSERT_EQ(b.records.size(), 300u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].log_z, b.records[i].log_z);
    EXPECT_EQ(a.records[i].s_theta, b.records[i].s_theta);
    EXPECT_EQ(a.records[i].trace2, b.records[i].trace2);
  }
  cfg.seed = 100;
  auto c = rmt_sweep(cfg);
  EXPECT_NE(a.records[0].log_z, c.records[0].log_z);
}

TEST(Rmt, Validation) {
  EXPECT_EQ(parse_ensemble("usp"), MatrixEnsemble::kUSp);
  EXPECT_EQ(parse_ensemble("so-even"), MatrixEnsemble::kSO);
  EXPECT_EQ(parse_ensemble("u"), MatrixEnsemble::kU);
  EXPECT_THROW(parse_ensemble("goe"), ValidationError);
  RmtConfig cfg;
  cfg.samples = 10;
  cfg.N = 0;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg.N = kMaxRmtN + 1;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg.N = 4;
  cfg.samples = 1;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg.samples = 10;
  cfg.count_theta = {1.5};
  EXPECT_THROW(validate(cfg), ValidationError);
  auto g = shard_rng(1, 0);
  EXPECT_THROW(weyl_usp_angles(5, g), ValidationError);
}
