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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "fflab/characters.hpp"
#include "fflab/dirichlet.hpp"
#include "fflab/elliptic.hpp"
#include "fflab/errors.hpp"
#include "fflab/factor.hpp"
#include "fflab/lfunction.hpp"
#include "fflab/zeros.hpp"

using namespace fflab;

namespace {

using cd = std::complex<double>;

Poly P(const Field& F, std::initializer_list<int> c) {
  std::vector<FqElement> v;
  for (int x : c) v.push_back(F.from_int(x));
  return Poly(std::move(v));
}

Poly random_squarefree(const Field& F, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, monic_count(F, n) - 1);
  while (true) {
    Poly D = monic_from_index(F, n, d(rng));
    if (is_squarefree(F, D)) return D;
  }
}

double t_of_theta(double theta, std::uint32_t q) { return 2 * std::numbers::pi * theta / std::log(static_cast<double>(q)); }

}  // namespace

TEST(LambdaX, BranchValues) {
  EXPECT_EQ(lambda_X_weight(1, 4), 32);
  EXPECT_EQ(lambda_X_weight(4, 4), 32);
  EXPECT_EQ(lambda_X_weight(5, 4), 12);
  EXPECT_EQ(lambda_X_weight(8, 4), -6);
  EXPECT_EQ(lambda_X_weight(9, 4), 20);
  EXPECT_EQ(lambda_X_weight(12, 4), 2);
  EXPECT_EQ(lambda_X_weight(13, 4), 0);
  for (int X : {1, 2, 3, 7}) {
    EXPECT_EQ(lambda_X_weight(X, X), 2 * X * X);
    EXPECT_EQ(lambda_X_weight(2 * X, X), X * X - 5 * X - 2);
    EXPECT_EQ(lambda_X_weight(3 * X, X), 2);
    EXPECT_EQ(lambda_X_weight(3 * X + 1, X), 0);
  }
  EXPECT_THROW(lambda_X_weight(1, 0), ValidationError);

  Field F = Field::make(5);
  EXPECT_EQ(lambda_X(F, P(F, {0, 0, 1}), 2), 8);    // t^2
  EXPECT_EQ(lambda_X(F, P(F, {2, 0, 1}), 2), 16);   // t^2 + 2 is prime
  EXPECT_EQ(lambda_X(F, P(F, {2, 0, 1}), 1), -12);  // d = 2X
  EXPECT_EQ(lambda_X(F, P(F, {0, 1, 1}), 2), 0);    // t (t + 1)
  EXPECT_EQ(lambda_X(F, P(F, {0, 0, 0, 0, 0, 0, 0, 1}), 2), 0);
}

TEST(DirichletDX, DirectSumAtXEqualsOne) {
  Field F = Field::make(5);
  PrimeTable T(F, 3);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    Poly D = random_squarefree(F, 5, rng);
    auto c = quadratic_log_coefficients(T, D, 1);
    for (cd s : {cd(0.5, 0), cd(0.6, 1.3), cd(2, -0.4)}) {
      cd direct = 0;
      for (const Poly& f : MonicRange(F, 1)) direct += static_cast<double>(chi_definition(F, D, f)) * std::pow(5.0, -s);
      EXPECT_LT(std::abs(dirichlet_DX(c, s, 1) - direct), 1e-12);
    }
  }
}

TEST(DirichletDX, ConvergesToLogLAtSigmaTwo) {
  for (std::uint32_t q : {5u, 13u}) {
    Field F = Field::make(q);
    PrimeTable T(F, q == 5 ? 8 : 5);
    std::mt19937_64 rng(q);
    for (int n : {4, 5, 7}) {
      if (n > T.max_degree()) continue;
      for (int i = 0; i < 5; ++i) {
        Poly D = random_squarefree(F, n, rng);
        auto L = l_star(T, D);
        auto Z = eigenphases(L);
        auto c = quadratic_log_coefficients(T, D, T.max_degree());
        for (cd s : {cd(2, 0), cd(2, 0.7), cd(2, -2.1)}) {
          cd exact = log_L_full(L, Z, s);
          for (int X = 1; X <= T.max_degree(); ++X) {
            double tail = std::pow(q, -X) / (q - 1.0);
            EXPECT_LE(std::abs(dirichlet_DX(c, s, X) - exact), tail + 1e-12) << "q=" << q << " n=" << n << " X=" << X;
          }
        }
      }
    }
  }
}

TEST(DirichletDX, PrimeTableAndLPolynomialRoutesAgree) {
  Field F = Field::make(5);
  PrimeTable T(F, 8);
  std::mt19937_64 rng(3);
  for (int n = 3; n <= 9; ++n) {
    for (int i = 0; i < 6; ++i) {
      Poly D = random_squarefree(F, n, rng);
      auto a = quadratic_log_coefficients(T, D, 8);
      auto b = quadratic_log_coefficients(F, l_star(T, D), D, 8);
      EXPECT_EQ(a.C, b.C) << to_string(D);
      EXPECT_EQ(a.A, b.A) << to_string(D);
    }
  }
  // Beyond the table the L-polynomial route still gives log L.
  Poly D = random_squarefree(F, 7, rng);
  auto L = l_star(T, D);
  auto Z = eigenphases(L);
  auto c = quadratic_log_coefficients(F, L, D, 30);
  cd s(1.5, 0.3);
  EXPECT_LT(std::abs(dirichlet_DX(c, s, 30) - log_L_full(L, Z, s)), 1e-9);
  EXPECT_THROW(quadratic_log_coefficients(T, D, 9), BudgetError);
}

TEST(DirichletDX, PrimeOnlyPartAtXTwo) {
  // D_2 - P_2 is the prime-square term sum_{d(P)=1} chi_D(P)^2 |P|^{-2s} / 2.
  Field F = Field::make(5);
  PrimeTable T(F, 2);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    Poly D = random_squarefree(F, 6, rng);
    auto c = quadratic_log_coefficients(T, D, 2);
    cd s(0.55, 0.9);
    cd sq = 0;
    for (const Poly& f : MonicRange(F, 1)) {
      int x = chi_definition(F, D, f);
      sq += static_cast<double>(x * x) * std::pow(5.0, -2.0 * s) / 2.0;
    }
    EXPECT_LT(std::abs(dirichlet_DX(c, s, 2) - prime_PX(c, s, 2) - sq), 1e-12);
    cd combo = dirichlet_DX_combo(c, cd(0.55, 0), {1.0}, {0.9}, 2);
    EXPECT_EQ(combo, dirichlet_DX(c, s, 2));
  }
}

TEST(DirichletDX, SquareTermMeanOverTheEnsemble) {
  // Over all of H_n the mean of the prime-square coefficient B_1 is q times
  // the share of D coprime to a fixed linear prime. That share is read off
  // the series (1 - q u^2) / ((1 - q u)(1 + u)).
  Field F = Field::make(5);
  PrimeTable T(F, 2);
  for (int n : {2, 3, 4, 5}) {
    std::vector<double> geo(static_cast<std::size_t>(n) + 1), cop(geo.size());
    for (int k = 0; k <= n; ++k) geo[static_cast<std::size_t>(k)] = std::pow(5.0, k) - (k >= 2 ? std::pow(5.0, k - 1) : 0.0);
    for (int k = 0; k <= n; ++k) cop[static_cast<std::size_t>(k)] = geo[static_cast<std::size_t>(k)] - (k ? cop[static_cast<std::size_t>(k - 1)] : 0.0);
    double share = cop[static_cast<std::size_t>(n)] / geo[static_cast<std::size_t>(n)];

    double sum_b1 = 0, sum_p = 0, count = 0;
    for (const Poly& D : MonicRange(F, n)) {
      if (!is_squarefree(F, D)) continue;
      auto c = quadratic_log_coefficients(T, D, 2);
      sum_b1 += c.C[2] - c.A[2];
      sum_p += prime_PX(c, 0.5, 1).real();
      count += 1;
    }
    EXPECT_EQ(count, geo[static_cast<std::size_t>(n)]);
    EXPECT_NEAR(sum_b1 / count, 5.0 * share, 1e-9) << n;
    // Linear primes are non-squares: no main term in the prime part.
    EXPECT_LT(std::abs(sum_p / count), 5.0 / std::sqrt(5.0) * std::pow(5.0, -n / 2.0) * n + 1e-12) << n;
  }
}

TEST(DirichletDX, TwistCoefficientsConvergeToLogL) {
  Field F = Field::make(5);
  EllipticCurveFF E(F, CurveConfig{toy_curve(F)});
  PrimeTable T(F, 6);
  TwistTable TT(E, T);
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 20 && checked < 30; ++i) {
      Poly D = random_squarefree(F, n, rng);
      if (!in_family(E, D)) continue;
      LPolynomial L;
      try {
        L = twist_l(TT, D);
      } catch (const BudgetError&) {
        continue;
      }
      auto Z = eigenphases(L);
      auto c = twist_log_coefficients(TT, D, 6);
      for (cd s : {cd(2, 0), cd(2, 1.1)}) {
        cd exact = log_L_full(L, Z, s);
        for (int X = 1; X <= 6; ++X) {
          double tail = 2 * std::pow(5.0, -1.5 * X) / (std::pow(5.0, 1.5) - 1);
          EXPECT_LE(std::abs(dirichlet_DX(c, s, X) - exact), tail + 1e-12);
        }
      }
      ++checked;
    }
  }
  EXPECT_GE(checked, 20);
  EXPECT_THROW(twist_log_coefficients(TT, Poly::one(), 7), BudgetError);
}

TEST(DirichletDX, PrimePartTracksTheMean) {
  // Re D_X - Re P_X at sigma_0 against M(a, t, X), for plans of each kind.
  Field F = Field::make(5);
  PrimeTable T(F, 6);
  std::mt19937_64 rng(21);
  ApproxParams ap{.X = 12, .c = 0.25, .y = 1};
  ap.validate(5);
  struct Plan {
    std::vector<double> a, t;
  };
  std::vector<Plan> plans = {{{1}, {0}},
                             {{1}, {t_of_theta(0.1, 5)}},
                             {{1, -1}, {t_of_theta(0.1, 5), t_of_theta(0.3, 5)}},
                             {{0.5, 1, 2}, {0, t_of_theta(0.05, 5), t_of_theta(0.4, 5)}}};
  for (int n : {9, 12}) {
    double bound = 2 * std::log(std::log(static_cast<double>(n)));
    for (int X : {6, 12, 24}) {
      ap.X = X;
      for (int i = 0; i < 8; ++i) {
        Poly D = random_squarefree(F, n, rng);
        auto c = quadratic_log_coefficients(F, l_star(T, D), D, X);
        for (const Plan& p : plans) {
          double re = 0;
          for (std::size_t j = 0; j < p.a.size(); ++j) {
            cd s(ap.sigma0(), p.t[j]);
            re += p.a[j] * (dirichlet_DX(c, s, X) - prime_PX(c, s, X)).real();
          }
          double M = moment_targets(p.a, p.t, X).mean;
          EXPECT_LE(std::abs(re - M), bound) << "n=" << n << " X=" << X;
        }
      }
    }
  }
}

TEST(MomentTargets, ClosedForms) {
  double n = 1000;
  auto m = moment_targets({1}, {0}, n);
  EXPECT_DOUBLE_EQ(m.mean, 0.5 * std::log(n));
  EXPECT_DOUBLE_EQ(m.var_re, std::log(n));
  EXPECT_NEAR(m.var_im, 0, 1e-15);
  EXPECT_TRUE(m.degenerate_im);

  // Equal shifts with opposite weights cancel completely.
  for (double t : {0.0, 0.01, 0.3, 2.0}) {
    auto z = moment_targets({1, -1}, {t, t}, n);
    EXPECT_NEAR(z.mean, 0, 1e-12);
    EXPECT_NEAR(z.var_re, 0, 1e-12);
    EXPECT_NEAR(z.var_im, 0, 1e-12);
  }
  // The |t1 - t2| clamp sits at log n when the shifts agree.
  auto e = moment_targets({1, 1}, {0.2, 0.2}, n);
  EXPECT_NEAR(e.var_re, std::log(n) + std::log(1 / 0.4) + std::log(n) + std::log(1 / 0.4), 1e-12);

  // Mesoscopic pairs: V_Im - (1 - delta) log n is independent of n.
  for (double delta : {0.2, 0.5, 0.8}) {
    std::vector<double> diffs;
    for (double kappa : {1e3, 1e5, 1e8, 1e12}) {
      std::vector<double> t = {t_of_theta(0.2 / std::pow(kappa, delta), 5), t_of_theta(0.6 / std::pow(kappa, delta), 5)};
      diffs.push_back(moment_targets({1, -1}, t, kappa).var_im - (1 - delta) * std::log(kappa));
    }
    auto [lo, hi] = std::minmax_element(diffs.begin(), diffs.end());
    EXPECT_LT(*hi - *lo, 1e-9) << delta;
  }
}

TEST(MomentTargets, Symmetries) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int it = 0; it < 200; ++it) {
    int k = 1 + it % 4;
    std::vector<double> a(k), t(k);
    for (int j = 0; j < k; ++j) {
      a[j] = U(rng);
      t[j] = it % 3 ? U(rng) : 0.001 * U(rng);
    }
    double n = 50 + it;
    auto base = moment_targets(a, t, n);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pa(k), pt(k), nt(k);
    for (int j = 0; j < k; ++j) {
      pa[j] = a[perm[j]];
      pt[j] = t[perm[j]];
      nt[j] = -t[j];
    }
    auto p = moment_targets(pa, pt, n);
    EXPECT_NEAR(p.mean, base.mean, 1e-10);
    EXPECT_NEAR(p.var_re, base.var_re, 1e-10);
    EXPECT_NEAR(p.var_im, base.var_im, 1e-10);
    auto r = moment_targets(a, nt, n);
    EXPECT_NEAR(r.mean, base.mean, 1e-10);
    EXPECT_NEAR(r.var_re, base.var_re, 1e-10);
  }
  EXPECT_EQ(family_mean_sign(Family::kQuadratic), 1);
  EXPECT_EQ(family_mean_sign(Family::kEllipticTwist), -1);
}

TEST(CosineSum, EulerConstantAndUniformBound) {
  auto z = cosine_sum_check(100000, 0);
  EXPECT_NEAR(z.discrepancy, std::numbers::egamma, 1e-5);
  EXPECT_EQ(z.sine_sum, 0);
  auto one = cosine_sum_check(1000, 1);
  EXPECT_DOUBLE_EQ(one.clamp, std::log(0.5));
  double worst = 0, worst_sine = 0;
  for (int X : {2, 3, 10, 100, 1000, 10000, 100000}) {
    for (int i = -300; i <= 300; ++i) {
      auto r = cosine_sum_check(X, 1.5 * i / 300.0);
      worst = std::max(worst, std::abs(r.discrepancy));
      worst_sine = std::max(worst_sine, std::abs(r.sine_sum));
    }
  }
  EXPECT_LE(worst, 3);
  EXPECT_LE(worst_sine, 3);
  EXPECT_THROW(cosine_sum_check(1, 0.1), ValidationError);
}

TEST(ShiftPlan, RegimesAndValidation) {
  std::uint32_t q = 5;
  int kappa = 12;
  EXPECT_EQ(classify_shift(0, q, kappa), Regime::kMicroscopic);
  EXPECT_EQ(classify_shift(t_of_theta(1.0 / 12, q), q, kappa), Regime::kMicroscopic);
  EXPECT_EQ(classify_shift(t_of_theta(0.1, q), q, kappa), Regime::kMesoscopic);
  EXPECT_EQ(classify_shift(t_of_theta(0.45, q), q, kappa), Regime::kMacroscopic);
  // Periodic in t with period 2 pi / log q.
  EXPECT_EQ(classify_shift(t_of_theta(1.0, q), q, kappa), Regime::kMicroscopic);
  EXPECT_EQ(classify_shift(-t_of_theta(0.1, q), q, kappa), Regime::kMesoscopic);
  EXPECT_NEAR(folded_phase(t_of_theta(0.7, q), q), 0.3, 1e-12);
  // Larger kappa shrinks the microscopic window.
  EXPECT_EQ(classify_shift(t_of_theta(0.05, q), q, 12), Regime::kMicroscopic);
  EXPECT_EQ(classify_shift(t_of_theta(0.05, q), q, 256), Regime::kMesoscopic);

  auto p = ShiftPlan::make({1, -1}, {0.1, 0.4}, q, kappa, 13);
  EXPECT_EQ(p.regimes.size(), 2u);
  EXPECT_THROW(ShiftPlan::make({1}, {0.1, 0.2}, q, kappa, 13), ValidationError);
  EXPECT_THROW(ShiftPlan::make({}, {}, q, kappa, 13), ValidationError);
  EXPECT_THROW(ShiftPlan::make({1}, {7}, q, kappa, 13), ValidationError);
  EXPECT_EQ(regime_name(Regime::kMesoscopic), "mesoscopic");

  ApproxParams ok{.X = 4, .c = 0.3, .y = 2};
  EXPECT_NO_THROW(ok.validate(5));
  EXPECT_DOUBLE_EQ(ok.sigma0(), 0.5 + 0.3 / 4);
  ApproxParams big_c{.X = 4, .c = 0.32, .y = 2};
  EXPECT_THROW(big_c.validate(5), ValidationError);
  ApproxParams small_x{.X = 1, .c = 0.1, .y = 2};
  EXPECT_THROW(small_x.validate(5), ValidationError);
}
