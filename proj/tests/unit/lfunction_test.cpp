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
#include <numbers>
#include <random>

#include "fflab/characters.hpp"
#include "fflab/errors.hpp"
#include "fflab/factor.hpp"
#include "fflab/lfunction.hpp"
#include "fflab/zeros.hpp"

using namespace fflab;

namespace {

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

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(LStar, SmallExamples) {
  Field F = Field::make(5);
  auto L1 = l_star_enumeration(F, Poly::t());
  EXPECT_EQ(L1.coeffs, std::vector<std::int64_t>{1});
  EXPECT_EQ(L1.genus, 0);
  auto L2 = l_star_enumeration(F, P(F, {0, 1, 1}), true);
  EXPECT_EQ(L2.eta, 1);
  EXPECT_EQ(L2.coeffs, std::vector<std::int64_t>{1});
  Poly D = P(F, {1, 1, 0, 1});
  auto L3 = l_star_enumeration(F, D, true);
  std::int64_t b1 = 0;
  for (const Poly& f : MonicRange(F, 1)) b1 += chi_definition(F, D, f);
  ASSERT_EQ(L3.degree(), 2);
  EXPECT_EQ(L3.coeffs[1], b1);
  EXPECT_EQ(L3.coeffs[2], 5);
  EXPECT_THROW(l_star_enumeration(F, P(F, {0, 0, 1})), ValidationError);
}

TEST(LStar, EulerProductMatchesEnumeration) {
  for (auto [p, e, nmax] : {std::tuple{5u, 1u, 8}, {3u, 2u, 6}, {13u, 1u, 5}, {7u, 1u, 6}}) {
    Field F = Field::make(p, e);
    PrimeTable full(F, nmax);
    PrimeTable half(F, (nmax - 1) / 2);
    std::mt19937_64 rng(p * e);
    for (int n = 1; n <= nmax; ++n) {
      for (int i = 0; i < 6; ++i) {
        Poly D = random_squarefree(F, n, rng);
        auto a = l_star_enumeration(F, D, n <= 6);
        auto b = l_star(full, D);
        auto c = l_star(half, D);
        ASSERT_EQ(a.coeffs, b.coeffs) << "q=" << F.q() << " D=" << to_string(D);
        ASSERT_EQ(a.coeffs, c.coeffs);
        EXPECT_EQ(a.eta, n % 2 == 0 ? 1 : 0);
        EXPECT_EQ(a.degree(), n - 1 - a.eta);
      }
    }
  }
}

TEST(LStar, BudgetTooSmall) {
  Field F = Field::make(5);
  PrimeTable T(F, 2);
  std::mt19937_64 rng(1);
  EXPECT_THROW(l_star(T, random_squarefree(F, 9, rng)), BudgetError);
}

TEST(LStar, WeilBoundAndSymmetry) {
  Field F = Field::make(5);
  PrimeTable T(F, 6);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    int n = 3 + i % 11;
    auto L = l_star(T, random_squarefree(F, n, rng));
    EXPECT_TRUE(quadratic_symmetry_holds(L));
    EXPECT_EQ(functional_equation_residual(L), 0.0);
    for (int k = 0; k <= L.degree(); ++k) {
      EXPECT_LE(std::abs(double(L.coeffs[static_cast<std::size_t>(k)])),
                binom(L.degree(), k) * std::pow(5.0, k / 2.0) + 1e-9);
    }
  }
}

TEST(PowerSums, ExplicitFormulaMatchesPrimeSums) {
  Field F = Field::make(5);
  PrimeTable T(F, 8);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    int n = 3 + i % 8;
    Poly D = random_squarefree(F, n, rng);
    auto L = l_star(T, D);
    auto C = log_coefficients(quadratic_prime_sums(T, D, 8));
    auto p = inverse_root_power_sums(L.coeffs, 8);
    for (int k = 1; k <= 8; ++k) EXPECT_EQ(C[static_cast<std::size_t>(k)], -L.eta - p[static_cast<std::size_t>(k)]);
  }
}

TEST(RootMultiplicities, DetectsRepeatedFactors) {
  // (1 + u)^2 (1 + 2u) and (1 - 3u)^2 (1 + u^2)
  EXPECT_EQ(root_multiplicities({1, 4, 5, 2}), (std::vector<int>{2, 1}));
  EXPECT_EQ(root_multiplicities({1, -6, 10, -6, 9}), (std::vector<int>{2, 1, 1}));
  EXPECT_EQ(root_multiplicities({1, 3, 5}), (std::vector<int>{1, 1}));
}

TEST(Eigenphases, TrivialAndGenusOne) {
  Field F = Field::make(5);
  LPolynomial one;
  one.q = 5;
  one.coeffs = {1};
  EXPECT_TRUE(eigenphases(one).theta.empty());
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    auto L = l_star_enumeration(F, random_squarefree(F, 3, rng));
    auto Z = eigenphases(L);
    ASSERT_EQ(Z.kappa(), 2);
    EXPECT_NEAR(Z.theta[0], -Z.theta[1], 1e-12);
    EXPECT_LE(Z.max_residual(), 1e-12);
  }
}

TEST(Eigenphases, CompanionAgreesWithSignChange) {
  Field F = Field::make(5);
  PrimeTable T(F, 7);
  std::mt19937_64 rng(17);
  for (int n : {7, 7, 7, 9, 11, 13}) {
    for (int i = 0; i < 25; ++i) {
      auto L = l_star(T, random_squarefree(F, n, rng));
      auto a = eigenphases(L);
      auto b = eigenphases_sign_change(L);
      ASSERT_EQ(a.kappa(), L.degree());
      ASSERT_EQ(b.kappa(), a.kappa()) << "n=" << n;
      EXPECT_LE(phase_set_distance(a, b), 1e-7);
      EXPECT_LE(a.max_residual(), kRhTolerance);
    }
  }
}

TEST(Eigenphases, DoubleCentralZero) {
  // (1 - 3u)^2 over q = 9: a double zero at u = q^{-1/2}.
  LPolynomial L;
  L.q = 9;
  L.coeffs = {1, -6, 9};
  auto Z = eigenphases(L);
  ASSERT_EQ(Z.kappa(), 2);
  EXPECT_NEAR(Z.theta[0], 0.0, 1e-12);
  EXPECT_NEAR(Z.theta[1], 0.0, 1e-12);
  EXPECT_LE(Z.max_residual(), 1e-12);
  EXPECT_EQ(eigenphases_sign_change(L).kappa(), 2);
  // (1 + 2u + 5u^2)^2 over q = 5: a repeated conjugate pair.
  LPolynomial M;
  M.q = 5;
  M.coeffs = {1, 4, 14, 20, 25};
  auto W = eigenphases(M);
  ASSERT_EQ(W.kappa(), 4);
  EXPECT_LE(W.max_residual(), 1e-12);
  EXPECT_LE(phase_set_distance(W, eigenphases_sign_change(M)), 1e-7);
}

TEST(Eigenphases, CentralZerosInSmallEnsembles) {
  Field F = Field::make(5);
  PrimeTable T(F, 7);
  int found = 0;
  for (int n = 5; n <= 6; ++n) {
    for (const Poly& D : MonicRange(F, n)) {
      if (!is_squarefree(F, D)) continue;
      auto L = l_star(T, D);
      auto w = L.unitarized();
      double v = 0;
      for (double x : w) v += x;
      if (std::abs(v) > 1e-9) continue;
      ++found;
      auto Z = eigenphases(L);
      EXPECT_LE(Z.max_residual(), kRhTolerance);
      EXPECT_TRUE(log_abs_L(Z, 5, 0.5).vanished);
    }
  }
  EXPECT_GT(found, 0);
}

TEST(ArgAndCount, Conventions) {
  Field F = Field::make(5);
  PrimeTable T(F, 6);
  LPolynomial one;
  one.q = 5;
  one.coeffs = {1};
  EXPECT_EQ(arg_on_circle(eigenphases(one), 0.3), 0.0);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0, 1);
  int positive_checked = 0;
  for (int i = 0; i < 1000; ++i) {
    auto L = l_star(T, random_squarefree(F, 11, rng));
    auto Z = eigenphases(L);
    if (L.eval(1 / std::sqrt(5.0)).real() > 1e-6) {
      EXPECT_NEAR(arg_on_circle(Z, 0.0), 0.0, 1e-12);
      ++positive_checked;
    }
    EXPECT_NEAR(zero_count(Z, 1.0), L.degree(), 1e-12);
    for (int j = 0; j < 32; ++j) {
      double th = U(rng);
      ASSERT_NEAR(zero_count(Z, th), L.degree() * th + S_theta(Z, th), 1e-6);
      // Imaginary part of the principal logarithm is the same branch.
      std::complex<double> z = std::polar(1.0, -2 * std::numbers::pi * th);
      ASSERT_NEAR(log_L(Z, z).imag(), arg_on_circle(Z, th), 1e-9);
    }
  }
  EXPECT_GT(positive_checked, 500);
}

TEST(LogAbs, RootProductMatchesCoefficients) {
  Field F = Field::make(5);
  PrimeTable T(F, 6);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 100; ++i) {
    auto L = l_star(T, random_squarefree(F, 5 + i % 9, rng));
    auto Z = eigenphases(L);
    for (double sigma : {0.5, 0.6, 1.0}) {
      std::complex<double> s(sigma, U(rng));
      auto a = log_abs_L(Z, 5, s);
      auto b = log_abs_L(L, s);
      if (a.vanished || b.vanished) continue;
      EXPECT_NEAR(a.value.real(), b.value.real(), 1e-8);
      EXPECT_NEAR(std::remainder(a.value.imag() - b.value.imag(), 2 * std::numbers::pi), 0.0, 1e-8);
    }
  }
}

TEST(LogAbs, EulerProductAtSigmaTwo) {
  Field F = Field::make(5);
  PrimeTable T(F, 8);
  std::mt19937_64 rng(37);
  std::complex<double> s(2.0, 0.7);
  for (int i = 0; i < 20; ++i) {
    Poly D = random_squarefree(F, 4 + i % 8, rng);
    auto L = l_star(T, D);
    auto Z = eigenphases(L);
    std::complex<double> u = std::exp(-s * std::log(5.0));
    std::complex<double> lhs = log_abs_L(Z, 5, s).value + double(L.eta) * std::log(1.0 - u);
    std::complex<double> rhs = 0;
    for (int d = 1; d <= 8; ++d) {
      std::vector<int> chi(T.primes(d).size());
      T.symbols(D, d, chi);
      for (int c : chi) rhs -= std::log(1.0 - double(c) * std::pow(u, d));
    }
    // Omitted primes of degree > 8 contribute less than 1e-7 here.
    EXPECT_NEAR(lhs.real(), rhs.real(), 1e-6);
    EXPECT_NEAR(lhs.imag(), rhs.imag(), 1e-6);
  }
}
