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
#include <random>
#include <map>
#include <set>

#include "fflab/characters.hpp"
#include "fflab/errors.hpp"
#include "fflab/factor.hpp"
#include "fflab/prime_table.hpp"

using namespace fflab;

namespace {

Poly P(const Field& F, std::initializer_list<int> c) {
  std::vector<FqElement> v;
  for (int x : c) v.push_back(F.from_int(x));
  return Poly(std::move(v));
}

Poly random_poly(const Field& F, int n, std::mt19937_64& rng, bool monic) {
  std::uniform_int_distribution<std::uint32_t> d(0, F.q() - 1);
  std::vector<FqElement> c(static_cast<std::size_t>(n) + 1);
  for (auto& x : c) x = FqElement(d(rng));
  c.back() = monic ? F.one() : FqElement(1 + d(rng) % (F.q() - 1));
  return Poly(std::move(c));
}

Poly random_squarefree(const Field& F, int n, std::mt19937_64& rng) {
  while (true) {
    Poly D = random_poly(F, n, rng, true);
    if (is_squarefree(F, D)) return D;
  }
}

// (f/D) as a product over the primes dividing D.
int chi_via_modulus(const Field& F, const Poly& D, const Poly& f) {
  int r = 1;
  for (const auto& [Q, k] : factor(F, D).factors) r *= symbol_definition(F, Q, f);
  return r;
}

}  // namespace

TEST(Symbol, Examples) {
  Field F = Field::make(5);
  EXPECT_EQ(symbol_definition(F, P(F, {1, 1}), Poly::t()), 1);
  EXPECT_EQ(symbol_definition(F, Poly::t(), Poly::t()), 0);
  EXPECT_EQ(symbol_definition(F, Poly::t(), P(F, {2})), -1);
  EXPECT_THROW(symbol_definition(F, P(F, {0, 0, 1}), Poly::t()), ValidationError);
}

TEST(Symbol, EulerCriterionByBruteForce) {
  Field F = Field::make(3);
  for (int d = 1; d <= 3; ++d) {
    for (const Poly& Q : MonicRange(F, d)) {
      if (!is_irreducible(F, Q)) continue;
      std::set<Poly> squares;
      for (std::uint64_t i = 0; i < monic_count(F, d); ++i) {
        for (std::uint32_t c = 0; c < F.q(); ++c) {
          // all residues: c * t^d + monic part, reduced
          Poly r = rem(F, add(F, monic_from_index(F, d, i), Poly::monomial(F.sub(FqElement(c), F.one()), d)), Q);
          squares.insert(rem(F, mul(F, r, r), Q));
        }
      }
      for (std::uint64_t i = 0; i < monic_count(F, d); ++i) {
        Poly r = rem(F, monic_from_index(F, d, i), Q);
        int expect = r.is_zero() ? 0 : (squares.count(r) ? 1 : -1);
        EXPECT_EQ(symbol_definition(F, Q, r), expect);
      }
    }
  }
}

TEST(Chi, TrivialCases) {
  Field F = Field::make(5);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    Poly D = random_squarefree(F, 1 + i % 6, rng);
    QuadChar chi(F, D);
    EXPECT_EQ(chi(Poly::one()), 1);
    Poly f = random_poly(F, 1 + i % 3, rng, true);
    int expect = gcd(F, D, f).is_one() ? 1 : 0;
    EXPECT_EQ(chi(mul(F, f, f)), expect);
  }
  EXPECT_THROW(QuadChar(F, P(F, {0, 0, 1})), ValidationError);
  EXPECT_THROW(QuadChar(F, P(F, {1, 2})), ValidationError);
}

TEST(Chi, ReciprocityMatchesDefinition) {
  for (auto [p, e] : {std::pair{5u, 1u}, {3u, 2u}, {13u, 1u}}) {
    Field F = Field::make(p, e);
    std::mt19937_64 rng(p);
    for (int i = 0; i < 200; ++i) {
      Poly D = random_squarefree(F, 1 + i % 6, rng);
      Poly f = random_poly(F, i % 7, rng, i % 4 != 0);
      int def = chi_definition(F, D, f);
      ASSERT_EQ(chi_reciprocity(F, D, f), def) << to_string(D) << " / " << to_string(f);
      ASSERT_EQ(chi_via_modulus(F, D, f), def);
    }
  }
}

TEST(Chi, FallbackWhenQIsThreeModFour) {
  Field F = Field::make(7);
  EXPECT_THROW(chi_reciprocity(F, Poly::t(), Poly::t()), ValidationError);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    Poly D = random_squarefree(F, 1 + i % 5, rng);
    QuadChar chi(F, D);
    EXPECT_FALSE(chi.uses_reciprocity());
    Poly f = random_poly(F, 1 + i % 4, rng, true);
    // For q = 3 mod 4 the symbols differ by (-1)^{deg D deg f}.
    int sign = (D.degree() * f.degree()) % 2 ? -1 : 1;
    EXPECT_EQ(chi(f), sign * chi_via_modulus(F, D, f));
  }
}

TEST(Chi, Multiplicativity) {
  Field F = Field::make(5);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    Poly D = random_squarefree(F, 1 + i % 7, rng);
    Poly f = random_poly(F, i % 5, rng, true), g = random_poly(F, (i / 5) % 5, rng, true);
    ASSERT_EQ(chi_reciprocity(F, D, mul(F, f, g)), chi_reciprocity(F, D, f) * chi_reciprocity(F, D, g));
  }
}

TEST(Chi, SquareTermOrthogonality) {
  Field F = Field::make(5);
  for (const Poly& f : {Poly::t(), P(F, {1, 1}), P(F, {2, 0, 1})}) {
    double target = 1;
    for (const auto& [Q, k] : factor(F, f).factors) target /= 1 + std::pow(5.0, -Q.degree());
    // The error term is periodic in n with period d(P): it shrinks by q^{d}
    // every d steps, not by q at every step when d > 1.
    int period = f.degree();
    std::map<int, double> diff;
    for (int n = 5; n <= 7 + period - 1; ++n) {
      std::int64_t sum = 0, count = 0;
      for (const Poly& D : MonicRange(F, n)) {
        if (!is_squarefree(F, D)) continue;
        ++count;
        sum += chi_reciprocity(F, D, mul(F, f, f));
      }
      diff[n] = std::abs(double(sum) / count - target);
      EXPECT_LE(diff[n], std::pow(5.0, -n + 2)) << to_string(f) << " n=" << n;
    }
    for (int n = 5; n + period <= 7 + period - 1; ++n) {
      EXPECT_LE(diff[n + period] * std::pow(5.0, period), diff[n] * (1 + 1e-9)) << to_string(f) << " n=" << n;
    }
  }
}

TEST(Chi, NonSquareCharacterSumsCancel) {
  Field F = Field::make(5);
  std::mt19937_64 rng(8);
  std::vector<Poly> ells;
  while (ells.size() < 20) {
    Poly l = random_poly(F, 1 + ells.size() % 4, rng, true);
    bool square = true;
    for (const auto& [Q, k] : factor(F, l).factors) square = square && k % 2 == 0;
    if (!square) ells.push_back(l);
  }
  for (int n = 5; n <= 7; ++n) {
    std::vector<std::int64_t> sums(ells.size(), 0);
    for (const Poly& D : MonicRange(F, n)) {
      if (!is_squarefree(F, D)) continue;
      for (std::size_t i = 0; i < ells.size(); ++i) sums[i] += chi_reciprocity(F, D, ells[i]);
    }
    for (std::size_t i = 0; i < ells.size(); ++i) {
      EXPECT_LE(std::abs(double(sums[i])), std::pow(5.0, 0.6 * n)) << to_string(ells[i]) << " n=" << n;
    }
  }
}

TEST(PrimeTable, EnumeratesAllPrimesWithRoots) {
  for (auto [p, e, K] : {std::tuple{5u, 1u, 5}, {3u, 2u, 4}, {7u, 1u, 4}}) {
    Field F = Field::make(p, e);
    PrimeTable T(F, K);
    for (int d = 1; d <= K; ++d) {
      auto ps = T.primes(d);
      EXPECT_EQ(ps.size(), prime_count(F.q(), d));
      for (std::size_t i = 0; i < ps.size(); ++i) {
        EXPECT_EQ(ps[i].P.degree(), d);
        EXPECT_TRUE(T.residue(d).eval(ps[i].P, ps[i].root).is_zero());
        if (i % 17 == 0) EXPECT_TRUE(is_irreducible(F, ps[i].P));
        if (i) EXPECT_TRUE(ps[i - 1].P < ps[i].P);
      }
    }
  }
}

TEST(PrimeTable, SymbolsMatchDefinition) {
  for (auto [p, e] : {std::pair{5u, 1u}, {3u, 2u}}) {
    Field F = Field::make(p, e);
    PrimeTable T(F, 3);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
      Poly f = random_poly(F, 1 + i % 6, rng, i % 2);
      for (int d = 1; d <= 3; ++d) {
        std::vector<int> s(T.primes(d).size());
        T.symbols(f, d, s);
        for (std::size_t j = 0; j < s.size(); ++j) {
          ASSERT_EQ(s[j], symbol_definition(F, T.primes(d)[j].P, f));
        }
      }
    }
  }
}
