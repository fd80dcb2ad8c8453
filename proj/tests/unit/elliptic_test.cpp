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
#include <map>

#include "fflab/characters.hpp"
#include "fflab/elliptic.hpp"
#include "fflab/errors.hpp"
#include "fflab/factor.hpp"
#include "fflab/zeros.hpp"

using namespace fflab;

namespace {

Poly P(const Field& F, std::initializer_list<int> c) {
  std::vector<FqElement> v;
  for (int x : c) v.push_back(F.from_int(x));
  return Poly(std::move(v));
}

struct Toy {
  Field F = Field::make(5);
  EllipticCurveFF E{F, toy_curve(F)};
  PrimeTable T{F, 6};
  TwistTable TT{E, T};
};

const Toy& toy() {
  static const Toy t;
  return t;
}

}  // namespace

TEST(Curve, ParseConfig) {
  Field F = Field::make(5);
  auto c = parse_curve_config(F, "# toy\nA = 0,1\nB=1\nconductor_degree=5\n");
  EXPECT_EQ(c.A, Poly::t());
  EXPECT_EQ(c.B, Poly::one());
  EXPECT_EQ(c.conductor_degree, 5);
  EXPECT_FALSE(c.root_number);
  EXPECT_THROW(parse_curve_config(F, "A=1\n"), ValidationError);
  EXPECT_THROW(parse_curve_config(F, "A=1\nB=1\nfoo=2\n"), ValidationError);
  EXPECT_THROW(parse_curve_config(F, "A=1\nB=1\nroot_number=2\n"), ValidationError);
  EXPECT_THROW(parse_curve_config(F, "A=1\nB=1\nconductor_degree=x\n"), ValidationError);
}

TEST(Curve, RejectsBadInput) {
  Field F3 = Field::make(3);
  EXPECT_THROW(EllipticCurveFF(F3, toy_curve(F3)), ValidationError);
  Field F = Field::make(5);
  CurveConfig sing;
  sing.A = Poly();
  sing.B = Poly();
  EXPECT_THROW(EllipticCurveFF(F, sing), ValidationError);
}

TEST(Curve, ToyReductionTypes) {
  const Toy& t = toy();
  EXPECT_EQ(t.E.discriminant(), P(t.F, {2, 0, 0, 4}));
  ASSERT_EQ(t.E.bad_primes().size(), 2u);
  EXPECT_EQ(t.E.bad_primes()[0].first, P(t.F, {2, 1}));
  EXPECT_EQ(t.E.bad_primes()[1].first, P(t.F, {4, 3, 1}));
  for (const auto& [Q, r] : t.E.bad_primes()) EXPECT_EQ(r, Reduction::kMultiplicative);
  EXPECT_EQ(t.E.multiplicative_part(), P(t.F, {3, 0, 0, 1}));
  EXPECT_EQ(t.E.additive_part(), Poly::one());
  EXPECT_EQ(t.E.finite_conductor_degree(), 3);
  EXPECT_EQ(t.E.reduction_at(Poly::t()), Reduction::kGood);
}

TEST(Trace, BruteForceAtT) {
  // y^2 = x^3 + 1 over F_5 by listing all 25 pairs.
  int count = 1;
  for (int x = 0; x < 5; ++x) {
    for (int y = 0; y < 5; ++y) count += (y * y - (x * x * x + 1)) % 5 == 0;
  }
  const Toy& t = toy();
  EXPECT_EQ(t.TT.prime(Poly::t()).a, 5 + 1 - count);
}

TEST(Trace, BruteForceDegreeOne) {
  const Toy& t = toy();
  for (int c = 0; c < 5; ++c) {
    // P = t - c; the fibre is y^2 = x^3 + c x + 1.
    int count = 1;
    for (int x = 0; x < 5; ++x) {
      for (int y = 0; y < 5; ++y) count += ((y * y - (x * x * x + c * x + 1)) % 5 + 5) % 5 == 0;
    }
    Poly Pc = P(t.F, {(5 - c) % 5, 1});
    EXPECT_EQ(t.TT.prime(Pc).a, 5 + 1 - count) << c;
  }
}

TEST(Trace, HasseAndAdditive) {
  const Toy& t = toy();
  for (int d = 1; d <= t.TT.budget(); ++d) {
    double norm = std::pow(5.0, d);
    for (std::size_t i = 0; i < t.T.primes(d).size(); ++i) {
      const TwistPrime& tp = t.TT.prime(d, i);
      if (tp.type == Reduction::kGood) EXPECT_LE(std::abs(double(tp.a)), 2 * std::sqrt(norm));
    }
  }
  Field F = Field::make(7);
  CurveConfig c;
  c.A = Poly::t();
  c.B = Poly::t();
  EllipticCurveFF E(F, c);
  EXPECT_EQ(E.reduction_at(Poly::t()), Reduction::kAdditive);
  EXPECT_EQ(E.additive_part(), Poly::t());
  PrimeTable T(F, 3);
  EXPECT_EQ(trace_by_point_count(E, T.residue(1), T.primes(1)[0].root), 0);
}

TEST(Trace, SplitTestMatchesPointCount) {
  const Toy& t = toy();
  int seen = 0;
  for (int d = 1; d <= 3; ++d) {
    auto ps = t.T.primes(d);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (t.TT.prime(d, i).type != Reduction::kMultiplicative) continue;
      ++seen;
      // Nonsingular points number |P| - a_P.
      EXPECT_EQ(split_sign(t.E, t.T.residue(d), ps[i].root), t.TT.prime(d, i).a);
    }
  }
  EXPECT_EQ(seen, 2);
}

TEST(Trace, SymmetricSquareIdentity) {
  // lambda(P)^2 = lambda(P^2) + 1 in normalized form.
  const Toy& t = toy();
  for (int d = 1; d <= 3; ++d) {
    for (const PrimeEntry& e : t.T.primes(d)) {
      if (t.E.reduction_at(e.P) != Reduction::kGood) continue;
      std::int64_t a = t.TT.lambda(e.P);
      std::int64_t a2 = t.TT.lambda(mul(t.F, e.P, e.P));
      EXPECT_EQ(a * a, a2 + static_cast<std::int64_t>(std::pow(5, d)));
    }
  }
}

TEST(Trace, LambdaSquaredCensus) {
  const Toy& t = toy();
  double s = 0;
  for (int X = 1; X <= t.TT.budget(); ++X) {
    double norm = std::pow(5.0, X);
    for (std::size_t i = 0; i < t.T.primes(X).size(); ++i) {
      double a = double(t.TT.prime(X, i).a);
      s += a * a / (norm * norm);
    }
    EXPECT_LE(std::abs(s - std::log(double(X))), 3.0) << X;
  }
}

TEST(Twist, EulerProductMatchesEnumeration) {
  Field F = Field::make(5);
  EllipticCurveFF E(F, toy_curve(F));
  PrimeTable T(F, 4);
  TwistTable TT(E, T);
  std::vector<Poly> Ds = {Poly::one(), P(F, {1, 1}), P(F, {1, 1, 1}), P(F, {2, 1, 0, 1})};
  for (const Poly& D : Ds) {
    ASSERT_TRUE(in_family(E, D));
    EXPECT_EQ(twist_series(TT, D), twist_series_enumeration(TT, D, 4)) << to_string(D);
  }
}

TEST(Twist, CalibrationOfToyCurve) {
  const Toy& t = toy();
  EXPECT_TRUE(t.TT.conductor_detected());
  EXPECT_EQ(t.TT.conductor_degree(0), 5);
  EXPECT_EQ(t.TT.conductor_degree(1), 5);
  // L(T, E) = 1 + a T with a = eps(E) * q.
  auto c = twist_series(t.TT, Poly::one());
  EXPECT_EQ(c[1], 5 * t.TT.root_number());
  EXPECT_EQ(std::abs(c[1]), 5);
}

TEST(Twist, DeclaredConductorMustAgree) {
  Field F = Field::make(5);
  CurveConfig c = toy_curve(F);
  c.conductor_degree = 6;
  EllipticCurveFF E(F, c);
  PrimeTable T(F, 4);
  EXPECT_THROW(TwistTable(E, T), ValidationError);
}

TEST(Twist, FunctionalEquationRootsAndRootNumber) {
  const Toy& t = toy();
  for (int n = 1; n <= 5; ++n) {
    int sign = plus_family_sign(t.TT, n);
    int seen = 0, undetermined = 0;
    for (const Poly& D : MonicRange(t.F, n)) {
      if (!in_family(t.E, D)) continue;
      if (++seen > 60) break;
      LPolynomial L;
      try {
        L = twist_l(t.TT, D);
      } catch (const BudgetError&) {
        ++undetermined;
        continue;
      }
      ASSERT_EQ(L.degree(), 2 * n + 1);
      EXPECT_EQ(L.root_number * L.root_number, 1);
      EXPECT_LE(functional_equation_residual(L), 1e-8);
      EigenphaseSet Z = eigenphases(L, 1e-8);
      EXPECT_LE(Z.max_residual(), 1e-8);
      EXPECT_EQ(L.root_number, sign * chi_of_M(t.E, D)) << to_string(D);
      if (L.root_number == -1) EXPECT_LE(std::abs(L.eval(1 / std::sqrt(5.0))), 1e-8);
    }
    EXPECT_LE(undetermined, 6) << n;
  }
}

TEST(Twist, BudgetErrors) {
  const Toy& t = toy();
  EXPECT_THROW(twist_l(t.TT, P(t.F, {2, 1})), ValidationError);  // divides the discriminant
  Poly D = P(t.F, {1, 0, 0, 0, 0, 0, 0, 1});
  for (const Poly& f : MonicRange(t.F, 7)) {
    if (in_family(t.E, f)) {
      D = f;
      break;
    }
  }
  // m = 15 needs coefficients through degree 7.
  EXPECT_THROW(twist_l(t.TT, D), BudgetError);
}

TEST(Family, PlusHalfCensus) {
  const Toy& t = toy();
  for (int n = 1; n <= 6; ++n) {
    int sign = plus_family_sign(t.TT, n);
    double all = 0, plus = 0;
    for (const Poly& D : MonicRange(t.F, n)) {
      if (!in_family(t.E, D)) continue;
      ++all;
      plus += chi_of_M(t.E, D) == sign;
    }
    EXPECT_LE(std::abs(plus / all - 0.5), 2.0 * std::pow(5.0, -n / 2.0)) << n;
  }
}

TEST(Family, TrivialMultiplicativePart) {
  // A = t^2 has only additive reduction at t, so every admissible D is in
  // the plus family.
  Field F = Field::make(7);
  CurveConfig c;
  c.A = P(F, {0, 0, 1});
  c.B = P(F, {0, 0, 0, 1});
  EllipticCurveFF E(F, c);
  EXPECT_EQ(E.multiplicative_part(), Poly::one());
  for (const Poly& D : MonicRange(F, 3)) {
    if (in_family(E, D)) EXPECT_EQ(chi_of_M(E, D), 1);
  }
}

TEST(Family, ProgressionsAndSquares) {
  const Toy& t = toy();
  const Poly& N = t.E.multiplicative_part();
  const double phi = 4.0 * 24.0;
  const double local = (5.0 / 6.0) * (25.0 / 26.0);
  for (int n = 4; n <= 6; ++n) {
    double Hn = double(squarefree_count(5, n));
    std::map<Poly, double> size;
    std::map<Poly, double> sq;  // chi_D(l^2) sums with l = t(t+1)
    Poly l = P(t.F, {0, 1, 1});
    for (const Poly& D : MonicRange(t.F, n)) {
      if (!in_family(t.E, D)) continue;
      Poly C = rem(t.F, D, N);
      size[C] += 1;
      sq[C] += gcd(t.F, D, l).degree() == 0 ? 1 : 0;
    }
    EXPECT_EQ(size.size(), 96u);
    double bound = 4.0 * std::pow(5.0, 0.3 * n);
    for (const auto& [C, s] : size) {
      EXPECT_LE(std::abs(s - Hn / phi * local), bound) << n;
      EXPECT_LE(std::abs(sq[C] - Hn / phi * local / (1.2 * 1.2)), bound) << n;
    }
  }
}
