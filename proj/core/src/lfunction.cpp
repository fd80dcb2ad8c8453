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

#include "fflab/lfunction.hpp"

#include <cmath>
#include <limits>

#include "fflab/characters.hpp"
#include "fflab/errors.hpp"
#include "fflab/factor.hpp"

namespace fflab {

namespace {

std::int64_t narrow(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw BudgetError(std::string(what) + " overflows 64-bit integers; reduce q or n");
  }
  return static_cast<std::int64_t>(v);
}

__int128 ipow128(std::uint32_t q, int k) {
  __int128 r = 1;
  for (int i = 0; i < k; ++i) r *= q;
  return r;
}

}  // namespace

std::string_view family_name(Family f) {
  return f == Family::kQuadratic ? "quadratic" : "elliptic";
}

std::vector<double> LPolynomial::unitarized() const {
  std::vector<double> w(coeffs.size());
  long double s = std::pow(static_cast<long double>(q), -0.5L * (weight + 1));
  long double f = 1.0L;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    w[k] = static_cast<double>(coeffs[k] * f);
    f *= s;
  }
  return w;
}

std::complex<double> LPolynomial::eval(std::complex<double> u) const {
  std::complex<long double> x(u.real(), u.imag());
  x *= std::pow(static_cast<long double>(q), -0.5L * weight);
  std::complex<long double> acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + static_cast<long double>(coeffs[k]);
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double functional_equation_residual(const LPolynomial& L) {
  auto w = L.unitarized();
  double r = 0;
  int m = L.degree();
  for (int k = 0; k <= m; ++k) {
    r = std::max(r, std::abs(w[static_cast<std::size_t>(m - k)] - L.root_number * w[static_cast<std::size_t>(k)]));
  }
  return r;
}

bool quadratic_symmetry_holds(const LPolynomial& L) {
  int two_g = L.degree();
  if (two_g % 2) return false;
  int g = two_g / 2;
  for (int k = 0; k <= g; ++k) {
    __int128 lhs = L.coeffs[static_cast<std::size_t>(two_g - k)];
    __int128 rhs = ipow128(L.q, g - k) * L.coeffs[static_cast<std::size_t>(k)];
    if (lhs != rhs) return false;
  }
  return true;
}

PrimeSums quadratic_prime_sums(const PrimeTable& T, const Poly& D, int K) {
  if (K > T.max_degree()) {
    throw BudgetError("prime table reaches degree " + std::to_string(T.max_degree()) + ", need " +
                      std::to_string(K));
  }
  PrimeSums s;
  s.A.assign(static_cast<std::size_t>(K) + 1, 0);
  s.B.assign(static_cast<std::size_t>(K) + 1, 0);
  std::vector<int> sym;
  for (int d = 1; d <= K; ++d) {
    auto ps = T.primes(d);
    sym.resize(ps.size());
    T.symbols(D, d, sym);
    std::int64_t a = 0, b = 0;
    for (int v : sym) {
      a += v;
      b += v * v;
    }
    s.A[static_cast<std::size_t>(d)] = a * d;
    s.B[static_cast<std::size_t>(d)] = b * d;
  }
  return s;
}

std::vector<std::int64_t> log_coefficients(const PrimeSums& s) {
  int K = s.K();
  std::vector<std::int64_t> C(static_cast<std::size_t>(K) + 1, 0);
  for (int k = 1; k <= K; ++k) {
    std::int64_t c = 0;
    for (int d = 1; d <= k; ++d) {
      if (k % d) continue;
      c += ((k / d) % 2) ? s.A[static_cast<std::size_t>(d)] : s.B[static_cast<std::size_t>(d)];
    }
    C[static_cast<std::size_t>(k)] = c;
  }
  return C;
}

std::vector<std::int64_t> exp_log_series(const std::vector<std::int64_t>& C) {
  int K = static_cast<int>(C.size()) - 1;
  std::vector<std::int64_t> a(static_cast<std::size_t>(K) + 1, 0);
  a[0] = 1;
  for (int k = 1; k <= K; ++k) {
    __int128 acc = 0;
    for (int j = 1; j <= k; ++j) acc += static_cast<__int128>(C[static_cast<std::size_t>(j)]) * a[static_cast<std::size_t>(k - j)];
    if (acc % k != 0) throw InvariantError("Euler product coefficient is not integral");
    a[static_cast<std::size_t>(k)] = narrow(acc / k, "L-function coefficient");
  }
  return a;
}

std::vector<std::int64_t> inverse_root_power_sums(const std::vector<std::int64_t>& b, int K) {
  std::vector<std::int64_t> p(static_cast<std::size_t>(K) + 1, 0);
  int deg = static_cast<int>(b.size()) - 1;
  auto coef = [&](int i) -> __int128 { return i <= deg ? b[static_cast<std::size_t>(i)] : 0; };
  for (int k = 1; k <= K; ++k) {
    __int128 acc = -static_cast<__int128>(k) * coef(k);
    for (int i = 1; i < k; ++i) acc -= coef(i) * p[static_cast<std::size_t>(k - i)];
    p[static_cast<std::size_t>(k)] = narrow(acc, "power sum");
  }
  return p;
}

LPolynomial complete_quadratic(std::vector<std::int64_t> a, int n, std::uint32_t q) {
  if (n < 1) throw ValidationError("D must have degree at least 1");
  LPolynomial L;
  L.family = Family::kQuadratic;
  L.q = q;
  L.n = n;
  L.eta = (n % 2 == 0) ? 1 : 0;
  int two_g = n - 1 - L.eta;
  L.genus = two_g / 2;
  int K = static_cast<int>(a.size()) - 1;
  if (K < L.genus) {
    throw BudgetError("need coefficients up to degree " + std::to_string(L.genus) + ", have " + std::to_string(K));
  }
  std::vector<std::int64_t> b(a.size());
  __int128 run = 0;
  for (int k = 0; k <= K; ++k) {
    run += a[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(k)] = L.eta ? narrow(run, "L* coefficient") : a[static_cast<std::size_t>(k)];
  }
  for (int k = two_g + 1; k <= K; ++k) {
    if (b[static_cast<std::size_t>(k)] != 0) {
      throw InvariantError("L* has a nonzero coefficient beyond degree 2g (trivial-zero division not exact)");
    }
  }
  L.coeffs.assign(static_cast<std::size_t>(two_g) + 1, 0);
  for (int k = 0; k <= std::min(K, two_g); ++k) L.coeffs[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k)];
  for (int k = K + 1; k <= two_g; ++k) {
    L.coeffs[static_cast<std::size_t>(k)] =
        narrow(ipow128(q, k - L.genus) * L.coeffs[static_cast<std::size_t>(two_g - k)], "L* coefficient");
  }
  if (L.coeffs[0] != 1) throw InvariantError("L* must have constant term 1");
  if (K >= two_g && !quadratic_symmetry_holds(L)) {
    throw InvariantError("L* violates the functional-equation symmetry");
  }
  return L;
}

LPolynomial l_star_enumeration(const Field& F, const Poly& D, bool check_tail) {
  QuadChar chi(F, D);
  int n = D.degree();
  int K = check_tail ? n : n - 1;
  std::vector<std::int64_t> a(static_cast<std::size_t>(K) + 1, 0);
  for (int k = 0; k <= K; ++k) {
    std::int64_t s = 0;
    for (const Poly& f : MonicRange(F, k)) s += chi(f);
    a[static_cast<std::size_t>(k)] = s;
  }
  return complete_quadratic(std::move(a), n, F.q());
}

LPolynomial l_star(const PrimeTable& T, const Poly& D) {
  const Field& F = T.base();
  if (!D.is_monic()) throw ValidationError("D must be monic");
  if (!is_squarefree(F, D)) throw ValidationError("D must be squarefree");
  int n = D.degree();
  int K = std::min(T.max_degree(), n);
  auto C = log_coefficients(quadratic_prime_sums(T, D, K));
  return complete_quadratic(exp_log_series(C), n, F.q());
}

}  // namespace fflab
