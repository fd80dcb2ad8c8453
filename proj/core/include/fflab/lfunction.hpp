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

// L-polynomials of quadratic characters (and the shared representation
// used for elliptic twists).

#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "fflab/field.hpp"
#include "fflab/poly.hpp"
#include "fflab/prime_table.hpp"

namespace fflab {

enum class Family { kQuadratic, kEllipticTwist };
std::string_view family_name(Family f);

struct LPolynomial {
  Family family = Family::kQuadratic;
  std::uint32_t q = 0;
  int n = 0;           // d(D)
  int genus = 0;       // g for the quadratic family, floor(m/2) for twists
  int eta = 0;         // trivial zeros removed (quadratic, n even)
  int root_number = 1;
  // Coefficient of u^k in L* is coeffs[k] * q^{-weight*k/2}. Quadratic:
  // weight 0 (integer L*). Twists: weight 1 (coeffs are the c~_k).
  int weight = 0;
  std::vector<std::int64_t> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int kappa() const { return degree(); }
  // Coefficients in z = sqrt(q) u; all roots lie on |z| = 1.
  std::vector<double> unitarized() const;
  // L*(u) from the coefficients, without the trivial factor.
  std::complex<double> eval(std::complex<double> u) const;
};

// Largest |coeffs[deg-k] - eps q^{(deg-2k)(weight+1)/2} coeffs[k]| in
// unitarized units; exactly zero for a correct quadratic L*.
double functional_equation_residual(const LPolynomial& L);
// Integer form of the quadratic symmetry b_{2g-k} = q^{g-k} b_k.
bool quadratic_symmetry_holds(const LPolynomial& L);

// Per-degree prime sums for chi_D: A[d] = sum_{P in P_d} d chi_D(P) and
// B[d] = sum_{P in P_d} d chi_D(P)^2, for d = 1..K (index 0 unused).
struct PrimeSums {
  std::vector<std::int64_t> A;
  std::vector<std::int64_t> B;
  int K() const { return static_cast<int>(A.size()) - 1; }
};
PrimeSums quadratic_prime_sums(const PrimeTable& T, const Poly& D, int K);

// C_k = sum_{deg f = k} Lambda(f) chi(f) for k = 1..K from prime sums.
std::vector<std::int64_t> log_coefficients(const PrimeSums& s);

// Coefficients a_0..a_K of exp(sum_k C_k u^k / k).
std::vector<std::int64_t> exp_log_series(const std::vector<std::int64_t>& C);

// Power sums p_k = sum_j gamma_j^k of the inverse roots of an integer
// polynomial with constant term 1, k = 1..K (index 0 unused).
std::vector<std::int64_t> inverse_root_power_sums(const std::vector<std::int64_t>& coeffs, int K);

// L* by enumerating monic f of degree < n and summing chi_D(f). When
// check_tail is set, the degree-n sum is also enumerated and must vanish.
LPolynomial l_star_enumeration(const Field& F, const Poly& D, bool check_tail = false);

// L* through the Euler product over the prime table. Needs primes up to
// degree g; when the table reaches degree n all coefficients are computed
// and the functional equation is checked instead of used.
LPolynomial l_star(const PrimeTable& T, const Poly& D);

// Shared completion: raw coefficients a_0..a_K of L(u, chi_D).
LPolynomial complete_quadratic(std::vector<std::int64_t> a, int n, std::uint32_t q);

}  // namespace fflab
