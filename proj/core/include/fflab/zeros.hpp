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

// Zeros of L-polynomials on the critical circle: eigenphase extraction,
// zero counting and the continuous-branch logarithm.
//
// Conventions: a zero sits at u = q^{-1/2} e(-theta), e(x) = exp(2 pi i x).
// The point s = 1/2 + it on the critical line corresponds to
// theta = t log q / (2 pi), i.e. z = sqrt(q) u = e(-theta).

#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "fflab/lfunction.hpp"

namespace fflab {

inline constexpr double kRhTolerance = 1e-9;
inline constexpr double kZeroSentinel = 1e-10;

struct EigenphaseSet {
  std::vector<double> theta;     // sorted, in [-1/2, 1/2)
  std::vector<double> residual;  // ||z_j| - 1| before projection to the circle
  std::string_view method;

  int kappa() const { return static_cast<int>(theta.size()); }
  double max_residual() const;
};

// Companion matrix (balanced) eigenvalues, multiplicity-aware Newton
// polishing with a 20-step budget and 1e-12 step tolerance. Throws
// InvariantError when a root is off the circle by more than rh_tol or the
// phases are not closed under negation.
EigenphaseSet eigenphases(const LPolynomial& L, double rh_tol = kRhTolerance);

// Independent method: zeros of the real function Xi(theta) on a grid of
// 64*kappa points refined by bisection; touching zeros counted twice.
EigenphaseSet eigenphases_sign_change(const LPolynomial& L);

// Multiplicities of the distinct roots of an integer polynomial, from a
// squarefree decomposition modulo 2^61 - 1. Sorted descending.
std::vector<int> root_multiplicities(const std::vector<std::int64_t>& coeffs);

// Largest circular distance between matched phases of two sets (inf when
// the sizes differ).
double phase_set_distance(const EigenphaseSet& a, const EigenphaseSet& b);

// arg L*(q^{-1/2} e(-theta)) on the branch continued radially from u = 0;
// an eigenphase contributes the average of its one-sided limits (zero).
double arg_on_circle(const EigenphaseSet& Z, double theta);
// S(theta) = arg / pi.
double S_theta(const EigenphaseSet& Z, double theta);
// Zeros with phase in [0, theta], theta in [0, 1]. A zero exactly at an end
// point counts one half; the zero-phase end is shared by 0 and 1.
double zero_count(const EigenphaseSet& Z, double theta);

// log L*(z) = sum_j log(1 - z e(theta_j)), z = sqrt(q) u, principal
// branch per factor. Real part -inf at an exact zero.
std::complex<double> log_L(const EigenphaseSet& Z, std::complex<double> z);

// z = q^{1/2 - s}
std::complex<double> z_of_s(std::uint32_t q, std::complex<double> s);

struct LogValue {
  std::complex<double> value;
  bool vanished = false;  // |L| < kZeroSentinel; value.real() is -inf
};
LogValue log_abs_L(const EigenphaseSet& Z, std::uint32_t q, std::complex<double> s);
// Same from the coefficients.
LogValue log_abs_L(const LPolynomial& L, std::complex<double> s);

}  // namespace fflab
