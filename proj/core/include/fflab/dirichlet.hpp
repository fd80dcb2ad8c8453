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

// Dirichlet-polynomial approximations of log L, shift plans and the closed
// forms for means and variances.

#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "fflab/elliptic.hpp"
#include "fflab/lfunction.hpp"
#include "fflab/prime_table.hpp"
#include "fflab/zeros.hpp"

namespace fflab {

// Weight of the smoothed von Mangoldt function: Lambda_X(f) =
// lambda_X_weight(d(f), X) * Lambda(f). Zero for d(f) > 3X.
std::int64_t lambda_X_weight(int d, int X);

// Quadratic family: Lambda(f) = d(P) for f = P^k, else 0.
std::int64_t lambda_X(const Field& F, const Poly& f, int X);

// Normalized degree sums of one L-function:
//   log L(s) = sum_k C[k] q^{-ks} / k,
//   P_X(s)   = sum_{k <= X} A[k] q^{-ks} / k,
// with C[k] the sum of Lambda(f) chi(f) over prime powers of degree k and
// A[k] the prime-only part.
struct LogCoefficients {
  std::uint32_t q = 0;
  std::vector<double> C;
  std::vector<double> A;
  int X() const { return static_cast<int>(C.size()) - 1; }
};

// From the prime table (needs table degree >= X).
LogCoefficients quadratic_log_coefficients(const PrimeTable& T, const Poly& D, int X);

// From a complete L*, any X: C from the inverse-root power sums, A by
// peeling off the prime-power terms, which only need the prime factors of D.
// Without with_prime_part, A is left at zero and D is not factored.
LogCoefficients quadratic_log_coefficients(const Field& F, const LPolynomial& L, const Poly& D, int X,
                                           bool with_prime_part = true);

// Twists; X <= budget.
LogCoefficients twist_log_coefficients(const TwistTable& TT, const Poly& D, int X);

// Full log L(s) = log L*(s) + eta log(1 - q^{-s}), one principal log per
// root. Use where the Dirichlet series converges or on the line.
std::complex<double> log_L_full(const LPolynomial& L, const EigenphaseSet& Z, std::complex<double> s);

std::complex<double> dirichlet_DX(const LogCoefficients& c, std::complex<double> s, int X);
std::complex<double> prime_PX(const LogCoefficients& c, std::complex<double> s, int X);

// sum_j a_j D_X(s + i t_j).
std::complex<double> dirichlet_DX_combo(const LogCoefficients& c, std::complex<double> s, const std::vector<double>& a,
                                        const std::vector<double>& t, int X);

struct ApproxParams {
  int X = 2;
  double c = 0.25;  // sigma_0 = 1/2 + c/X, needs c log q < 1/2
  double y = 1.0;
  double sigma0() const { return 0.5 + c / X; }
  void validate(std::uint32_t q) const;  // throws ValidationError
};

enum class Regime { kMicroscopic, kMesoscopic, kMacroscopic };
std::string_view regime_name(Regime r);

// Phase of a shift, tau = |t| log q / (2 pi), folded into [0, 1/2].
double folded_phase(double t, std::uint32_t q);

// Microscopic: kappa * tau <= 1. Mesoscopic: kappa * tau > 1 and
// tau <= kappa^{-0.1} / 2. Macroscopic otherwise.
Regime classify_shift(double t, std::uint32_t q, int kappa);

struct ShiftPlan {
  std::vector<double> a;
  std::vector<double> t;
  std::uint32_t q = 0;
  int kappa = 0;
  double scale = 0;  // n, m or X in the closed forms
  std::vector<Regime> regimes;

  // Throws ValidationError on size mismatch, empty plans or |t| >= 2 pi.
  static ShiftPlan make(std::vector<double> a, std::vector<double> t, std::uint32_t q, int kappa, double scale);
};

// log min{scale, 1/x}; x = 0 gives log(scale).
double clamp_log(double scale, double x);

inline constexpr double kDegenerateVariance = 1e-9;

struct MomentTargets {
  double mean = 0;    // M(a, t, scale), before the family sign
  double var_re = 0;
  double var_im = 0;
  bool degenerate_im = false;  // var_im <= kDegenerateVariance
};
MomentTargets moment_targets(const std::vector<double>& a, const std::vector<double>& t, double scale);
inline MomentTargets moment_targets(const ShiftPlan& p) { return moment_targets(p.a, p.t, p.scale); }

// +1 for the quadratic family, -1 for twists.
int family_mean_sign(Family f);

struct CosineSumCheck {
  double sum = 0;       // sum_{n <= X} cos(2 n t) / n
  double clamp = 0;     // log min{X, 1/(2|t|)}
  double discrepancy = 0;
  double sine_sum = 0;  // sum_{n <= X} sin(2 n t) / n
};
CosineSumCheck cosine_sum_check(int X, double t);

}  // namespace fflab
