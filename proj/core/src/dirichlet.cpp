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

#include "fflab/dirichlet.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fflab/errors.hpp"
#include "fflab/factor.hpp"

namespace fflab {

std::int64_t lambda_X_weight(int d, int X) {
  if (X < 1) throw ValidationError("X must be at least 1");
  std::int64_t x = X, e = d;
  if (d <= X) return 2 * x * x;
  if (d <= 2 * X) return x * x - e * e + 2 * e * x - 3 * x - e - 2;
  if (d <= 3 * X) return (3 * x - e + 1) * (3 * x - e + 2);
  return 0;
}

std::int64_t lambda_X(const Field& F, const Poly& f, int X) {
  int d = f.degree();
  if (d <= 0 || d > 3 * X) {
    if (X < 1) throw ValidationError("X must be at least 1");
    return 0;
  }
  return lambda_X_weight(d, X) * von_mangoldt(F, f);
}

namespace {

LogCoefficients empty(std::uint32_t q, int X) {
  if (X < 1) throw ValidationError("X must be at least 1");
  LogCoefficients c;
  c.q = q;
  c.C.assign(static_cast<std::size_t>(X) + 1, 0.0);
  c.A.assign(static_cast<std::size_t>(X) + 1, 0.0);
  return c;
}

}  // namespace

LogCoefficients quadratic_log_coefficients(const PrimeTable& T, const Poly& D, int X) {
  if (X > T.max_degree()) throw BudgetError("X = " + std::to_string(X) + " exceeds the prime table degree " + std::to_string(T.max_degree()));
  auto c = empty(static_cast<std::uint32_t>(T.base().q()), X);
  PrimeSums ps = quadratic_prime_sums(T, D, X);
  auto C = log_coefficients(ps);
  for (int k = 1; k <= X; ++k) {
    c.C[static_cast<std::size_t>(k)] = static_cast<double>(C[static_cast<std::size_t>(k)]);
    c.A[static_cast<std::size_t>(k)] = static_cast<double>(ps.A[static_cast<std::size_t>(k)]);
  }
  return c;
}

LogCoefficients quadratic_log_coefficients(const Field& F, const LPolynomial& L, const Poly& D, int X,
                                           bool with_prime_part) {
  if (L.family != Family::kQuadratic) throw ValidationError("expected a quadratic L-function");
  auto c = empty(L.q, X);
  // B_d grows like q^d and is needed for d <= X/2.
  if ((X / 2 + 1) * std::log2(static_cast<double>(L.q)) + std::log2(X + 1.0) > 62)
    throw BudgetError("X = " + std::to_string(X) + " overflows the prime-power peeling");
  auto p = inverse_root_power_sums(L.coeffs, X);
  if (!with_prime_part) {
    for (int k = 1; k <= X; ++k) c.C[static_cast<std::size_t>(k)] = static_cast<double>(-L.eta - p[static_cast<std::size_t>(k)]);
    return c;
  }
  std::vector<std::int64_t> C(static_cast<std::size_t>(X) + 1), A(C.size()), B(C.size());
  std::vector<int> z(C.size(), 0);
  for (const auto& [P, mult] : factor(F, D).factors) {
    if (P.degree() <= X) z[static_cast<std::size_t>(P.degree())] += mult;
  }
  for (int k = 1; k <= X; ++k) {
    std::size_t uk = static_cast<std::size_t>(k);
    C[uk] = -L.eta - p[uk];
    std::int64_t a = C[uk];
    for (int d = 1; d < k; ++d) {
      if (k % d) continue;
      a -= ((k / d) % 2) ? A[static_cast<std::size_t>(d)] : B[static_cast<std::size_t>(d)];
    }
    A[uk] = a;
    if (2 * k <= X) B[uk] = k * (static_cast<std::int64_t>(prime_count(L.q, k)) - z[uk]);
    c.C[uk] = static_cast<double>(C[uk]);
    c.A[uk] = static_cast<double>(A[uk]);
  }
  return c;
}

LogCoefficients twist_log_coefficients(const TwistTable& TT, const Poly& D, int X) {
  if (X > TT.budget()) throw BudgetError("X = " + std::to_string(X) + " exceeds the twist budget " + std::to_string(TT.budget()));
  std::uint32_t q = static_cast<std::uint32_t>(TT.curve().field().q());
  auto c = empty(q, X);
  auto s = twist_prime_sums(TT, D);
  for (int k = 1; k <= X; ++k) {
    double w = std::pow(static_cast<double>(q), -0.5 * k);
    c.C[static_cast<std::size_t>(k)] = static_cast<double>(s.C[static_cast<std::size_t>(k)]) * w;
    c.A[static_cast<std::size_t>(k)] = static_cast<double>(s.A[static_cast<std::size_t>(k)]) * w;
  }
  return c;
}

std::complex<double> log_L_full(const LPolynomial& L, const EigenphaseSet& Z, std::complex<double> s) {
  std::complex<double> v = log_L(Z, z_of_s(L.q, s));
  if (L.eta) v += static_cast<double>(L.eta) * std::log(1.0 - std::exp(-s * std::log(static_cast<double>(L.q))));
  return v;
}

namespace {

std::complex<double> series(const std::vector<double>& coef, std::uint32_t q, std::complex<double> s, int X) {
  if (X < 1 || X >= static_cast<int>(coef.size()))
    throw BudgetError("X = " + std::to_string(X) + " outside the available coefficients");
  std::complex<double> u = std::exp(-s * std::log(static_cast<double>(q)));
  std::complex<double> uk = 1.0, acc = 0.0;
  for (int k = 1; k <= X; ++k) {
    uk *= u;
    acc += coef[static_cast<std::size_t>(k)] / k * uk;
  }
  return acc;
}

}  // namespace

std::complex<double> dirichlet_DX(const LogCoefficients& c, std::complex<double> s, int X) {
  return series(c.C, c.q, s, X);
}

std::complex<double> prime_PX(const LogCoefficients& c, std::complex<double> s, int X) {
  return series(c.A, c.q, s, X);
}

std::complex<double> dirichlet_DX_combo(const LogCoefficients& c, std::complex<double> s, const std::vector<double>& a,
                                        const std::vector<double>& t, int X) {
  if (a.size() != t.size()) throw ValidationError("shift plan needs as many weights as shifts");
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * dirichlet_DX(c, s + std::complex<double>(0, t[j]), X);
  return acc;
}

void ApproxParams::validate(std::uint32_t q) const {
  if (X < 2) throw ValidationError("X must be at least 2");
  if (!(c > 0) || !(c * std::log(static_cast<double>(q)) < 0.5))
    throw ValidationError("c = " + std::to_string(c) + " must satisfy 0 < c log q < 1/2");
  if (!(y > 0)) throw ValidationError("y must be positive");
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::kMicroscopic: return "microscopic";
    case Regime::kMesoscopic: return "mesoscopic";
    case Regime::kMacroscopic: return "macroscopic";
  }
  return "?";
}

double folded_phase(double t, std::uint32_t q) {
  double tau = std::abs(t) * std::log(static_cast<double>(q)) / (2 * std::numbers::pi);
  tau -= std::floor(tau);
  return std::min(tau, 1.0 - tau);
}

Regime classify_shift(double t, std::uint32_t q, int kappa) {
  double tau = folded_phase(t, q);
  if (kappa * tau <= 1.0) return Regime::kMicroscopic;
  if (tau <= 0.5 * std::pow(static_cast<double>(kappa), -0.1)) return Regime::kMesoscopic;
  return Regime::kMacroscopic;
}

ShiftPlan ShiftPlan::make(std::vector<double> a, std::vector<double> t, std::uint32_t q, int kappa, double scale) {
  if (a.empty() || a.size() != t.size()) throw ValidationError("shift plan needs equally many weights and shifts");
  if (kappa < 1) throw ValidationError("kappa must be positive");
  if (!(scale > 0)) throw ValidationError("scale must be positive");
  ShiftPlan p;
  for (double x : t) {
    if (!(std::abs(x) < 2 * std::numbers::pi)) throw ValidationError("shift " + std::to_string(x) + " outside (-2 pi, 2 pi)");
    p.regimes.push_back(classify_shift(x, q, kappa));
  }
  p.a = std::move(a);
  p.t = std::move(t);
  p.q = q;
  p.kappa = kappa;
  p.scale = scale;
  return p;
}

double clamp_log(double scale, double x) {
  x = std::abs(x);
  if (x == 0) return std::log(scale);
  return std::log(std::min(scale, 1.0 / x));
}

MomentTargets moment_targets(const std::vector<double>& a, const std::vector<double>& t, double scale) {
  if (a.size() != t.size()) throw ValidationError("shift plan needs as many weights as shifts");
  MomentTargets m;
  double sum_sq = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double L = clamp_log(scale, 2 * t[j]);
    m.mean += 0.5 * a[j] * L;
    sum_sq += a[j] * a[j];
    m.var_re += 0.5 * a[j] * a[j] * L;
    m.var_im -= 0.5 * a[j] * a[j] * L;
  }
  m.var_re += 0.5 * sum_sq * std::log(scale);
  m.var_im += 0.5 * sum_sq * std::log(scale);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      double dm = clamp_log(scale, t[i] - t[j]);
      double dp = clamp_log(scale, t[i] + t[j]);
      m.var_re += a[i] * a[j] * (dm + dp);
      m.var_im += a[i] * a[j] * (dm - dp);
    }
  }
  m.degenerate_im = m.var_im <= kDegenerateVariance;
  return m;
}

int family_mean_sign(Family f) { return f == Family::kQuadratic ? 1 : -1; }

CosineSumCheck cosine_sum_check(int X, double t) {
  if (X < 2) throw ValidationError("X must be at least 2");
  CosineSumCheck r;
  for (int n = 1; n <= X; ++n) {
    r.sum += std::cos(2.0 * n * t) / n;
    r.sine_sum += std::sin(2.0 * n * t) / n;
  }
  r.clamp = clamp_log(X, 2 * t);
  r.discrepancy = r.sum - r.clamp;
  return r;
}

}  // namespace fflab
