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

// Elliptic curves y^2 = x^3 + A x + B over F_q(t) and the L-polynomials of
// their quadratic twists.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "fflab/field.hpp"
#include "fflab/lfunction.hpp"
#include "fflab/poly.hpp"
#include "fflab/prime_table.hpp"

namespace fflab {

enum class Reduction { kGood, kMultiplicative, kAdditive };
std::string_view reduction_name(Reduction r);

struct CurveConfig {
  Poly A;
  Poly B;
  std::optional<int> conductor_degree;  // d(N_E) including the place at infinity
  std::optional<int> root_number;       // of E itself
};

// Flat key=value text: A=<coeffs>, B=<coeffs>, optional conductor_degree and
// root_number. '#' starts a comment. Throws ValidationError.
CurveConfig parse_curve_config(const Field& F, std::string_view text);

// y^2 = x^3 + t x + 1 over F_q.
CurveConfig toy_curve(const Field& F);

class EllipticCurveFF {
 public:
  // Requires gcd(q, 6) = 1 and a nonzero discriminant.
  EllipticCurveFF(const Field& F, const CurveConfig& cfg);

  const Field& field() const { return *F_; }
  const Poly& A() const { return cfg_.A; }
  const Poly& B() const { return cfg_.B; }
  const Poly& discriminant() const { return delta_; }
  const CurveConfig& config() const { return cfg_; }

  // Bad primes in Poly order. P | gcd(Delta, A) is typed additive, other
  // P | Delta multiplicative.
  const std::vector<std::pair<Poly, Reduction>>& bad_primes() const { return bad_; }
  Reduction reduction_at(const Poly& P) const;
  const Poly& multiplicative_part() const { return M_; }
  const Poly& additive_part() const { return A_E_; }
  int finite_conductor_degree() const { return M_.degree() + 2 * A_E_.degree(); }

 private:
  const Field* F_;
  CurveConfig cfg_;
  Poly delta_;
  std::vector<std::pair<Poly, Reduction>> bad_;
  Poly M_;
  Poly A_E_;
};

// a_P = |P| + 1 - #E(F_P) from a full point count over the residue field;
// root is a root of P in R. Valid for every reduction type.
std::int64_t trace_by_point_count(const EllipticCurveFF& E, const ResidueField& R, FqElement root);

// +1 for split, -1 for nonsplit multiplicative reduction, read off the
// squareness of 3 x0 at the node x0.
int split_sign(const EllipticCurveFF& E, const ResidueField& R, FqElement root);

struct TwistPrime {
  std::int64_t a = 0;   // unnormalized trace a_P
  Reduction type = Reduction::kGood;
  std::vector<std::int64_t> s;  // s[j] = alpha^j + beta^j (unnormalized), j <= budget / d
};

// Point counts for every prime of degree <= T.max_degree() (the point-count
// budget), plus the conductor and root-number calibration of E.
class TwistTable {
 public:
  TwistTable(const EllipticCurveFF& E, const PrimeTable& T);

  const EllipticCurveFF& curve() const { return *E_; }
  const PrimeTable& primes() const { return *T_; }
  int budget() const { return T_->max_degree(); }
  const TwistPrime& prime(int d, std::size_t i) const { return data_[static_cast<std::size_t>(d)][i]; }
  // Throws ValidationError if P is not a tabulated prime.
  const TwistPrime& prime(const Poly& P) const;

  // a(f), the multiplicative extension of a_P to monic f with all prime
  // factors inside the budget.
  std::int64_t lambda(const Poly& f) const;

  // d(N_E) seen by twists of degree n; declared or detected per parity of n.
  int conductor_degree(int n) const;
  int twist_degree(int n) const { return 2 * n + conductor_degree(n) - 4; }
  bool conductor_detected() const { return detected_; }
  // Root number of E.
  int root_number() const { return root_number_; }

 private:
  const EllipticCurveFF* E_;
  const PrimeTable* T_;
  std::vector<std::vector<TwistPrime>> data_;
  std::map<Poly, std::pair<int, std::size_t>> index_;
  int conductor_[2] = {0, 0};
  bool detected_ = false;
  int root_number_ = 1;
};

// Unnormalized logarithmic-derivative data of L(T, E x chi_D) up to the budget:
// T L'/L = sum_k C[k] T^k, and A[k] = k * sum over primes of degree k of
// a_P chi_D(P).
struct TwistPrimeSums {
  std::vector<std::int64_t> C;
  std::vector<std::int64_t> A;
};
TwistPrimeSums twist_prime_sums(const TwistTable& TT, const Poly& D);

// Exact c~_0..c~_K of L(T, E x chi_D) from the Euler product, where K is the
// budget (D = 1 gives L(T, E)).
std::vector<std::int64_t> twist_series(const TwistTable& TT, const Poly& D);
// Oracle: c~_k = sum over monic f of degree k of a(f) chi_D(f), k <= K.
std::vector<std::int64_t> twist_series_enumeration(const TwistTable& TT, const Poly& D, int K);

// Admissible D: monic, squarefree, coprime to Delta.
bool in_family(const EllipticCurveFF& E, const Poly& D);

// Degree m, root number and the completed c~_0..c~_m. Missing coefficients
// come from the functional equation; overlapping ones are checked against
// it. When the overlap carries no sign information the root number is the
// one whose completion has all roots on the circle; sign_hint breaks a tie.
// Throws BudgetError when the budget cannot pin down the polynomial and
// InvariantError when the data contradicts the functional equation.
LPolynomial twist_l(const TwistTable& TT, const Poly& D, std::optional<int> sign_hint = {});

// chi_D(M_E).
int chi_of_M(const EllipticCurveFF& E, const Poly& D);

// The sign eps_n eps(E) that selects the root-number-one subfamily in degree n,
// calibrated from the first admissible D of degree n.
int plus_family_sign(const TwistTable& TT, int n);

bool in_plus_family(const TwistTable& TT, const Poly& D, int sign);

}  // namespace fflab
