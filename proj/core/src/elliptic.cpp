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

#include "fflab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fflab/characters.hpp"
#include "fflab/errors.hpp"
#include "fflab/factor.hpp"
#include "fflab/zeros.hpp"

namespace fflab {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("curve config: " + key + " is not an integer: '" + v + "'");
  }
}

__int128 ipow(std::uint64_t q, int k) {
  __int128 r = 1;
  for (int i = 0; i < k; ++i) r *= q;
  return r;
}

std::int64_t a_of_prime_power(const TwistPrime& tp, std::uint64_t norm, int e) {
  // a(P^e) from the local Euler factor.
  if (tp.type == Reduction::kAdditive) return e == 0 ? 1 : 0;
  if (tp.type == Reduction::kMultiplicative) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= tp.a;
    return r;
  }
  std::int64_t prev = 1, cur = tp.a;
  if (e == 0) return 1;
  for (int i = 1; i < e; ++i) {
    std::int64_t next = tp.a * cur - static_cast<std::int64_t>(norm) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Poly first_admissible(const EllipticCurveFF& E, int n) {
  for (const Poly& D : MonicRange(E.field(), n)) {
    if (in_family(E, D)) return D;
  }
  throw ValidationError("no admissible D of degree " + std::to_string(n));
}

// Largest index with a nonzero coefficient, or -1 if the tail is not visible.
int visible_degree(const std::vector<std::int64_t>& c) {
  int m = static_cast<int>(c.size()) - 1;
  while (m >= 0 && c[static_cast<std::size_t>(m)] == 0) --m;
  if (m == static_cast<int>(c.size()) - 1) return -1;
  return m;
}

}  // namespace

std::string_view reduction_name(Reduction r) {
  switch (r) {
    case Reduction::kGood: return "good";
    case Reduction::kMultiplicative: return "multiplicative";
    case Reduction::kAdditive: return "additive";
  }
  return "?";
}

CurveConfig parse_curve_config(const Field& F, std::string_view text) {
  CurveConfig cfg;
  bool haveA = false, haveB = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string s = trim(line);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("curve config: expected key=value, got '" + s + "'");
    std::string key = trim(std::string_view(s).substr(0, eq));
    std::string val = trim(std::string_view(s).substr(eq + 1));
    if (key == "A") {
      cfg.A = parse_poly(F, val);
      haveA = true;
    } else if (key == "B") {
      cfg.B = parse_poly(F, val);
      haveB = true;
    } else if (key == "conductor_degree") {
      cfg.conductor_degree = parse_int(key, val);
    } else if (key == "root_number") {
      int r = parse_int(key, val);
      if (r != 1 && r != -1) throw ValidationError("curve config: root_number must be 1 or -1");
      cfg.root_number = r;
    } else {
      throw ValidationError("curve config: unknown key '" + key + "'");
    }
  }
  if (!haveA || !haveB) throw ValidationError("curve config: A and B are required");
  return cfg;
}

CurveConfig toy_curve(const Field& F) {
  CurveConfig c;
  c.A = Poly::t();
  c.B = Poly::constant(F.one());
  return c;
}

EllipticCurveFF::EllipticCurveFF(const Field& F, const CurveConfig& cfg) : F_(&F), cfg_(cfg) {
  if (F.p() == 2 || F.p() == 3) throw ValidationError("elliptic curves need characteristic other than 2 and 3");
  Poly A3 = mul(F, cfg_.A, mul(F, cfg_.A, cfg_.A));
  Poly B2 = mul(F, cfg_.B, cfg_.B);
  delta_ = add(F, scale(F, A3, F.from_int(4)), scale(F, B2, F.from_int(27)));
  if (delta_.is_zero()) throw ValidationError("curve is singular: 4A^3 + 27B^2 = 0");
  if (cfg_.conductor_degree && *cfg_.conductor_degree < 0) throw ValidationError("conductor_degree must be >= 0");
  M_ = Poly::one();
  A_E_ = Poly::one();
  if (delta_.degree() > 0) {
    Factorization fac = factor(F, delta_);
    for (const auto& [P, k] : fac.factors) {
      Reduction r = rem(F, cfg_.A, P).is_zero() ? Reduction::kAdditive : Reduction::kMultiplicative;
      bad_.emplace_back(P, r);
      if (r == Reduction::kAdditive) {
        A_E_ = mul(F, A_E_, P);
      } else {
        M_ = mul(F, M_, P);
      }
    }
  }
}

Reduction EllipticCurveFF::reduction_at(const Poly& P) const {
  for (const auto& [Q, r] : bad_) {
    if (Q == P) return r;
  }
  return Reduction::kGood;
}

std::int64_t trace_by_point_count(const EllipticCurveFF& E, const ResidueField& R, FqElement root) {
  const Field& K = R.field();
  FqElement a = R.eval(E.A(), root);
  FqElement b = R.eval(E.B(), root);
  std::int64_t s = K.quad_char(b);  // x = 0
  if (a.is_zero()) {
    for (std::uint32_t k = 0; k + 1 < K.q(); ++k) s += K.quad_char(K.add(K.exp(3ull * k), b));
  } else {
    std::uint32_t la = K.log(a);
    for (std::uint32_t k = 0; k + 1 < K.q(); ++k) {
      FqElement v = K.add(K.add(K.exp(3ull * k), K.exp(static_cast<std::uint64_t>(la) + k)), b);
      s += K.quad_char(v);
    }
  }
  return -s;
}

int split_sign(const EllipticCurveFF& E, const ResidueField& R, FqElement root) {
  const Field& K = R.field();
  FqElement a = R.eval(E.A(), root);
  FqElement b = R.eval(E.B(), root);
  if (a.is_zero()) throw ValidationError("split test needs multiplicative reduction");
  // Node at x0 = -3b / (2a); the tangent slopes there are +-sqrt(3 x0).
  FqElement x0 = K.neg(K.div(K.mul(K.from_int(3), b), K.mul(K.from_int(2), a)));
  int s = K.quad_char(K.mul(K.from_int(3), x0));
  if (s == 0) throw InvariantError("degenerate node in split test");
  return s;
}

TwistTable::TwistTable(const EllipticCurveFF& E, const PrimeTable& T) : E_(&E), T_(&T) {
  if (&T.base() != &E.field() && !(T.base().spec() == E.field().spec())) {
    throw ValidationError("prime table and curve use different fields");
  }
  int K = T.max_degree();
  std::uint64_t q = E.field().q();
  data_.resize(static_cast<std::size_t>(K) + 1);
  for (int d = 1; d <= K; ++d) {
    const ResidueField& R = T.residue(d);
    std::uint64_t norm = static_cast<std::uint64_t>(ipow(q, d));
    auto ps = T.primes(d);
    auto& out = data_[static_cast<std::size_t>(d)];
    out.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      TwistPrime& tp = out[i];
      tp.type = E.reduction_at(ps[i].P);
      tp.a = trace_by_point_count(E, R, ps[i].root);
      if (tp.type == Reduction::kGood && static_cast<__int128>(tp.a) * tp.a > 4 * static_cast<__int128>(norm)) {
        throw InvariantError("Hasse bound violated at " + to_string(ps[i].P));
      }
      if (tp.type == Reduction::kMultiplicative && tp.a != split_sign(E, R, ps[i].root)) {
        throw InvariantError("split test disagrees with the point count at " + to_string(ps[i].P));
      }
      if (tp.type == Reduction::kAdditive && tp.a != 0) {
        throw InvariantError("additive prime with nonzero trace at " + to_string(ps[i].P) +
                             "; the model is not minimal there");
      }
      int J = K / d;
      tp.s.assign(static_cast<std::size_t>(J) + 1, 0);
      if (tp.type == Reduction::kGood) {
        tp.s[0] = 2;
        if (J >= 1) tp.s[1] = tp.a;
        for (int j = 1; j < J; ++j) {
          tp.s[static_cast<std::size_t>(j) + 1] =
              tp.a * tp.s[static_cast<std::size_t>(j)] - static_cast<std::int64_t>(norm) * tp.s[static_cast<std::size_t>(j) - 1];
        }
      } else if (tp.type == Reduction::kMultiplicative) {
        tp.s[0] = 1;
        for (int j = 1; j <= J; ++j) tp.s[static_cast<std::size_t>(j)] = tp.s[static_cast<std::size_t>(j) - 1] * tp.a;
      }
      index_.emplace(ps[i].P, std::pair{d, i});
    }
  }

  // Calibration: degrees and root numbers of L(T, E) and of one degree-1 twist.
  conductor_[0] = conductor_[1] = -1;
  auto c0 = twist_series(*this, Poly::one());
  int m0 = visible_degree(c0);
  if (m0 >= 0) {
    conductor_[0] = m0 + 4;
    __int128 top = c0[static_cast<std::size_t>(m0)];
    __int128 qm = ipow(q, m0);
    if (top != qm && top != -qm) throw InvariantError("L(T, E) has a leading coefficient other than +-q^m");
    root_number_ = top > 0 ? 1 : -1;
  }
  auto c1 = twist_series(*this, first_admissible(E, 1));
  int m1 = visible_degree(c1);
  if (m1 >= 0) conductor_[1] = m1 + 2;
  detected_ = conductor_[0] >= 0 && conductor_[1] >= 0;
  if (auto decl = E.config().conductor_degree) {
    for (int& c : conductor_) {
      if (c >= 0 && c != *decl) {
        throw ValidationError("declared conductor_degree " + std::to_string(*decl) + " disagrees with the computed " +
                              std::to_string(c));
      }
      c = *decl;
    }
  }
  if (auto decl = E.config().root_number) {
    if (m0 >= 0 && *decl != root_number_) throw ValidationError("declared root_number disagrees with L(T, E)");
    root_number_ = *decl;
  } else if (m0 < 0) {
    throw BudgetError("point-count budget too small to read the root number of E; raise it or declare root_number");
  }
}

const TwistPrime& TwistTable::prime(const Poly& P) const {
  auto it = index_.find(P);
  if (it == index_.end()) throw ValidationError(to_string(P) + " is not a prime within the point-count budget");
  return data_[static_cast<std::size_t>(it->second.first)][it->second.second];
}

std::int64_t TwistTable::lambda(const Poly& f) const {
  if (!f.is_monic()) throw ValidationError("lambda needs a monic polynomial");
  if (f.degree() == 0) return 1;
  const Field& F = E_->field();
  std::int64_t r = 1;
  for (const auto& [P, e] : factor(F, f).factors) {
    const TwistPrime& tp = prime(P);
    r *= a_of_prime_power(tp, static_cast<std::uint64_t>(ipow(F.q(), P.degree())), e);
  }
  return r;
}

int TwistTable::conductor_degree(int n) const {
  int c = conductor_[n % 2];
  if (c < 0) {
    throw BudgetError("point-count budget too small to detect the conductor degree; raise it or declare "
                      "conductor_degree");
  }
  return c;
}

TwistPrimeSums twist_prime_sums(const TwistTable& TT, const Poly& D) {
  const PrimeTable& T = TT.primes();
  int K = TT.budget();
  TwistPrimeSums out;
  out.C.assign(static_cast<std::size_t>(K) + 1, 0);
  out.A.assign(static_cast<std::size_t>(K) + 1, 0);
  std::vector<int> chi;
  for (int d = 1; d <= K; ++d) {
    auto ps = T.primes(d);
    chi.resize(ps.size());
    if (D.degree() == 0) {
      std::fill(chi.begin(), chi.end(), 1);
    } else {
      T.symbols(D, d, chi);
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (chi[i] == 0) continue;
      const TwistPrime& tp = TT.prime(d, i);
      out.A[static_cast<std::size_t>(d)] += d * chi[i] * tp.a;
      int sgn = 1;
      for (int j = 1; d * j <= K; ++j) {
        sgn *= chi[i];
        out.C[static_cast<std::size_t>(d * j)] += d * sgn * tp.s[static_cast<std::size_t>(j)];
      }
    }
  }
  return out;
}

std::vector<std::int64_t> twist_series(const TwistTable& TT, const Poly& D) {
  return exp_log_series(twist_prime_sums(TT, D).C);
}

std::vector<std::int64_t> twist_series_enumeration(const TwistTable& TT, const Poly& D, int K) {
  const Field& F = TT.curve().field();
  std::vector<std::int64_t> c(static_cast<std::size_t>(K) + 1, 0);
  for (int k = 0; k <= K; ++k) {
    std::int64_t s = 0;
    for (const Poly& f : MonicRange(F, k)) {
      int chi = D.degree() == 0 ? 1 : chi_definition(F, D, f);
      if (chi != 0) s += chi * TT.lambda(f);
    }
    c[static_cast<std::size_t>(k)] = s;
  }
  return c;
}

bool in_family(const EllipticCurveFF& E, const Poly& D) {
  const Field& F = E.field();
  return D.is_monic() && is_squarefree(F, D) && gcd(F, D, E.discriminant()).degree() == 0;
}

LPolynomial twist_l(const TwistTable& TT, const Poly& D, std::optional<int> sign_hint) {
  const EllipticCurveFF& E = TT.curve();
  if (!in_family(E, D)) throw ValidationError("D must be monic, squarefree and coprime to the discriminant");
  std::uint64_t q = E.field().q();
  int n = D.degree();
  int m = TT.twist_degree(n);
  if (m < 0) throw InvariantError("negative twist degree");
  int K = TT.budget();
  if (2 * K + 1 < m) {
    throw BudgetError("point-count budget " + std::to_string(K) + " cannot determine a degree-" + std::to_string(m) +
                      " twist; raise the budget to " + std::to_string(m / 2) + " or lower n");
  }
  // Coefficient bound for roots on |T| = 1/q guards the 64-bit storage.
  double top = std::lgamma(m + 1.0) - 2 * std::lgamma(m / 2 + 1.0) + m * std::log(double(q));
  if (top > 43.0) throw BudgetError("twist coefficients overflow 64-bit integers; lower n");

  std::vector<std::int64_t> c = twist_series(TT, D);
  LPolynomial L;
  L.family = Family::kEllipticTwist;
  L.q = static_cast<std::uint32_t>(q);
  L.n = n;
  L.genus = m / 2;
  L.weight = 1;
  L.coeffs.assign(static_cast<std::size_t>(m) + 1, 0);
  for (int k = 0; k <= std::min(K, m); ++k) L.coeffs[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)];
  for (int k = m + 1; k <= K; ++k) {
    if (c[static_cast<std::size_t>(k)] != 0) {
      throw InvariantError("twist has a nonzero coefficient beyond the conductor degree " + std::to_string(m));
    }
  }
  // c~_{m-k} = eps q^{m-2k} c~_k.
  auto mirror = [&](int k, int eps) {
    return static_cast<__int128>(eps) * ipow(q, m - 2 * k) * L.coeffs[static_cast<std::size_t>(k)];
  };
  int lo = std::max(0, m - K);
  int eps = 0;
  for (int k = lo; 2 * k <= m && eps == 0; ++k) {
    __int128 ck = L.coeffs[static_cast<std::size_t>(k)];
    __int128 cm = L.coeffs[static_cast<std::size_t>(m - k)];
    if (ck == 0) continue;
    __int128 base = ipow(q, m - 2 * k) * ck;
    if (cm == base) eps = 1;
    else if (cm == -base) eps = -1;
    else throw InvariantError("twist coefficients contradict the functional equation at index " + std::to_string(k));
  }
  auto complete = [&](int e) {
    LPolynomial M = L;
    M.root_number = e;
    for (int k = 0; 2 * k < m; ++k) {
      if (m - k > std::min(K, m)) M.coeffs[static_cast<std::size_t>(m - k)] = static_cast<std::int64_t>(mirror(k, e));
    }
    return M;
  };
  if (eps == 0) {
    // No informative overlap; keep the sign whose completion satisfies RH.
    std::vector<int> ok;
    for (int e : {1, -1}) {
      try {
        eigenphases(complete(e), 1e-8);
        ok.push_back(e);
      } catch (const InvariantError&) {
      }
    }
    if (ok.size() == 1) {
      eps = ok[0];
    } else if (sign_hint && std::find(ok.begin(), ok.end(), *sign_hint) != ok.end()) {
      eps = *sign_hint;
    } else {
      throw BudgetError("point-count budget leaves the root number undetermined; raise the budget");
    }
  }
  LPolynomial out = complete(eps);
  for (int k = lo; 2 * k <= m; ++k) {
    if (mirror(k, eps) != out.coeffs[static_cast<std::size_t>(m - k)]) {
      throw InvariantError("twist coefficients contradict the functional equation at index " + std::to_string(k));
    }
  }
  if (functional_equation_residual(out) > 1e-8) throw InvariantError("twist functional-equation residual above 1e-8");
  return out;
}

int chi_of_M(const EllipticCurveFF& E, const Poly& D) {
  int r = 1;
  for (const auto& [P, type] : E.bad_primes()) {
    if (type == Reduction::kMultiplicative) r *= symbol_definition(E.field(), P, D);
  }
  return r;
}

int plus_family_sign(const TwistTable& TT, int n) {
  for (const Poly& D : MonicRange(TT.curve().field(), n)) {
    if (!in_family(TT.curve(), D)) continue;
    try {
      return twist_l(TT, D).root_number * chi_of_M(TT.curve(), D);
    } catch (const BudgetError&) {
      // Ambiguous overlap for this D; try the next one.
    }
  }
  throw BudgetError("no twist of degree " + std::to_string(n) + " has a determined root number");
}

bool in_plus_family(const TwistTable& TT, const Poly& D, int sign) {
  return in_family(TT.curve(), D) && chi_of_M(TT.curve(), D) == sign;
}

}  // namespace fflab
