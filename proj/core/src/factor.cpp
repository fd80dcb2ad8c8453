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

#include "fflab/factor.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "fflab/errors.hpp"

namespace fflab {

namespace {

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

int moebius(int n) {
  int r = 1;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      r = -r;
    }
  }
  if (n > 1) r = -r;
  return r;
}

Poly pth_root(const Field& F, const Poly& f) {
  std::uint64_t root_exp = F.q() / F.p();
  std::vector<FqElement> c(static_cast<std::size_t>(f.degree() / static_cast<int>(F.p())) + 1);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = F.pow(f.coeff(k * F.p()), root_exp);
  return Poly(std::move(c));
}

// Monic f -> list of (squarefree part, multiplicity).
void squarefree_parts(const Field& F, const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) {
  if (f.degree() < 1) return;
  Poly c = gcd(F, f, derivative(F, f));
  Poly w = quo(F, f, c);
  int i = 1;
  while (!w.is_one()) {
    Poly y = gcd(F, w, c);
    Poly fac = quo(F, w, y);
    if (fac.degree() > 0) out.emplace_back(fac, i * mult);
    ++i;
    w = y;
    c = quo(F, c, y);
  }
  if (c.degree() > 0) squarefree_parts(F, pth_root(F, c), mult * static_cast<int>(F.p()), out);
}

// Squarefree monic g -> list of (product of all degree-d factors, d).
std::vector<std::pair<Poly, int>> distinct_degree(const Field& F, Poly g) {
  std::vector<std::pair<Poly, int>> out;
  Poly x = Poly::t();
  Poly h = rem(F, x, g);
  for (int d = 1; 2 * d <= g.degree(); ++d) {
    h = powmod(F, h, F.q(), g);
    Poly common = gcd(F, g, sub(F, h, x));
    if (!common.is_one()) {
      out.emplace_back(common, d);
      g = quo(F, g, common);
      h = rem(F, h, g);
    }
  }
  if (g.degree() > 0) out.emplace_back(g, g.degree());
  return out;
}

void equal_degree(const Field& F, const Poly& g, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  std::uniform_int_distribution<std::uint32_t> coef(0, F.q() - 1);
  std::uint64_t half = (F.q() - 1) / 2;
  while (true) {
    std::vector<FqElement> a(static_cast<std::size_t>(g.degree()));
    for (auto& c : a) c = FqElement(coef(rng));
    Poly base(std::move(a));
    if (base.degree() < 1) continue;
    // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}
    Poly norm = base;
    Poly conj = base;
    for (int i = 1; i < d; ++i) {
      conj = powmod(F, conj, F.q(), g);
      norm = mulmod(F, norm, conj, g);
    }
    Poly b = sub(F, powmod(F, norm, half, g), Poly::one());
    Poly split = gcd(F, g, b);
    if (split.degree() > 0 && split.degree() < g.degree()) {
      equal_degree(F, split, d, rng, out);
      equal_degree(F, quo(F, g, split), d, rng, out);
      return;
    }
  }
}

}  // namespace

bool is_irreducible(const Field& F, const Poly& f) {
  if (!f.is_monic()) throw ValidationError("is_irreducible expects a monic polynomial");
  int n = f.degree();
  if (n < 1) throw ValidationError("is_irreducible expects degree >= 1");
  if (n == 1) return true;
  Poly x = rem(F, Poly::t(), f);
  std::vector<Poly> frob(static_cast<std::size_t>(n) + 1);
  frob[0] = x;
  for (int k = 1; k <= n; ++k) frob[static_cast<std::size_t>(k)] = powmod(F, frob[static_cast<std::size_t>(k - 1)], F.q(), f);
  if (frob[static_cast<std::size_t>(n)] != x) return false;
  for (int r : prime_divisors(n)) {
    Poly g = gcd(F, f, sub(F, frob[static_cast<std::size_t>(n / r)], x));
    if (!g.is_one()) return false;
  }
  return true;
}

bool is_irreducible_trial(const Field& F, const Poly& f) {
  if (!f.is_monic()) throw ValidationError("is_irreducible expects a monic polynomial");
  if (f.degree() < 1) throw ValidationError("is_irreducible expects degree >= 1");
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    for (const Poly& g : MonicRange(F, d)) {
      if (rem(F, f, g).is_zero()) return false;
    }
  }
  return true;
}

Factorization factor(const Field& F, const Poly& f, std::uint64_t seed) {
  if (f.is_zero()) throw ValidationError("cannot factor the zero polynomial");
  Factorization out;
  out.unit = f.leading();
  Poly m = make_monic(F, f);
  std::vector<std::pair<Poly, int>> parts;
  squarefree_parts(F, m, 1, parts);
  std::mt19937_64 rng(seed);
  std::map<Poly, int> acc;
  for (const auto& [part, mult] : parts) {
    for (const auto& [chunk, d] : distinct_degree(F, part)) {
      std::vector<Poly> irr;
      equal_degree(F, chunk, d, rng, irr);
      for (auto& P : irr) acc[P] += mult;
    }
  }
  out.factors.assign(acc.begin(), acc.end());
  return out;
}

Poly expand(const Field& F, const Factorization& fac) {
  Poly r = Poly::constant(fac.unit);
  for (const auto& [P, k] : fac.factors) r = mul(F, r, pow(F, P, static_cast<unsigned>(k)));
  return r;
}

bool is_squarefree(const Field& F, const Poly& f) {
  if (f.is_zero()) return false;
  if (f.degree() < 1) return true;
  return gcd(F, f, derivative(F, f)).is_one();
}

int von_mangoldt(const Field& F, const Poly& f) {
  if (f.degree() < 1) return 0;
  auto fac = factor(F, f);
  return fac.factors.size() == 1 ? fac.factors[0].first.degree() : 0;
}

std::uint64_t prime_count(std::uint64_t q, int n) {
  if (n < 1) return 0;
  __int128 total = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    int mu = moebius(d);
    if (mu == 0) continue;
    __int128 term = 1;
    for (int i = 0; i < n / d; ++i) term *= q;
    total += mu * term;
  }
  return static_cast<std::uint64_t>(total / n);
}

std::uint64_t squarefree_count(std::uint64_t q, int n) {
  if (n == 0) return 1;
  if (n == 1) return q;
  std::uint64_t r = q - 1;
  for (int i = 0; i < n - 1; ++i) r *= q;
  return r;
}

}  // namespace fflab
