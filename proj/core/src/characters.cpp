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

#include "fflab/characters.hpp"

#include "fflab/errors.hpp"
#include "fflab/factor.hpp"

namespace fflab {

namespace {

int unit_symbol(const Field& F, FqElement c, int degree) {
  int e = F.quad_char(c);
  return (degree % 2 == 0) ? (e == 0 ? 0 : 1) : e;
}

}  // namespace

int symbol_definition(const Field& F, const Poly& P, const Poly& f) {
  if (!P.is_monic() || P.degree() < 1 || !is_irreducible(F, P)) {
    throw ValidationError("symbol_definition needs a monic irreducible modulus");
  }
  Poly r = rem(F, f, P);
  if (r.is_zero()) return 0;
  // r^{(q^d-1)/2} = (r * r^q * ... * r^{q^{d-1}})^{(q-1)/2}; the inner
  // product is the norm of r and lies in F_q.
  Poly norm = r;
  Poly conj = r;
  for (int i = 1; i < P.degree(); ++i) {
    conj = powmod(F, conj, F.q(), P);
    norm = mulmod(F, norm, conj, P);
  }
  if (norm.degree() != 0) throw InvariantError("norm left the base field");
  return F.quad_char(norm.coeff(0));
}

int chi_definition(const Field& F, const Poly& D, const Poly& f) {
  if (f.is_zero()) return D.degree() == 0 ? 1 : 0;
  int result = unit_symbol(F, f.leading(), D.degree());
  if (f.degree() == 0) return result;
  for (const auto& [P, k] : factor(F, f).factors) {
    int s = symbol_definition(F, P, D);
    if (s == 0) return 0;
    if (k % 2 == 1) result *= s;
  }
  return result;
}

int chi_reciprocity(const Field& F, const Poly& D, const Poly& f) {
  if (F.q() % 4 != 1) throw ValidationError("reciprocity path needs q = 1 mod 4");
  if (f.is_zero()) return D.degree() == 0 ? 1 : 0;
  int result = unit_symbol(F, f.leading(), D.degree());
  // Invariant: chi = result * (a/b) with b monic.
  Poly a = D;
  Poly b = make_monic(F, f);
  while (b.degree() > 0) {
    a = rem(F, a, b);
    if (a.is_zero()) return 0;
    result *= unit_symbol(F, a.leading(), b.degree());
    a = make_monic(F, a);
    std::swap(a, b);
  }
  return result;
}

QuadChar::QuadChar(const Field& F, Poly D) : F_(&F), D_(std::move(D)), reciprocity_(F.q() % 4 == 1) {
  if (!D_.is_monic()) throw ValidationError("character modulus D must be monic");
  if (!is_squarefree(F, D_)) throw ValidationError("character modulus D must be squarefree");
}

}  // namespace fflab
