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

// Quadratic residue symbols on F_q[t].

#pragma once

#include "fflab/field.hpp"
#include "fflab/poly.hpp"

namespace fflab {

// (f/P) for irreducible monic P: +1 if f is a nonzero square mod P, -1 if a
// non-square, 0 if P | f. Evaluated as f^{(|P|-1)/2} in F_q[t]/P.
int symbol_definition(const Field& F, const Poly& P, const Poly& f);

// chi_D(f) = (D/f) as a product of symbol_definition(P, D)^k over the
// factorization of f. A leading unit c of f contributes eta(c)^{deg D}, so
// that chi_D is the character f -> (f/D) modulo D.
int chi_definition(const Field& F, const Poly& D, const Poly& f);

// Same value through a Euclidean loop using (a/b) = (b/a) for monic a, b.
// Only valid when q = 1 mod 4.
int chi_reciprocity(const Field& F, const Poly& D, const Poly& f);

class QuadChar {
 public:
  // D must be monic and squarefree.
  QuadChar(const Field& F, Poly D);

  const Poly& D() const { return D_; }
  int degree() const { return D_.degree(); }
  bool uses_reciprocity() const { return reciprocity_; }

  int operator()(const Poly& f) const {
    return reciprocity_ ? chi_reciprocity(*F_, D_, f) : chi_definition(*F_, D_, f);
  }

 private:
  const Field* F_;
  Poly D_;
  bool reciprocity_;
};

}  // namespace fflab
