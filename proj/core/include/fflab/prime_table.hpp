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

// Monic irreducibles of F_q[t] up to a degree bound, each stored with one
// root in an explicit copy of F_{q^d}. Character values and point counts
// at a prime P of degree d then reduce to arithmetic in F_{q^d}.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fflab/field.hpp"
#include "fflab/poly.hpp"

namespace fflab {

// F_{q^d} together with the embedding of F_q.
class ResidueField {
 public:
  ResidueField(const Field& base, int d);

  const Field& field() const { return big_; }
  int degree() const { return d_; }
  FqElement embed(FqElement c) const { return embed_[c.index()]; }
  // Inverse of embed on the image; throws when x is outside F_q.
  FqElement restrict_to_base(FqElement x) const;
  FqElement frobenius(FqElement x) const { return big_.pow(x, q_); }
  // Horner evaluation of an F_q[t] polynomial at x.
  FqElement eval(const Poly& f, FqElement x) const;

 private:
  Field big_;
  int d_;
  std::uint32_t q_;
  std::vector<FqElement> embed_;
  std::vector<std::uint32_t> restrict_;  // indexed by big element, UINT32_MAX if not in F_q
};

struct PrimeEntry {
  Poly P;
  FqElement root;  // in residue(d(P))
};

class PrimeTable {
 public:
  PrimeTable(const Field& base, int max_degree);

  const Field& base() const { return *base_; }
  int max_degree() const { return max_degree_; }
  const ResidueField& residue(int d) const { return *residue_[static_cast<std::size_t>(d)]; }
  std::span<const PrimeEntry> primes(int d) const { return primes_[static_cast<std::size_t>(d)]; }
  std::size_t size() const;

  // Quadratic character of f evaluated at each prime of degree d, i.e.
  // (f/P). Written to out, which must have room for primes(d).size().
  void symbols(const Poly& f, int d, std::span<int> out) const;

 private:
  const Field* base_;
  int max_degree_;
  std::vector<std::unique_ptr<ResidueField>> residue_;
  std::vector<std::vector<PrimeEntry>> primes_;
};

}  // namespace fflab
