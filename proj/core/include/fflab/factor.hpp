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

// Irreducibility, factorization and related arithmetic functions on F_q[t].

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fflab/field.hpp"
#include "fflab/poly.hpp"

namespace fflab {

inline constexpr std::uint64_t kDefaultFactorSeed = 0x5eed0fac7042ULL;

struct Factorization {
  FqElement unit;
  // Monic irreducible factors in Poly order, with multiplicities.
  std::vector<std::pair<Poly, int>> factors;
};

// Rabin's test. f must be monic of degree >= 1.
bool is_irreducible(const Field& F, const Poly& f);
// Trial division by every monic polynomial of degree <= deg f / 2.
bool is_irreducible_trial(const Field& F, const Poly& f);

// Squarefree decomposition, distinct-degree and Cantor-Zassenhaus splitting.
Factorization factor(const Field& F, const Poly& f, std::uint64_t seed = kDefaultFactorSeed);
Poly expand(const Field& F, const Factorization& fac);

bool is_squarefree(const Field& F, const Poly& f);

// d(P) when f = P^k with P irreducible, else 0.
int von_mangoldt(const Field& F, const Poly& f);

// Number of monic irreducibles of degree n over F_q.
std::uint64_t prime_count(std::uint64_t q, int n);

// Number of monic squarefree polynomials of degree n.
std::uint64_t squarefree_count(std::uint64_t q, int n);

}  // namespace fflab
