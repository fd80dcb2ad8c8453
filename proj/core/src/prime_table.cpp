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

#include "fflab/prime_table.hpp"

#include <algorithm>

#include "fflab/errors.hpp"

namespace fflab {

namespace {

Field make_big(const Field& base, int d) {
  std::uint64_t order = 1;
  for (int i = 0; i < d; ++i) {
    order *= base.q();
    if (order > kMaxTableFieldOrder) {
      throw BudgetError("residue field of degree " + std::to_string(d) + " over F_" +
                        std::to_string(base.q()) + " exceeds the table limit; lower the degree budget");
    }
  }
  return Field::make(base.p(), base.e() * static_cast<std::uint32_t>(d), kMaxTableFieldOrder);
}

}  // namespace

ResidueField::ResidueField(const Field& base, int d)
    : big_(make_big(base, d)), d_(d), q_(base.q()), embed_(base.q()), restrict_(big_.q(), UINT32_MAX) {
  // Image of the generator of F_q over F_p: a root of the base modulus.
  FqElement rho = big_.zero();
  if (base.e() > 1) {
    const auto& m = base.spec().modulus;
    bool found = false;
    for (std::uint32_t i = 0; i < big_.q() && !found; ++i) {
      FqElement x(i);
      FqElement acc;
      for (std::size_t k = m.size(); k-- > 0;) acc = big_.add(big_.mul(acc, x), FqElement(m[k]));
      if (acc.is_zero()) {
        rho = x;
        found = true;
      }
    }
    if (!found) throw InvariantError("base modulus has no root in the residue field");
  }
  for (std::uint32_t c = 0; c < base.q(); ++c) {
    auto digits = base.digits(FqElement(c));
    FqElement acc;
    FqElement power = big_.one();
    for (auto dgt : digits) {
      acc = big_.add(acc, big_.mul(FqElement(dgt), power));
      power = big_.mul(power, rho);
    }
    if (base.e() == 1) acc = FqElement(c);
    embed_[c] = acc;
    restrict_[acc.index()] = c;
  }
}

FqElement ResidueField::restrict_to_base(FqElement x) const {
  std::uint32_t v = restrict_[x.index()];
  if (v == UINT32_MAX) throw InvariantError("element is not in the base field");
  return FqElement(v);
}

FqElement ResidueField::eval(const Poly& f, FqElement x) const {
  FqElement acc;
  const auto& c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = big_.add(big_.mul(acc, x), embed_[c[i].index()]);
  return acc;
}

PrimeTable::PrimeTable(const Field& base, int max_degree)
    : base_(&base), max_degree_(max_degree), residue_(static_cast<std::size_t>(max_degree) + 1),
      primes_(static_cast<std::size_t>(max_degree) + 1) {
  if (max_degree < 0) throw ValidationError("negative prime table degree");
  for (int d = 1; d <= max_degree; ++d) {
    residue_[static_cast<std::size_t>(d)] = std::make_unique<ResidueField>(base, d);
    const ResidueField& R = *residue_[static_cast<std::size_t>(d)];
    const Field& K = R.field();
    std::vector<char> seen(K.q(), 0);
    auto& out = primes_[static_cast<std::size_t>(d)];
    std::vector<FqElement> orbit;
    for (std::uint32_t i = 0; i < K.q(); ++i) {
      if (seen[i]) continue;
      orbit.clear();
      FqElement x(i);
      do {
        seen[x.index()] = 1;
        orbit.push_back(x);
        x = R.frobenius(x);
      } while (x.index() != i);
      if (static_cast<int>(orbit.size()) != d) continue;
      // prod (t - x_j) over the orbit, coefficients land in F_q.
      std::vector<FqElement> c{K.one()};
      for (FqElement r : orbit) {
        std::vector<FqElement> next(c.size() + 1);
        FqElement nr = K.neg(r);
        for (std::size_t k = 0; k < c.size(); ++k) {
          next[k + 1] = K.add(next[k + 1], c[k]);
          next[k] = K.add(next[k], K.mul(c[k], nr));
        }
        c = std::move(next);
      }
      for (auto& v : c) v = R.restrict_to_base(v);
      out.push_back(PrimeEntry{Poly(std::move(c)), orbit.front()});
    }
    std::sort(out.begin(), out.end(), [](const PrimeEntry& a, const PrimeEntry& b) { return a.P < b.P; });
  }
}

std::size_t PrimeTable::size() const {
  std::size_t n = 0;
  for (const auto& v : primes_) n += v.size();
  return n;
}

void PrimeTable::symbols(const Poly& f, int d, std::span<int> out) const {
  const ResidueField& R = residue(d);
  const Field& K = R.field();
  const auto& ps = primes(d);
  std::vector<FqElement> c(f.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = R.embed(f.coeffs()[i]);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    FqElement x = ps[j].root;
    FqElement acc;
    for (std::size_t i = c.size(); i-- > 0;) acc = K.add(K.mul(acc, x), c[i]);
    out[j] = K.quad_char(acc);
  }
}

}  // namespace fflab
