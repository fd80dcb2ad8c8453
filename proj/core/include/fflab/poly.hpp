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

// Dense univariate polynomials over F_q. Operations take the field as an
// explicit argument; a Poly does not know its field.

#pragma once

#include <cstdint>
#include <iterator>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

class Poly {
 public:
  Poly() = default;
  // Trailing zero coefficients are stripped.
  explicit Poly(std::vector<FqElement> coeffs);

  static Poly constant(FqElement c);
  static Poly monomial(FqElement c, int degree);
  static Poly one() { return constant(FqElement(1)); }
  static Poly t() { return monomial(FqElement(1), 1); }

  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  FqElement coeff(std::size_t i) const { return i < c_.size() ? c_[i] : FqElement(); }
  FqElement leading() const { return c_.empty() ? FqElement() : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == FqElement(1); }
  bool is_one() const { return c_.size() == 1 && c_[0] == FqElement(1); }
  const std::vector<FqElement>& coeffs() const { return c_; }

  friend bool operator==(const Poly&, const Poly&) = default;
  // Degree first, then the base-q counter from the top coefficient down.
  friend bool operator<(const Poly& a, const Poly& b);

 private:
  void trim();
  std::vector<FqElement> c_;
};

Poly add(const Field& F, const Poly& a, const Poly& b);
Poly sub(const Field& F, const Poly& a, const Poly& b);
Poly neg(const Field& F, const Poly& a);
Poly scale(const Field& F, const Poly& a, FqElement c);
Poly mul(const Field& F, const Poly& a, const Poly& b);
// a = q*b + r with deg r < deg b. b must be nonzero.
std::pair<Poly, Poly> divmod(const Field& F, const Poly& a, const Poly& b);
Poly rem(const Field& F, const Poly& a, const Poly& b);
Poly quo(const Field& F, const Poly& a, const Poly& b);
// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Field& F, const Poly& a, const Poly& b);
Poly make_monic(const Field& F, const Poly& a);
Poly derivative(const Field& F, const Poly& a);
Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Field& F, Poly base, std::uint64_t k, const Poly& m);
Poly pow(const Field& F, const Poly& base, unsigned k);
FqElement eval(const Field& F, const Poly& f, FqElement x);

// Monic polynomials of degree n indexed by the little-endian base-q counter
// on (c_0, ..., c_{n-1}).
std::uint64_t monic_count(const Field& F, int n);
Poly monic_from_index(const Field& F, int n, std::uint64_t index);
std::uint64_t monic_index(const Field& F, const Poly& f);

// Every monic polynomial of degree n exactly once, in index order.
class MonicRange {
 public:
  class iterator {
   public:
    using value_type = Poly;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    iterator(const Field* F, int n, std::uint64_t index);
    const Poly& operator*() const { return cur_; }
    const Poly* operator->() const { return &cur_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

   private:
    const Field* F_ = nullptr;
    int n_ = 0;
    std::uint64_t index_ = 0;
    std::vector<FqElement> digits_;
    Poly cur_;
  };

  MonicRange(const Field& F, int n, std::uint64_t first = 0, std::uint64_t last = UINT64_MAX);
  iterator begin() const { return iterator(F_, n_, first_); }
  iterator end() const { return iterator(nullptr, n_, last_); }
  std::uint64_t size() const { return last_ - first_; }

 private:
  const Field* F_;
  int n_;
  std::uint64_t first_;
  std::uint64_t last_;
};

// "c0,c1,...,cn" with each c_i the element index.
std::string to_string(const Poly& f);
Poly parse_poly(const Field& F, std::string_view text);

}  // namespace fflab
