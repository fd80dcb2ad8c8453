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

// Finite fields F_q, q = p^e, with table-driven arithmetic.
//
// An element is stored as its index sum_i c_i p^i, where c_0..c_{e-1} are
// its coordinates in the power basis of F_p[x]/(modulus). Index 0 is zero
// and index 1 is one. Multiplication goes through discrete log tables and,
// for e > 1, addition goes through a Zech logarithm table.

#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fflab {

class FqElement {
 public:
  constexpr FqElement() = default;
  constexpr explicit FqElement(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }
  constexpr bool is_zero() const { return index_ == 0; }

  friend constexpr bool operator==(FqElement, FqElement) = default;
  friend constexpr auto operator<=>(FqElement, FqElement) = default;

 private:
  std::uint32_t index_ = 0;
};

inline constexpr std::uint64_t kMaxUserFieldOrder = 1u << 16;
inline constexpr std::uint64_t kMaxTableFieldOrder = 1u << 22;

struct FieldSpec {
  std::uint32_t p = 0;
  std::uint32_t e = 1;
  // Monic modulus over F_p, low degree first, size e + 1.
  std::vector<std::uint32_t> modulus;

  std::uint64_t q() const;

  // Least irreducible monic modulus of degree e, ordered by the base-p
  // little-endian value of its lower coefficients.
  static FieldSpec make(std::uint32_t p, std::uint32_t e);

  // "p^e:m0,m1,...,me"
  std::string header() const;
  static FieldSpec parse_header(std::string_view text);

  // Throws ValidationError. max_order caps q.
  void validate(std::uint64_t max_order = kMaxUserFieldOrder) const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime_u64(std::uint64_t n);

class Field {
 public:
  explicit Field(const FieldSpec& spec, std::uint64_t max_order = kMaxUserFieldOrder);

  // Convenience: F_q with the canonical modulus.
  static Field make(std::uint32_t p, std::uint32_t e = 1,
                    std::uint64_t max_order = kMaxUserFieldOrder);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t p() const { return spec_.p; }
  std::uint32_t e() const { return spec_.e; }
  std::uint32_t q() const { return q_; }

  FqElement zero() const { return FqElement(0); }
  FqElement one() const { return FqElement(1); }
  FqElement element(std::uint32_t index) const;
  FqElement from_int(std::int64_t v) const;
  FqElement from_digits(std::span<const std::uint32_t> digits) const;
  std::vector<std::uint32_t> digits(FqElement a) const;

  FqElement add(FqElement a, FqElement b) const {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (spec_.e == 1) {
      std::uint32_t s = a.index() + b.index();
      return FqElement(s >= q_ ? s - q_ : s);
    }
    std::uint32_t la = log_[a.index()];
    std::uint32_t lb = log_[b.index()];
    std::uint32_t d = lb >= la ? lb - la : lb + order_ - la;
    std::int32_t z = zech_[d];
    if (z < 0) return zero();
    return FqElement(exp_[la + static_cast<std::uint32_t>(z)]);
  }

  FqElement neg(FqElement a) const {
    if (a.is_zero()) return a;
    if (spec_.e == 1) return FqElement(q_ - a.index());
    return FqElement(exp_[log_[a.index()] + order_ / 2]);
  }

  FqElement sub(FqElement a, FqElement b) const { return add(a, neg(b)); }

  FqElement mul(FqElement a, FqElement b) const {
    if (a.is_zero() || b.is_zero()) return zero();
    return FqElement(exp_[log_[a.index()] + log_[b.index()]]);
  }

  FqElement inv(FqElement a) const;
  FqElement div(FqElement a, FqElement b) const { return mul(a, inv(b)); }
  FqElement pow(FqElement a, std::uint64_t k) const;

  // Quadratic character of F_q^x; 0 at zero.
  int quad_char(FqElement a) const {
    if (a.is_zero()) return 0;
    return (log_[a.index()] & 1u) ? -1 : 1;
  }

  FqElement generator() const { return FqElement(exp_[1]); }
  std::uint32_t log(FqElement a) const;
  FqElement exp(std::uint64_t k) const { return FqElement(exp_[k % order_]); }

  // a -> a^p
  FqElement frobenius(FqElement a) const { return pow(a, spec_.p); }

 private:
  FieldSpec spec_;
  std::uint32_t q_ = 0;
  std::uint32_t order_ = 0;  // q - 1
  std::vector<std::uint32_t> exp_;   // size 2 * order_
  std::vector<std::uint32_t> log_;   // size q_, log_[0] unused
  std::vector<std::int32_t> zech_;   // e > 1 only; -1 marks 1 + g^k = 0
};

}  // namespace fflab
