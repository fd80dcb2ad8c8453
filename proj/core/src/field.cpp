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

#include "fflab/field.hpp"

#include <charconv>
#include <sstream>

#include "fflab/errors.hpp"
#include "fflab/factor.hpp"
#include "fflab/poly.hpp"

namespace fflab {

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint32_t k) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < k; ++i) r *= b;
  return r;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Arithmetic on coordinate vectors, used only while building the tables.
class SlowArith {
 public:
  explicit SlowArith(const FieldSpec& s) : p_(s.p), e_(s.e), mod_(s.modulus) {}

  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a,
                                 const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint64_t> prod(2 * e_ - 1, 0);
    for (std::uint32_t i = 0; i < e_; ++i) {
      if (a[i] == 0) continue;
      for (std::uint32_t j = 0; j < e_; ++j) {
        prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p_;
      }
    }
    for (std::uint32_t k = 2 * e_ - 1; k-- > e_;) {
      std::uint64_t c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (std::uint32_t i = 0; i < e_; ++i) {
        prod[k - e_ + i] = (prod[k - e_ + i] + (p_ - c) * mod_[i]) % p_;
      }
    }
    return {prod.begin(), prod.begin() + e_};
  }

  std::vector<std::uint32_t> pow(std::vector<std::uint32_t> a, std::uint64_t k) const {
    std::vector<std::uint32_t> r(e_, 0);
    r[0] = 1;
    while (k) {
      if (k & 1) r = mul(r, a);
      a = mul(a, a);
      k >>= 1;
    }
    return r;
  }

  std::vector<std::uint32_t> digits(std::uint32_t idx) const {
    std::vector<std::uint32_t> d(e_);
    for (auto& c : d) {
      c = idx % p_;
      idx /= p_;
    }
    return d;
  }

  std::uint32_t index(const std::vector<std::uint32_t>& d) const {
    std::uint32_t idx = 0;
    for (std::uint32_t i = e_; i-- > 0;) idx = idx * p_ + d[i];
    return idx;
  }

 private:
  std::uint32_t p_;
  std::uint32_t e_;
  std::vector<std::uint32_t> mod_;
};

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t FieldSpec::q() const { return ipow(p, e); }

FieldSpec FieldSpec::make(std::uint32_t p, std::uint32_t e) {
  if (!is_prime_u64(p) || p < 3) {
    throw ValidationError("field characteristic must be an odd prime, got " + std::to_string(p));
  }
  if (e < 1) throw ValidationError("extension degree must be at least 1");
  FieldSpec s;
  s.p = p;
  s.e = e;
  if (e == 1) {
    s.modulus = {0, 1};
    return s;
  }
  Field fp = Field::make(p, 1, kMaxTableFieldOrder);
  std::uint64_t count = ipow(p, e);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f = monic_from_index(fp, e, idx);
    if (is_irreducible(fp, f)) {
      s.modulus.resize(e + 1);
      for (std::uint32_t i = 0; i <= e; ++i) s.modulus[i] = f.coeff(i).index();
      return s;
    }
  }
  throw InvariantError("no irreducible modulus found");
}

std::string FieldSpec::header() const {
  std::ostringstream os;
  os << p << '^' << e << ':';
  for (std::size_t i = 0; i < modulus.size(); ++i) {
    if (i) os << ',';
    os << modulus[i];
  }
  return os.str();
}

FieldSpec FieldSpec::parse_header(std::string_view text) {
  auto bad = [&] { return ValidationError("malformed field header '" + std::string(text) + "'"); };
  auto caret = text.find('^');
  auto colon = text.find(':');
  if (caret == std::string_view::npos || colon == std::string_view::npos || colon < caret) throw bad();
  FieldSpec s;
  auto parse_u32 = [&](std::string_view part, std::uint32_t& out) {
    auto res = std::from_chars(part.data(), part.data() + part.size(), out);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size()) throw bad();
  };
  parse_u32(text.substr(0, caret), s.p);
  parse_u32(text.substr(caret + 1, colon - caret - 1), s.e);
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::uint32_t c = 0;
    parse_u32(rest.substr(0, comma), c);
    s.modulus.push_back(c);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  s.validate(kMaxTableFieldOrder);
  return s;
}

void FieldSpec::validate(std::uint64_t max_order) const {
  if (!is_prime_u64(p) || p < 3) {
    throw ValidationError("field characteristic must be an odd prime, got " + std::to_string(p));
  }
  if (e < 1 || e > 64) throw ValidationError("extension degree out of range");
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    order *= p;
    if (order > max_order) {
      throw ValidationError("field order " + std::to_string(p) + "^" + std::to_string(e) +
                            " exceeds the limit " + std::to_string(max_order));
    }
  }
  if (modulus.size() != e + 1 || modulus.back() != 1) {
    throw ValidationError("field modulus must be monic of degree e");
  }
  for (auto c : modulus) {
    if (c >= p) throw ValidationError("field modulus coefficient out of range");
  }
  if (e == 1) {
    if (modulus[0] != 0) throw ValidationError("prime field modulus must be t");
    return;
  }
  Field fp = Field::make(p, 1, kMaxTableFieldOrder);
  std::vector<FqElement> cs;
  for (auto c : modulus) cs.push_back(FqElement(c));
  if (!is_irreducible(fp, Poly(std::move(cs)))) {
    throw ValidationError("field modulus is not irreducible over F_" + std::to_string(p));
  }
}

Field::Field(const FieldSpec& spec, std::uint64_t max_order) : spec_(spec) {
  spec_.validate(max_order);
  q_ = static_cast<std::uint32_t>(spec_.q());
  order_ = q_ - 1;
  exp_.assign(2 * std::size_t(order_), 0);
  log_.assign(q_, 0);

  SlowArith slow(spec_);
  auto divisors = prime_divisors(order_);
  std::uint32_t gen = 0;
  for (std::uint32_t c = 2; c < q_ && gen == 0; ++c) {
    auto d = slow.digits(c);
    bool primitive = true;
    for (auto r : divisors) {
      if (slow.index(slow.pow(d, order_ / r)) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) gen = c;
  }
  if (gen == 0) throw InvariantError("no primitive element found");

  auto g = slow.digits(gen);
  std::vector<std::uint32_t> cur(spec_.e, 0);
  cur[0] = 1;
  for (std::uint32_t k = 0; k < order_; ++k) {
    std::uint32_t idx = slow.index(cur);
    exp_[k] = idx;
    exp_[k + order_] = idx;
    log_[idx] = k;
    cur = slow.mul(cur, g);
  }

  if (spec_.e > 1) {
    zech_.assign(order_, -1);
    for (std::uint32_t k = 0; k < order_; ++k) {
      std::uint32_t v = exp_[k];
      std::uint32_t w = (v % spec_.p == spec_.p - 1) ? v - (spec_.p - 1) : v + 1;
      zech_[k] = (w == 0) ? -1 : static_cast<std::int32_t>(log_[w]);
    }
  }
}

Field Field::make(std::uint32_t p, std::uint32_t e, std::uint64_t max_order) {
  return Field(FieldSpec::make(p, e), max_order);
}

FqElement Field::element(std::uint32_t index) const {
  if (index >= q_) throw ValidationError("field element index out of range");
  return FqElement(index);
}

FqElement Field::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(spec_.p);
  if (r < 0) r += spec_.p;
  return FqElement(static_cast<std::uint32_t>(r));
}

FqElement Field::from_digits(std::span<const std::uint32_t> digits) const {
  if (digits.size() > spec_.e) throw ValidationError("too many coordinates for field element");
  std::uint32_t idx = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= spec_.p) throw ValidationError("coordinate out of range");
    idx = idx * spec_.p + digits[i];
  }
  return FqElement(idx);
}

std::vector<std::uint32_t> Field::digits(FqElement a) const {
  std::vector<std::uint32_t> d(spec_.e);
  std::uint32_t idx = a.index();
  for (auto& c : d) {
    c = idx % spec_.p;
    idx /= spec_.p;
  }
  return d;
}

FqElement Field::inv(FqElement a) const {
  if (a.is_zero()) throw std::domain_error("inverse of zero in F_q");
  return FqElement(exp_[order_ - log_[a.index()]]);
}

FqElement Field::pow(FqElement a, std::uint64_t k) const {
  if (k == 0) return one();
  if (a.is_zero()) return zero();
  std::uint64_t l = (std::uint64_t(log_[a.index()]) * (k % order_)) % order_;
  return FqElement(exp_[l]);
}

std::uint32_t Field::log(FqElement a) const {
  if (a.is_zero()) throw std::domain_error("log of zero in F_q");
  return log_[a.index()];
}

}  // namespace fflab
