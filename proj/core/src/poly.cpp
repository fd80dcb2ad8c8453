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

#include "fflab/poly.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "fflab/errors.hpp"

namespace fflab {

Poly::Poly(std::vector<FqElement> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::constant(FqElement c) { return Poly(std::vector<FqElement>{c}); }

Poly Poly::monomial(FqElement c, int degree) {
  std::vector<FqElement> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return Poly(std::move(v));
}

bool operator<(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  }
  return false;
}

Poly add(const Field& F, const Poly& a, const Poly& b) {
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<FqElement> r(std::max(x.size(), y.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a.coeff(i), b.coeff(i));
  return Poly(std::move(r));
}

Poly neg(const Field& F, const Poly& a) {
  std::vector<FqElement> r(a.coeffs());
  for (auto& c : r) c = F.neg(c);
  return Poly(std::move(r));
}

Poly sub(const Field& F, const Poly& a, const Poly& b) {
  std::vector<FqElement> r(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.sub(a.coeff(i), b.coeff(i));
  return Poly(std::move(r));
}

Poly scale(const Field& F, const Poly& a, FqElement c) {
  std::vector<FqElement> r(a.coeffs());
  for (auto& x : r) x = F.mul(x, c);
  return Poly(std::move(r));
}

Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<FqElement> r(x.size() + y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(x[i], y[j]));
  }
  return Poly(std::move(r));
}

std::pair<Poly, Poly> divmod(const Field& F, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  int db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<FqElement> r(a.coeffs());
  std::vector<FqElement> q(static_cast<std::size_t>(a.degree() - db) + 1);
  FqElement lc_inv = F.inv(b.leading());
  const auto& bc = b.coeffs();
  for (int k = a.degree(); k >= db; --k) {
    FqElement c = r[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    FqElement f = F.mul(c, lc_inv);
    q[static_cast<std::size_t>(k - db)] = f;
    FqElement nf = F.neg(f);
    for (int i = 0; i <= db; ++i) {
      auto& slot = r[static_cast<std::size_t>(k - db + i)];
      slot = F.add(slot, F.mul(nf, bc[static_cast<std::size_t>(i)]));
    }
  }
  r.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly rem(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }
Poly quo(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).first; }

Poly make_monic(const Field& F, const Poly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(F, a, F.inv(a.leading()));
}

Poly gcd(const Field& F, const Poly& a, const Poly& b) {
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = rem(F, x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return make_monic(F, x);
}

Poly derivative(const Field& F, const Poly& a) {
  if (a.degree() < 1) return Poly();
  std::vector<FqElement> r(static_cast<std::size_t>(a.degree()));
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) {
    r[i - 1] = F.mul(a.coeffs()[i], F.from_int(static_cast<std::int64_t>(i)));
  }
  return Poly(std::move(r));
}

Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) {
  return rem(F, mul(F, a, b), m);
}

Poly powmod(const Field& F, Poly base, std::uint64_t k, const Poly& m) {
  Poly r = rem(F, Poly::one(), m);
  base = rem(F, base, m);
  while (k) {
    if (k & 1) r = mulmod(F, r, base, m);
    k >>= 1;
    if (k) base = mulmod(F, base, base, m);
  }
  return r;
}

Poly pow(const Field& F, const Poly& base, unsigned k) {
  Poly r = Poly::one();
  for (unsigned i = 0; i < k; ++i) r = mul(F, r, base);
  return r;
}

FqElement eval(const Field& F, const Poly& f, FqElement x) {
  FqElement acc;
  const auto& c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), c[i]);
  return acc;
}

std::uint64_t monic_count(const Field& F, int n) {
  if (n < 0) throw ValidationError("negative degree");
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > UINT64_MAX / F.q()) throw ValidationError("monic count overflows 64 bits");
    r *= F.q();
  }
  return r;
}

Poly monic_from_index(const Field& F, int n, std::uint64_t index) {
  std::vector<FqElement> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    c[static_cast<std::size_t>(i)] = FqElement(static_cast<std::uint32_t>(index % F.q()));
    index /= F.q();
  }
  c.back() = F.one();
  return Poly(std::move(c));
}

std::uint64_t monic_index(const Field& F, const Poly& f) {
  if (!f.is_monic()) throw ValidationError("monic_index needs a monic polynomial");
  std::uint64_t idx = 0;
  for (int i = f.degree(); i-- > 0;) idx = idx * F.q() + f.coeff(static_cast<std::size_t>(i)).index();
  return idx;
}

MonicRange::MonicRange(const Field& F, int n, std::uint64_t first, std::uint64_t last)
    : F_(&F), n_(n), first_(first), last_(std::min(last, monic_count(F, n))) {
  if (first_ > last_) first_ = last_;
}

MonicRange::iterator::iterator(const Field* F, int n, std::uint64_t index)
    : F_(F), n_(n), index_(index) {
  if (F_ == nullptr) return;
  cur_ = monic_from_index(*F_, n_, index_);
  digits_.assign(static_cast<std::size_t>(n_) + 1, FqElement());
  for (int i = 0; i <= n_; ++i) digits_[static_cast<std::size_t>(i)] = cur_.coeff(static_cast<std::size_t>(i));
}

MonicRange::iterator& MonicRange::iterator::operator++() {
  ++index_;
  for (int i = 0; i < n_; ++i) {
    auto& d = digits_[static_cast<std::size_t>(i)];
    if (d.index() + 1 < F_->q()) {
      d = FqElement(d.index() + 1);
      break;
    }
    d = FqElement(0);
  }
  cur_ = Poly(digits_);
  return *this;
}

std::string to_string(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(f.coeffs()[i].index());
  }
  return out;
}

Poly parse_poly(const Field& F, std::string_view text) {
  std::vector<FqElement> c;
  while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '"')) text.remove_suffix(1);
  if (text.empty()) throw ValidationError("empty polynomial string");
  while (true) {
    auto comma = text.find(',');
    auto part = text.substr(0, comma);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    std::uint32_t v = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc() || res.ptr != part.data() + part.size()) {
      throw ValidationError("malformed polynomial coefficient '" + std::string(part) + "'");
    }
    c.push_back(F.element(v));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return Poly(std::move(c));
}

}  // namespace fflab
