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

#include "fflab/zeros.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fflab/errors.hpp"

namespace fflab {

namespace {

using cld = std::complex<long double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Polynomials modulo the Mersenne prime 2^61 - 1, low degree first.
namespace modp {

constexpr std::uint64_t P = (1ULL << 61) - 1;
using Vec = std::vector<std::uint64_t>;

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % P);
}
std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + P - b; }
std::uint64_t inv(std::uint64_t a) {
  std::uint64_t r = 1, e = P - 2;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}
void trim(Vec& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
int deg(const Vec& f) { return static_cast<int>(f.size()) - 1; }
Vec deriv(const Vec& f) {
  Vec d(f.size() > 1 ? f.size() - 1 : 0);
  for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = mul(f[i], i % P);
  trim(d);
  return d;
}
void divmod(Vec a, const Vec& b, Vec& q, Vec& r) {
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  std::uint64_t li = inv(b.back());
  for (int k = deg(a); k >= deg(b); --k) {
    std::uint64_t c = mul(a[static_cast<std::size_t>(k)], li);
    q[static_cast<std::size_t>(k - deg(b))] = c;
    for (int i = 0; i <= deg(b); ++i) {
      auto& s = a[static_cast<std::size_t>(k - deg(b) + i)];
      s = sub(s, mul(c, b[static_cast<std::size_t>(i)]));
    }
  }
  a.resize(static_cast<std::size_t>(std::max(deg(b), 0)));
  trim(a);
  trim(q);
  r = std::move(a);
}
Vec quo(const Vec& a, const Vec& b) {
  Vec q, r;
  divmod(a, b, q, r);
  return q;
}
Vec gcd(Vec a, Vec b) {
  while (!b.empty()) {
    Vec q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    std::uint64_t li = inv(a.back());
    for (auto& c : a) c = mul(c, li);
  }
  return a;
}
Vec minus(const Vec& a, const Vec& b) {
  Vec r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

}  // namespace modp

std::vector<long double> unitarized_ld(const LPolynomial& L) {
  std::vector<long double> w(L.coeffs.size());
  long double s = std::pow(static_cast<long double>(L.q), -0.5L * (L.weight + 1));
  long double f = 1.0L;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = L.coeffs[k] * f;
    f *= s;
  }
  return w;
}

// Taylor coefficients t_0..t_m of w at z.
std::vector<cld> taylor(const std::vector<long double>& w, cld z, int m) {
  std::vector<cld> c(w.begin(), w.end());
  int deg = static_cast<int>(c.size()) - 1;
  std::vector<cld> t(static_cast<std::size_t>(m) + 1, 0);
  for (int j = 0; j <= m && j <= deg; ++j) {
    for (int k = deg - 1; k >= j; --k) c[static_cast<std::size_t>(k)] += z * c[static_cast<std::size_t>(k + 1)];
    t[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
  }
  return t;
}

// Newton on the (m-1)-th derivative, which has a simple root at an m-fold
// root of w.
cld polish(const std::vector<long double>& w, cld z, int m) {
  for (int it = 0; it < 20; ++it) {
    auto t = taylor(w, z, m);
    cld top = t[static_cast<std::size_t>(m)];
    if (std::abs(top) == 0) break;
    cld step = t[static_cast<std::size_t>(m - 1)] / (static_cast<long double>(m) * top);
    z -= step;
    if (std::abs(step) <= 1e-12L * std::max(1.0L, std::abs(z))) break;
  }
  return z;
}

void balance(Eigen::MatrixXd& a) {
  const double radix = 2.0, sqrdx = radix * radix;
  Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0, c = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0 || r == 0) continue;
      double g = r / radix, f = 1, s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

double wrap_phase(double x) {
  x -= std::floor(x + 0.5);
  return x >= 0.5 ? x - 1.0 : x;
}

double circ_dist(double a, double b) { return std::abs(wrap_phase(a - b)); }

void check_negation_closed(const std::vector<double>& th) {
  std::vector<char> used(th.size(), 0);
  for (std::size_t i = 0; i < th.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bj = 0;
    for (std::size_t j = 0; j < th.size(); ++j) {
      if (used[j]) continue;
      double d = circ_dist(th[i], -th[j]);
      if (d < best) {
        best = d;
        bj = j;
      }
    }
    if (best > 1e-8) throw InvariantError("eigenphases are not closed under negation");
    used[bj] = 1;
  }
}

}  // namespace

double EigenphaseSet::max_residual() const {
  double r = 0;
  for (double x : residual) r = std::max(r, x);
  return r;
}

std::vector<int> root_multiplicities(const std::vector<std::int64_t>& coeffs) {
  using namespace modp;
  Vec f(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::int64_t c = coeffs[i] % static_cast<std::int64_t>(P);
    f[i] = c < 0 ? static_cast<std::uint64_t>(c + static_cast<std::int64_t>(P)) : static_cast<std::uint64_t>(c);
  }
  trim(f);
  std::vector<int> out;
  if (deg(f) < 1) return out;
  Vec fp = deriv(f);
  Vec a0 = gcd(f, fp);
  Vec b = quo(f, a0);
  Vec c = quo(fp, a0);
  Vec d = minus(c, deriv(b));
  for (int i = 1; deg(b) > 0; ++i) {
    Vec a = gcd(b, d);
    for (int k = 0; k < deg(a); ++k) out.push_back(i);
    b = quo(b, a);
    c = quo(d, a);
    d = minus(c, deriv(b));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

EigenphaseSet eigenphases(const LPolynomial& L, double rh_tol) {
  EigenphaseSet Z;
  Z.method = "companion";
  int k = L.degree();
  if (k <= 0) return Z;
  auto w = unitarized_ld(L);
  long double lead = w[static_cast<std::size_t>(k)];
  if (lead == 0) throw InvariantError("L-polynomial has a vanishing leading coefficient");

  std::vector<cld> approx;
  if (k == 1) {
    approx.push_back(-w[0] / w[1]);
  } else {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, k);
    for (int i = 1; i < k; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < k; ++i) C(i, k - 1) = -static_cast<double>(w[static_cast<std::size_t>(i)] / lead);
    balance(C);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    if (es.info() != Eigen::Success) throw InvariantError("companion eigenvalue iteration failed");
    for (int i = 0; i < k; ++i) approx.emplace_back(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
  }

  // Group approximations of multiple roots into clusters of known size.
  auto mults = root_multiplicities(L.coeffs);
  std::vector<char> used(approx.size(), 0);
  std::vector<std::pair<cld, int>> clusters;
  for (int m : mults) {
    if (m == 1) break;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_idx;
    for (std::size_t i = 0; i < approx.size(); ++i) {
      if (used[i]) continue;
      std::vector<std::pair<double, std::size_t>> d;
      for (std::size_t j = 0; j < approx.size(); ++j) {
        if (!used[j]) d.emplace_back(static_cast<double>(std::abs(approx[i] - approx[j])), j);
      }
      if (static_cast<int>(d.size()) < m) continue;
      std::partial_sort(d.begin(), d.begin() + m, d.end());
      if (d[static_cast<std::size_t>(m - 1)].first < best) {
        best = d[static_cast<std::size_t>(m - 1)].first;
        best_idx.clear();
        for (int t = 0; t < m; ++t) best_idx.push_back(d[static_cast<std::size_t>(t)].second);
      }
    }
    cld centroid = 0;
    for (auto j : best_idx) {
      used[j] = 1;
      centroid += approx[j];
    }
    clusters.emplace_back(centroid / static_cast<long double>(m), m);
  }
  for (std::size_t i = 0; i < approx.size(); ++i) {
    if (!used[i]) clusters.emplace_back(approx[i], 1);
  }

  for (auto& [z0, m] : clusters) {
    cld z = polish(w, z0, m);
    double res = static_cast<double>(std::abs(std::abs(z) - 1.0L));
    if (!(res <= rh_tol)) {
      throw InvariantError("root off the critical circle: residual " + std::to_string(res));
    }
    double th = wrap_phase(-static_cast<double>(std::arg(z)) / kTwoPi);
    for (int t = 0; t < m; ++t) {
      Z.theta.push_back(th);
      Z.residual.push_back(res);
    }
  }
  std::vector<std::size_t> order(Z.theta.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return Z.theta[a] < Z.theta[b]; });
  EigenphaseSet out;
  out.method = Z.method;
  for (auto i : order) {
    out.theta.push_back(Z.theta[i]);
    out.residual.push_back(Z.residual[i]);
  }
  check_negation_closed(out.theta);
  return out;
}

EigenphaseSet eigenphases_sign_change(const LPolynomial& L) {
  EigenphaseSet Z;
  Z.method = "sign-change";
  int k = L.degree();
  if (k <= 0) return Z;
  auto w = L.unitarized();
  double scale = 0;
  for (double x : w) scale += std::abs(x);
  int eps = L.root_number;
  auto xi = [&](double th) {
    std::complex<double> z = std::polar(1.0, kTwoPi * th);
    std::complex<double> acc = 0;
    for (std::size_t i = w.size(); i-- > 0;) acc = acc * z + w[i];
    acc *= std::polar(1.0, -std::numbers::pi * k * th);
    return eps == 1 ? acc.real() : acc.imag();
  };
  auto bisect = [&](double a, double b) {
    double fa = xi(a);
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (a + b);
      double fm = xi(mid);
      if ((fm < 0) == (fa < 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };
  const int N = 64 * k;
  const double offset = 0.2357 / N;
  const double lo = offset, hi = 1.0 + offset;
  std::vector<double> th(static_cast<std::size_t>(N) + 2), v(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    th[i] = offset + static_cast<double>(i) / N;
    v[i] = xi(th[i]);
  }
  std::vector<double> roots;
  std::vector<double> touching;
  for (int i = 0; i < N; ++i) {
    if ((v[static_cast<std::size_t>(i)] < 0) != (v[static_cast<std::size_t>(i) + 1] < 0)) {
      roots.push_back(bisect(th[static_cast<std::size_t>(i)], th[static_cast<std::size_t>(i) + 1]));
    }
  }
  const double tol = 1e-9 * scale;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  for (int i = 1; i <= N; ++i) {
    auto I = static_cast<std::size_t>(i);
    double a = v[I - 1], b = v[I], c = v[I + 1];
    if ((a < 0) != (b < 0) || (b < 0) != (c < 0)) continue;
    if (!(std::abs(b) < std::abs(a) && std::abs(b) <= std::abs(c))) continue;
    double s = b < 0 ? -1.0 : 1.0;
    double x0 = th[I - 1], x1 = th[I + 1];
    double p = x1 - gr * (x1 - x0), r = x0 + gr * (x1 - x0);
    double fp = s * xi(p), fr = s * xi(r);
    for (int it = 0; it < 80; ++it) {
      if (fp < fr) {
        x1 = r;
        r = p;
        fr = fp;
        p = x1 - gr * (x1 - x0);
        fp = s * xi(p);
      } else {
        x0 = p;
        p = r;
        fp = fr;
        r = x0 + gr * (x1 - x0);
        fr = s * xi(r);
      }
    }
    double tm = 0.5 * (x0 + x1);
    double fm = s * xi(tm);
    if (tm < lo || tm >= hi) continue;
    if (fm < 0) {
      roots.push_back(bisect(th[I - 1], tm));
      roots.push_back(bisect(tm, th[I + 1]));
    } else if (fm < tol) {
      bool dup = false;
      for (double t : touching) dup = dup || circ_dist(t, tm) < 1e-7;
      if (!dup) touching.push_back(tm);
    }
  }
  for (double t : touching) {
    roots.push_back(t);
    roots.push_back(t);
  }
  for (double r : roots) {
    Z.theta.push_back(wrap_phase(r));
    Z.residual.push_back(std::abs(xi(r)) / scale);
  }
  std::sort(Z.theta.begin(), Z.theta.end());
  return Z;
}

double phase_set_distance(const EigenphaseSet& a, const EigenphaseSet& b) {
  if (a.theta.size() != b.theta.size()) return std::numeric_limits<double>::infinity();
  std::vector<char> used(b.theta.size(), 0);
  double worst = 0;
  for (double x : a.theta) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bj = 0;
    for (std::size_t j = 0; j < b.theta.size(); ++j) {
      if (used[j]) continue;
      double d = circ_dist(x, b.theta[j]);
      if (d < best) {
        best = d;
        bj = j;
      }
    }
    used[bj] = 1;
    worst = std::max(worst, best);
  }
  return worst;
}

double arg_on_circle(const EigenphaseSet& Z, double theta) {
  double s = 0;
  for (double tj : Z.theta) {
    double x = tj - theta;
    double frac = x - std::floor(x);
    if (frac < 1e-13 || frac > 1 - 1e-13) continue;
    s += frac - 0.5;
  }
  return std::numbers::pi * s;
}

double S_theta(const EigenphaseSet& Z, double theta) { return arg_on_circle(Z, theta) / std::numbers::pi; }

double zero_count(const EigenphaseSet& Z, double theta) {
  constexpr double tol = 1e-13;
  double n = 0;
  for (double tj : Z.theta) {
    double phi = tj - std::floor(tj);
    if (phi < tol || phi > 1 - tol) {
      n += 0.5;
      if (theta >= 1 - tol) n += 0.5;
    } else if (std::abs(phi - theta) < tol) {
      n += 0.5;
    } else if (phi < theta) {
      n += 1;
    }
  }
  return n;
}

std::complex<double> log_L(const EigenphaseSet& Z, std::complex<double> z) {
  std::complex<double> acc = 0;
  for (double tj : Z.theta) {
    std::complex<double> f = 1.0 - z * std::polar(1.0, kTwoPi * tj);
    if (f == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    acc += std::log(f);
  }
  return acc;
}

std::complex<double> z_of_s(std::uint32_t q, std::complex<double> s) {
  return std::exp((0.5 - s) * std::log(static_cast<double>(q)));
}

LogValue log_abs_L(const EigenphaseSet& Z, std::uint32_t q, std::complex<double> s) {
  LogValue r;
  r.value = log_L(Z, z_of_s(q, s));
  if (!(r.value.real() >= std::log(kZeroSentinel))) {
    r.vanished = true;
    r.value = {-std::numeric_limits<double>::infinity(), 0.0};
  }
  return r;
}

LogValue log_abs_L(const LPolynomial& L, std::complex<double> s) {
  LogValue r;
  std::complex<double> u = std::exp(-s * std::log(static_cast<double>(L.q)));
  std::complex<double> v = L.eval(u);
  r.value = std::log(v);
  if (!(std::abs(v) >= kZeroSentinel)) {
    r.vanished = true;
    r.value = {-std::numeric_limits<double>::infinity(), 0.0};
  }
  return r;
}

}  // namespace fflab
