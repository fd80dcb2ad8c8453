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

#include "fflab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fflab/errors.hpp"

namespace fflab {

std::mt19937_64 shard_rng(std::uint64_t seed, std::uint64_t shard, std::uint64_t stream) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq sq{lo(seed), hi(seed), lo(shard), hi(shard), lo(stream), hi(stream)};
  return std::mt19937_64(sq);
}

std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  if (n == 0) throw ValidationError("empty range");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    std::uint64_t x = g();
    if (x < limit) return x % n;
  }
}

double uniform01(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& g) {
  double u = uniform01(g), v = uniform01(g);
  return std::sqrt(-2 * std::log(u)) * std::cos(2 * std::numbers::pi * v);
}

void Moments::add(double x) {
  Moments one;
  one.n_ = 1;
  one.mean_ = x;
  merge(one);
}

void Moments::merge(const Moments& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  double na = static_cast<double>(n_), nb = static_cast<double>(o.n_), n = na + nb;
  double d = o.mean_ - mean_, d2 = d * d;
  double m2 = m2_ + o.m2_ + d2 * na * nb / n;
  double m3 = m3_ + o.m3_ + d * d2 * na * nb * (na - nb) / (n * n) + 3 * d * (na * o.m2_ - nb * m2_) / n;
  double m4 = m4_ + o.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
              6 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) + 4 * d * (na * o.m3_ - nb * m3_) / n;
  mean_ += d * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += o.n_;
}

double Moments::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double Moments::skewness() const {
  if (n_ < 2 || m2_ <= 0) return 0;
  double n = static_cast<double>(n_);
  return std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
}

double Moments::excess_kurtosis() const {
  if (n_ < 2 || m2_ <= 0) return 0;
  double n = static_cast<double>(n_);
  return n * m4_ / (m2_ * m2_) - 3.0;
}

double Moments::standard_error() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw ValidationError("KS distance of an empty sample");
  std::sort(x.begin(), x.end());
  double n = static_cast<double>(x.size()), d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double F = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_critical(std::size_t n, double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2)) / std::sqrt(static_cast<double>(n)); }

double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw ValidationError("KS distance of an empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size()), d = 0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
  double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return std::sqrt(-0.5 * std::log(alpha / 2)) * std::sqrt((nn + mm) / (nn * mm));
}

namespace {

double mean_of(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

Estimate covariance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("covariance needs two equal samples of size >= 2");
  double mx = mean_of(x), my = mean_of(y);
  Moments prod;
  for (std::size_t i = 0; i < x.size(); ++i) prod.add((x[i] - mx) * (y[i] - my));
  double n = static_cast<double>(x.size());
  return {prod.mean() * n / (n - 1), prod.standard_error()};
}

Estimate correlation(const std::vector<double>& x, const std::vector<double>& y) {
  double cxy = covariance(x, y).value, cxx = covariance(x, x).value, cyy = covariance(y, y).value;
  if (cxx <= 0 || cyy <= 0) return {0, 1};
  double r = cxy / std::sqrt(cxx * cyy);
  return {r, (1 - r * r) / std::sqrt(static_cast<double>(x.size()) - 1)};
}

Estimate mean_estimate(const std::vector<double>& x) {
  Moments m;
  for (double v : x) m.add(v);
  return {m.mean(), m.standard_error()};
}

Eigen::MatrixXd covariance_matrix(const std::vector<std::vector<double>>& columns) {
  Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd C(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      C(i, j) = C(j, i) = covariance(columns[static_cast<std::size_t>(i)], columns[static_cast<std::size_t>(j)]).value;
    }
  }
  return C;
}

double min_eigenvalue(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<double> empirical_cdf(std::vector<double> x, const std::vector<double>& grid) {
  std::sort(x.begin(), x.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) {
    auto it = std::upper_bound(x.begin(), x.end(), g);
    out.push_back(x.empty() ? 0.0 : static_cast<double>(it - x.begin()) / static_cast<double>(x.size()));
  }
  return out;
}

}  // namespace fflab
