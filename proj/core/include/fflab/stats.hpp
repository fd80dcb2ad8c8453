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

// Sampling streams and the summary statistics shared by the L-function and
// random-matrix sweeps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace fflab {

// Independent stream for (seed, shard, stream). Seeded through seed_seq, so
// the sequence is fixed by the standard.
std::mt19937_64 shard_rng(std::uint64_t seed, std::uint64_t shard, std::uint64_t stream = 0);
// Uniform on [0, n) without modulo bias.
std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n);
// Uniform on (0, 1), 53 random bits.
double uniform01(std::mt19937_64& g);
// Box-Muller, one draw per call.
double standard_normal(std::mt19937_64& g);

// Streaming mean and central moments up to order four, mergeable in any
// grouping.
class Moments {
 public:
  void add(double x);
  void merge(const Moments& o);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double skewness() const;
  double excess_kurtosis() const;
  double standard_error() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0, m2_ = 0, m3_ = 0, m4_ = 0;
};

double normal_cdf(double x);

// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf);
inline double ks_normal(std::vector<double> x) { return ks_distance(std::move(x), normal_cdf); }
// Asymptotic critical value of the one-sample KS distance at level alpha.
double ks_critical(std::size_t n, double alpha);
// Two-sample KS distance, and its critical value for sizes n and m.
double ks_two_sample(std::vector<double> x, std::vector<double> y);
double ks_critical(std::size_t n, std::size_t m, double alpha);

struct Estimate {
  double value = 0;
  double se = 0;
};
// Unbiased covariance with the plug-in standard error
// sqrt(Var[(x - mx)(y - my)] / N).
Estimate covariance(const std::vector<double>& x, const std::vector<double>& y);
// Pearson correlation; se = (1 - r^2) / sqrt(N - 1).
Estimate correlation(const std::vector<double>& x, const std::vector<double>& y);
// Mean with its standard error.
Estimate mean_estimate(const std::vector<double>& x);

// Columns are variables.
Eigen::MatrixXd covariance_matrix(const std::vector<std::vector<double>>& columns);
// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& M);

// Empirical CDF of the sample on a grid.
std::vector<double> empirical_cdf(std::vector<double> x, const std::vector<double>& grid);

}  // namespace fflab
