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

// Sweeps over H_n (or the root-number-one twists), per-D evaluations, and the
// empirical statistics computed from them.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fflab/dirichlet.hpp"
#include "fflab/elliptic.hpp"
#include "fflab/lfunction.hpp"
#include "fflab/prime_table.hpp"
#include "fflab/stats.hpp"
#include "fflab/zeros.hpp"

namespace fflab {

inline constexpr std::uint64_t kExhaustiveLimit = 10'000'000;

// Borrowed tables. T must reach degree g (quadratic); TT is required for
// twists.
struct EnsembleContext {
  const Field* F = nullptr;
  const PrimeTable* T = nullptr;
  const TwistTable* TT = nullptr;
};

enum class SamplingMode { kExhaustive, kSample };

struct SweepConfig {
  Family family = Family::kQuadratic;
  int n = 0;
  SamplingMode mode = SamplingMode::kSample;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  bool plus_only = true;  // twists: keep root number +1 only
  int threads = 0;        // 0: hardware concurrency
  std::size_t shard_size = 1024;

  // Phases theta where log L(1/2 + i t) and S(theta) are recorded, with
  // t = 2 pi theta / log q.
  std::vector<double> theta;
  // Shifts t where D_X and P_X are evaluated at sigma_0 + i t.
  std::vector<double> dirichlet_t;
  ApproxParams approx;
  bool prime_part = false;
  bool keep_phases = false;
  bool keep_l = false;  // store the L-polynomial of each D
  double time_budget = 0;  // seconds; 0 for none
};

// Degree of the L-function (2g or m) for the family in degree n.
int family_kappa(const EnsembleContext& ctx, Family f, int n);
void validate(const EnsembleContext& ctx, const SweepConfig& cfg);

double t_of_theta(double theta, std::uint32_t q);
double theta_of_t(double t, std::uint32_t q);

struct DSample {
  std::uint64_t index = 0;  // monic index of D
  int root_number = 1;
  std::vector<std::complex<double>> log_l;  // real part -inf where L vanishes
  std::vector<double> s_theta;
  std::vector<std::complex<double>> dx;
  std::vector<std::complex<double>> px;
  double min_phase = 0;  // min |theta_j|, 1 when kappa = 0
  double rh_residual = 0;
  std::vector<double> phases;
  std::optional<LPolynomial> L;
};

struct SweepResult {
  std::vector<DSample> samples;  // in stream order
  int kappa = 0;
  std::uint64_t drawn = 0;
  std::uint64_t rejected_squarefree = 0;
  std::uint64_t rejected_family = 0;  // twists: not admissible or wrong sign
  bool complete = true;
  std::size_t shards_done = 0;
  std::size_t shards_total = 0;
  double acceptance() const { return drawn ? static_cast<double>(samples.size()) / static_cast<double>(drawn) : 0.0; }
};

// Deterministic in (config, seed) for any thread count: shards have fixed
// sizes and streams and are concatenated in shard order. When the time
// budget runs out the finished prefix is returned with complete = false.
SweepResult sweep(const EnsembleContext& ctx, const SweepConfig& cfg);

// Per-D evaluation used by the sweep. For twists, root_hint resolves a root
// number the budget cannot see.
DSample evaluate(const EnsembleContext& ctx, const SweepConfig& cfg, const Poly& D, std::uint64_t index,
                 std::optional<int> root_hint = {});

// Summary of a sample that should look standard normal.
struct NormalSummary {
  std::size_t count = 0;
  std::size_t excluded = 0;
  double mean = 0;
  double variance = 0;
  double skewness = 0;
  double excess_kurtosis = 0;
  double ks = 0;
  std::vector<double> cdf_grid;
  std::vector<double> cdf;
};
NormalSummary summarize_normal(const std::vector<double>& z, std::size_t excluded = 0);

struct CltResult {
  std::vector<double> a, t;
  double scale = 0;
  int mean_sign = 1;
  MomentTargets targets;
  std::vector<double> z_re, z_im;
  NormalSummary re;
  std::optional<NormalSummary> im;  // empty when the Im variance is degenerate
};
// (sum a_j log|L(1/2 + i t_j)| - eps M) / sqrt(V_Re) and the Im analogue,
// using the recorded theta columns.
CltResult clt_statistic(const SweepResult& r, const std::vector<double>& a, const std::vector<std::size_t>& theta_cols,
                        const std::vector<double>& t, double scale, Family family);

struct CovarianceRow {
  std::string part;  // "re" or "im"
  std::size_t i = 0, j = 0;
  double t_i = 0, t_j = 0;
  Estimate empirical;
  double target = 0;  // the min-clamp closed form
  double z = 0;
  double finite_target = 0;  // every prime power in D_X at this q, X, sigma_0, primes independent
  double z_finite = 0;
};
// Covariances of Re and Im D_X(sigma_0 + i t_j) over all recorded shifts.
std::vector<CovarianceRow> covariance_estimate(const SweepResult& r, const SweepConfig& cfg, std::uint32_t q);
double covariance_target(double ti, double tj, int X, bool imaginary);
double covariance_finite_target(double ti, double tj, int X, double sigma0, std::uint32_t q, bool imaginary);

// Two intervals [a1, a2], [a3, a4] in alpha units.
struct FluctuationCase {
  std::string name;
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double target() const;
};
std::vector<FluctuationCase> standard_fluctuation_cases();
// The distinct alpha values of the cases, sorted.
std::vector<double> fluctuation_alphas(const std::vector<FluctuationCase>& cases);

struct FluctuationRow {
  FluctuationCase c;
  Estimate correlation;
  double target = 0;
  double var_first = 0;  // variance of the normalized first count
  double var_second = 0;
};
// S_at_alpha[d][k] = S(alpha_k / kappa^delta) for sample d. Delta counts are
// S(theta_2) - S(theta_1), normalized by sqrt((1 - delta) log kappa) / pi.
std::vector<FluctuationRow> fluctuation_correlations(const std::vector<std::vector<double>>& S_at_alpha,
                                                     const std::vector<double>& alphas,
                                                     const std::vector<FluctuationCase>& cases, double delta, int kappa);

struct ZeroCountClt {
  double target_variance = 0;
  NormalSummary summary;  // of Delta / (sqrt(log kappa) / pi)
};
ZeroCountClt zero_count_clt(const std::vector<double>& S1, const std::vector<double>& S2, int kappa, double delta1,
                            double delta2);
// Phases for the zero-count CLT: theta_j = kappa^{-delta_j} / 4 and / 2.
std::pair<double, double> zero_count_thetas(int kappa, double delta1, double delta2);
// Negative control: kappa/2 i.i.d. uniform phases in (0, 1/2) with mirrors.
EigenphaseSet synthetic_iid_phases(int kappa, std::mt19937_64& g);

// Fraction of D with min |theta_j| < 1 / (y g), for each y.
std::vector<double> low_lying_scan(const SweepResult& r, int genus, const std::vector<double>& y_grid);

enum class SymmetryType { kSymplectic, kOrthogonalEven };
SymmetryType symmetry_type(Family f);
double reference_density(SymmetryType s, double x);

struct DensityBin {
  double lo = 0, hi = 0;
  double density = 0;    // zeros per D per unit x
  double reference = 0;  // reference density at the bin centre
};
// Histogram of x = kappa |theta| over [0, x_max); each phase counts 1/2 so
// the far-field density tends to 1.
std::vector<DensityBin> one_level_density(const SweepResult& r, double bin_width, double x_max, SymmetryType s);

struct NonvanishingResult {
  double alpha = 0;
  std::size_t total = 0;
  std::size_t nonvanishing = 0;
  double proportion = 0;
};
// Uses the theta column at alpha / n (quadratic) or alpha / m (twists).
NonvanishingResult nonvanishing_proportion(const SweepResult& r, std::size_t theta_col, double alpha);
inline constexpr double kNonvanishingR0 = 0.9427;
inline constexpr double kNonvanishingRInf = 0.5;
inline constexpr double kNonvanishingE0 = 0.25;
inline constexpr double kNonvanishingEInf = 0.0;

struct GpScan {
  std::vector<double> delta;
  std::vector<NormalSummary> re, im;
  Eigen::MatrixXd cov_re, cov_im;
  Eigen::MatrixXd target_re, target_im;
  Eigen::MatrixXd se_re, se_im;
};
// theta_cols[k] holds theta = kappa^{-delta_k}.
GpScan gaussian_process_scan(const SweepResult& r, const std::vector<std::size_t>& theta_cols,
                             const std::vector<double>& delta, Family family);

}  // namespace fflab
