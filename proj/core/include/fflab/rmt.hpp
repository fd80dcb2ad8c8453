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

// Haar samples from USp(2N), SO(2N) and U(N), their characteristic
// polynomials, and the sweeps that mirror the L-function statistics.
//
// Angles: for USp and SO the N angles phi_j in [0, pi] stand for the pairs
// exp(+-i phi_j); for U(N) the N angles lie in (-pi, pi].

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fflab/ensemble.hpp"
#include "fflab/zeros.hpp"

namespace fflab {

enum class MatrixEnsemble { kUSp, kSO, kU };
std::string_view ensemble_name(MatrixEnsemble e);
MatrixEnsemble parse_ensemble(std::string_view s);  // throws ValidationError

inline constexpr int kMaxRmtN = 512;
inline constexpr double kUnitarityTolerance = 1e-10;

// Haar matrices. USp(2N) uses the interleaved convention where
// J = diag([0 1; -1 0], ...), and A^T J A = J.
Eigen::MatrixXcd haar_usp(int N, std::mt19937_64& g);
Eigen::MatrixXd haar_so(int N, std::mt19937_64& g);
Eigen::MatrixXcd haar_u(int N, std::mt19937_64& g);

// max of ||A* A - I|| and, for USp, ||A^T J A - J|| (entrywise max).
double unitarity_residual(const Eigen::MatrixXcd& A, bool symplectic);

struct RmtSample {
  MatrixEnsemble ensemble = MatrixEnsemble::kUSp;
  int N = 0;
  std::vector<double> angles;  // sorted
  double residual = 0;
  int resamples = 0;  // non-finite factorizations redrawn
};

RmtSample sample_haar(MatrixEnsemble e, int N, std::mt19937_64& g);
// Angles of a given matrix (pairs merged for USp and SO).
std::vector<double> paired_angles(const Eigen::MatrixXcd& A);
std::vector<double> unitary_angles(const Eigen::MatrixXcd& A);

// Distributional oracle: USp(2N) angles by rejection from the Weyl density
// prod_{i<j} (cos phi_i - cos phi_j)^2 prod_j sin^2 phi_j. Small N only.
std::vector<double> weyl_usp_angles(int N, std::mt19937_64& g);
// CDF of the single USp(2) angle.
double usp2_angle_cdf(double phi);

// log Z_A(theta) = log det(I - A e^{-i theta}) summed one factor at a time
// on the principal branch; a factor that vanishes contributes -inf + 0i.
std::complex<double> log_char_poly(const RmtSample& s, double theta);

// Eigenphases in turns (phi / 2 pi, with mirrors for USp and SO) so the
// L-function counting helpers apply; kappa = 2N or N.
EigenphaseSet as_eigenphases(const RmtSample& s);

// Exact finite-N means for USp(2N):
// E log Z(theta) = sum_{m <= N} e^{-2 i m theta} / (2m).
std::complex<double> usp_mean_log_char_poly(int N, double theta);

struct RmtConfig {
  MatrixEnsemble ensemble = MatrixEnsemble::kUSp;
  int N = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  int threads = 0;
  std::size_t shard_size = 64;
  std::vector<double> theta;        // angles (radians) for log Z
  std::vector<double> count_theta;  // phases (turns) for S
  bool keep_angles = false;
};
void validate(const RmtConfig& cfg);

struct RmtRecord {
  std::vector<std::complex<double>> log_z;
  std::vector<double> s_theta;
  std::complex<double> trace1, trace2;  // Tr A, Tr A^2
  double residual = 0;
  std::vector<double> angles;
};

struct RmtSweepResult {
  std::vector<RmtRecord> records;
  int kappa = 0;
  double max_residual = 0;
  int resamples = 0;
};
// Deterministic for any thread count, as for the L-function sweep.
RmtSweepResult rmt_sweep(const RmtConfig& cfg);

struct RmtMeanRow {
  double theta = 0;
  Estimate re, im;
  double exact_re = 0, exact_im = 0;  // finite-N USp values
  double clamp_target = 0;            // log min{N, 1/(2 theta)} / 2
  // Differences against the first grid point.
  Estimate diff;
  double diff_target = 0;
  double diff_z = 0;
};
std::vector<RmtMeanRow> rmt_means(const RmtSweepResult& r, const RmtConfig& cfg);

struct RmtCovarianceRow {
  double a1 = 0, a2 = 0, t1 = 0, t2 = 0;
  Estimate var_re;      // Var(a1 Re log Z(t1) + a2 Re log Z(t2))
  double target = 0;    // V_Re(a, t, N)
  Estimate var_im;
  double target_im = 0;
};
// Over all pairs of the theta grid with a = (1, 1) and (1, -1).
std::vector<RmtCovarianceRow> rmt_covariances(const RmtSweepResult& r, const RmtConfig& cfg);

}  // namespace fflab
