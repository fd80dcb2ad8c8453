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

#include "fflab/rmt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <thread>

#include "fflab/dirichlet.hpp"
#include "fflab/errors.hpp"

namespace fflab {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

cd complex_normal(std::mt19937_64& g) {
  double a = standard_normal(g), b = standard_normal(g);
  return {a * std::numbers::sqrt2 / 2, b * std::numbers::sqrt2 / 2};
}

bool finite(const Eigen::MatrixXcd& M) { return M.allFinite(); }

// Q from A = QR with the diagonal of R made real positive.
Eigen::MatrixXcd q_factor(const Eigen::MatrixXcd& G) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ();
  const auto& R = qr.matrixQR();
  for (Eigen::Index j = 0; j < G.cols(); ++j) {
    cd d = R(j, j);
    double m = std::abs(d);
    if (m == 0) return Eigen::MatrixXcd::Constant(G.rows(), G.cols(), cd(NAN, NAN));
    Q.col(j) *= d / m;
  }
  return Q;
}

void check_n(int N) {
  if (N < 1 || N > kMaxRmtN) throw ValidationError("N must lie in [1, " + std::to_string(kMaxRmtN) + "]");
}

}  // namespace

std::string_view ensemble_name(MatrixEnsemble e) {
  switch (e) {
    case MatrixEnsemble::kUSp: return "usp";
    case MatrixEnsemble::kSO: return "so-even";
    case MatrixEnsemble::kU: return "u";
  }
  return "?";
}

MatrixEnsemble parse_ensemble(std::string_view s) {
  if (s == "usp") return MatrixEnsemble::kUSp;
  if (s == "so-even" || s == "so") return MatrixEnsemble::kSO;
  if (s == "u") return MatrixEnsemble::kU;
  throw ValidationError("unknown ensemble '" + std::string(s) + "' (usp, so-even, u)");
}

Eigen::MatrixXcd haar_usp(int N, std::mt19937_64& g) {
  check_n(N);
  Eigen::Index n = 2 * N;
  // Columns come in pairs (c, J~ conj c) with J~(x; y) = (-y; x) per block,
  // i.e. a quaternionic Ginibre matrix in complex form.
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = 0; k < N; ++k) {
      cd x = complex_normal(g), y = complex_normal(g);
      G(2 * k, 2 * j) = x;
      G(2 * k + 1, 2 * j) = y;
      G(2 * k, 2 * j + 1) = -std::conj(y);
      G(2 * k + 1, 2 * j + 1) = std::conj(x);
    }
  }
  return q_factor(G);
}

Eigen::MatrixXd haar_so(int N, std::mt19937_64& g) {
  check_n(N);
  Eigen::Index n = 2 * N;
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) G(i, j) = standard_normal(g);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (qr.matrixQR()(j, j) < 0) Q.col(j) *= -1;
  }
  if (Q.determinant() < 0) Q.col(0) *= -1;
  return Q;
}

Eigen::MatrixXcd haar_u(int N, std::mt19937_64& g) {
  check_n(N);
  Eigen::MatrixXcd G(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) G(i, j) = complex_normal(g);
  return q_factor(G);
}

double unitarity_residual(const Eigen::MatrixXcd& A, bool symplectic) {
  Eigen::Index n = A.rows();
  double r = (A.adjoint() * A - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (symplectic) {
    // J A swaps the rows of each pair and negates the second.
    Eigen::MatrixXcd JA(n, n);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
      JA.row(k) = A.row(k + 1);
      JA.row(k + 1) = -A.row(k);
    }
    Eigen::MatrixXcd M = A.transpose() * JA;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
      M(k, k + 1) -= 1.0;
      M(k + 1, k) += 1.0;
    }
    r = std::max(r, M.cwiseAbs().maxCoeff());
  }
  return r;
}

std::vector<double> paired_angles(const Eigen::MatrixXcd& A) {
  // A + A* has eigenvalues 2 cos phi_j, each twice.
  Eigen::MatrixXcd H = A + A.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw InvariantError("Hermitian eigensolver failed");
  const auto& ev = es.eigenvalues();
  std::vector<double> out;
  for (Eigen::Index k = 0; k + 1 < ev.size(); k += 2) {
    double c = 0.25 * (ev(k) + ev(k + 1));
    out.push_back(std::acos(std::clamp(c, -1.0, 1.0)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> unitary_angles(const Eigen::MatrixXcd& A) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  if (es.info() != Eigen::Success) throw InvariantError("eigensolver failed");
  std::vector<double> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(std::arg(es.eigenvalues()(k)));
  std::sort(out.begin(), out.end());
  return out;
}

RmtSample sample_haar(MatrixEnsemble e, int N, std::mt19937_64& g) {
  RmtSample s;
  s.ensemble = e;
  s.N = N;
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::MatrixXcd A;
    switch (e) {
      case MatrixEnsemble::kUSp: A = haar_usp(N, g); break;
      case MatrixEnsemble::kSO: A = haar_so(N, g).cast<cd>(); break;
      case MatrixEnsemble::kU: A = haar_u(N, g); break;
    }
    if (!finite(A)) {
      ++s.resamples;
      continue;
    }
    s.residual = unitarity_residual(A, e == MatrixEnsemble::kUSp);
    if (s.residual > kUnitarityTolerance) throw InvariantError("Haar sample is not unitary to tolerance");
    s.angles = e == MatrixEnsemble::kU ? unitary_angles(A) : paired_angles(A);
    return s;
  }
  throw InvariantError("orthonormalization kept failing");
}

std::vector<double> weyl_usp_angles(int N, std::mt19937_64& g) {
  if (N < 1 || N > 4) throw ValidationError("the Weyl rejection sampler is for N <= 4");
  // Density bound: each (cos - cos)^2 <= 4, sin^2 <= 1.
  double bound = std::pow(4.0, N * (N - 1) / 2);
  std::vector<double> phi(static_cast<std::size_t>(N));
  while (true) {
    double w = 1;
    for (double& p : phi) {
      p = kPi * uniform01(g);
      w *= std::sin(p) * std::sin(p);
    }
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) w *= std::pow(std::cos(phi[static_cast<std::size_t>(i)]) - std::cos(phi[static_cast<std::size_t>(j)]), 2);
    if (uniform01(g) * bound < w) break;
  }
  std::sort(phi.begin(), phi.end());
  return phi;
}

double usp2_angle_cdf(double phi) {
  phi = std::clamp(phi, 0.0, kPi);
  return (phi - std::sin(phi) * std::cos(phi)) / kPi;
}

namespace {

cd log_one_minus_unit(double phase) {
  // log(1 - e^{i phase}) on the principal branch.
  double r = std::remainder(phase, 2 * kPi);
  if (r == 0) return {-std::numeric_limits<double>::infinity(), 0.0};
  return std::log(1.0 - std::polar(1.0, r));
}

}  // namespace

std::complex<double> log_char_poly(const RmtSample& s, double theta) {
  cd acc = 0;
  for (double phi : s.angles) {
    acc += log_one_minus_unit(phi - theta);
    if (s.ensemble != MatrixEnsemble::kU) acc += log_one_minus_unit(-phi - theta);
  }
  return acc;
}

EigenphaseSet as_eigenphases(const RmtSample& s) {
  EigenphaseSet Z;
  Z.method = ensemble_name(s.ensemble);
  for (double phi : s.angles) {
    double t = phi / (2 * kPi);
    if (s.ensemble == MatrixEnsemble::kU) {
      Z.theta.push_back(t >= 0.5 ? t - 1 : t);
    } else {
      Z.theta.push_back(t);
      Z.theta.push_back(t >= 0.5 ? t - 1 : -t);
    }
  }
  for (double& t : Z.theta) {
    if (t >= 0.5) t -= 1;
  }
  std::sort(Z.theta.begin(), Z.theta.end());
  Z.residual.assign(Z.theta.size(), s.residual);
  return Z;
}

std::complex<double> usp_mean_log_char_poly(int N, double theta) {
  cd acc = 0;
  for (int m = 1; m <= N; ++m) acc += std::polar(1.0, -2.0 * m * theta) / (2.0 * m);
  return acc;
}

void validate(const RmtConfig& cfg) {
  check_n(cfg.N);
  if (cfg.samples < 2) throw ValidationError("need at least two samples");
  if (cfg.shard_size == 0) throw ValidationError("shard size must be positive");
  for (double t : cfg.theta)
    if (!std::isfinite(t)) throw ValidationError("non-finite theta");
  for (double t : cfg.count_theta)
    if (!(t >= 0 && t <= 1)) throw ValidationError("count phases must lie in [0, 1]");
}

RmtSweepResult rmt_sweep(const RmtConfig& cfg) {
  validate(cfg);
  std::size_t shards = static_cast<std::size_t>((cfg.samples + cfg.shard_size - 1) / cfg.shard_size);
  struct Out {
    std::vector<RmtRecord> records;
    int resamples = 0;
  };
  std::vector<std::optional<Out>> outs(shards);
  std::vector<std::exception_ptr> errors(shards);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  int kappa = cfg.ensemble == MatrixEnsemble::kU ? cfg.N : 2 * cfg.N;

  auto run = [&](std::size_t k) {
    Out o;
    auto g = shard_rng(cfg.seed, k, static_cast<std::uint64_t>(cfg.ensemble) + 1);
    std::uint64_t start = static_cast<std::uint64_t>(k) * cfg.shard_size;
    std::uint64_t count = std::min<std::uint64_t>(cfg.shard_size, cfg.samples - start);
    for (std::uint64_t i = 0; i < count; ++i) {
      RmtSample s = sample_haar(cfg.ensemble, cfg.N, g);
      o.resamples += s.resamples;
      RmtRecord rec;
      for (double th : cfg.theta) rec.log_z.push_back(log_char_poly(s, th));
      if (!cfg.count_theta.empty()) {
        EigenphaseSet Z = as_eigenphases(s);
        for (double th : cfg.count_theta) rec.s_theta.push_back(zero_count(Z, th) - kappa * th);
      }
      for (double phi : s.angles) {
        if (cfg.ensemble == MatrixEnsemble::kU) {
          rec.trace1 += std::polar(1.0, phi);
          rec.trace2 += std::polar(1.0, 2 * phi);
        } else {
          rec.trace1 += 2 * std::cos(phi);
          rec.trace2 += 2 * std::cos(2 * phi);
        }
      }
      rec.residual = s.residual;
      if (cfg.keep_angles) rec.angles = s.angles;
      o.records.push_back(std::move(rec));
    }
    return o;
  };
  auto worker = [&] {
    while (!stop.load()) {
      std::size_t k = next.fetch_add(1);
      if (k >= shards) return;
      try {
        outs[k] = run(k);
      } catch (...) {
        errors[k] = std::current_exception();
        stop = true;
        return;
      }
    }
  };
  unsigned width = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  width = static_cast<unsigned>(std::min<std::size_t>(width, shards));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < width; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RmtSweepResult r;
  r.kappa = kappa;
  for (auto& o : outs) {
    r.resamples += o->resamples;
    for (auto& rec : o->records) {
      r.max_residual = std::max(r.max_residual, rec.residual);
      r.records.push_back(std::move(rec));
    }
  }
  return r;
}

std::vector<RmtMeanRow> rmt_means(const RmtSweepResult& r, const RmtConfig& cfg) {
  std::vector<RmtMeanRow> rows;
  std::size_t k = cfg.theta.size();
  std::vector<std::vector<double>> re(k), im(k);
  for (const auto& rec : r.records) {
    for (std::size_t j = 0; j < k; ++j) {
      re[j].push_back(rec.log_z[j].real());
      im[j].push_back(rec.log_z[j].imag());
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    RmtMeanRow row;
    row.theta = cfg.theta[j];
    row.re = mean_estimate(re[j]);
    row.im = mean_estimate(im[j]);
    if (cfg.ensemble == MatrixEnsemble::kUSp) {
      cd e = usp_mean_log_char_poly(cfg.N, row.theta);
      row.exact_re = e.real();
      row.exact_im = e.imag();
    } else {
      row.exact_re = row.exact_im = std::numeric_limits<double>::quiet_NaN();
    }
    row.clamp_target = 0.5 * clamp_log(cfg.N, 2 * row.theta);
    std::vector<double> d(re[j].size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = re[0][i] - re[j][i];
    row.diff = mean_estimate(d);
    row.diff_target = 0.5 * clamp_log(cfg.N, 2 * cfg.theta[0]) - row.clamp_target;
    row.diff_z = row.diff.se > 0 ? (row.diff.value - row.diff_target) / row.diff.se : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<RmtCovarianceRow> rmt_covariances(const RmtSweepResult& r, const RmtConfig& cfg) {
  std::vector<RmtCovarianceRow> rows;
  std::size_t k = cfg.theta.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (double a2 : {1.0, -1.0}) {
        std::vector<double> x, y;
        for (const auto& rec : r.records) {
          x.push_back(rec.log_z[i].real() + a2 * rec.log_z[j].real());
          y.push_back(rec.log_z[i].imag() + a2 * rec.log_z[j].imag());
        }
        RmtCovarianceRow row;
        row.a1 = 1;
        row.a2 = a2;
        row.t1 = cfg.theta[i];
        row.t2 = cfg.theta[j];
        row.var_re = covariance(x, x);
        row.var_im = covariance(y, y);
        auto m = moment_targets({1, a2}, {row.t1, row.t2}, cfg.N);
        row.target = m.var_re;
        row.target_im = m.var_im;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace fflab
