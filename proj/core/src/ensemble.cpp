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

#include "fflab/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "fflab/errors.hpp"
#include "fflab/factor.hpp"

namespace fflab {

namespace {

using cd = std::complex<double>;

std::uint32_t q_of(const EnsembleContext& ctx) { return static_cast<std::uint32_t>(ctx.F->q()); }

double log_q(std::uint32_t q) { return std::log(static_cast<double>(q)); }

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b) throw ValidationError("q^n overflows");
    r *= b;
  }
  return r;
}

}  // namespace

double t_of_theta(double theta, std::uint32_t q) { return 2 * std::numbers::pi * theta / log_q(q); }
double theta_of_t(double t, std::uint32_t q) { return t * log_q(q) / (2 * std::numbers::pi); }

int family_kappa(const EnsembleContext& ctx, Family f, int n) {
  if (f == Family::kQuadratic) return n % 2 ? n - 1 : n - 2;
  if (!ctx.TT) throw ValidationError("the twist family needs a curve");
  return ctx.TT->twist_degree(n);
}

void validate(const EnsembleContext& ctx, const SweepConfig& cfg) {
  if (!ctx.F || !ctx.T) throw ValidationError("ensemble context needs a field and a prime table");
  std::uint32_t q = q_of(ctx);
  if (q % 4 != 1) throw ValidationError("the ensembles need q = 1 mod 4, got q = " + std::to_string(q));
  if (cfg.n < 1) throw ValidationError("n must be positive");
  if (cfg.shard_size == 0) throw ValidationError("shard size must be positive");
  if (cfg.family == Family::kQuadratic) {
    int g = family_kappa(ctx, cfg.family, cfg.n) / 2;
    if (ctx.T->max_degree() < g)
      throw BudgetError("prime table degree " + std::to_string(ctx.T->max_degree()) + " is below the genus " + std::to_string(g));
  } else {
    if (!ctx.TT) throw ValidationError("the twist family needs a curve");
    int m = ctx.TT->twist_degree(cfg.n);
    if (2 * ctx.TT->budget() + 1 < m)
      throw BudgetError("twist budget " + std::to_string(ctx.TT->budget()) + " is too small for degree " + std::to_string(m));
  }
  if (cfg.mode == SamplingMode::kExhaustive) {
    double size = std::pow(static_cast<double>(q), cfg.n - 1) * (q - 1);
    if (size > static_cast<double>(kExhaustiveLimit))
      throw ValidationError("exhaustive mode needs q^{n-1}(q-1) <= 1e7");
  } else if (cfg.samples == 0) {
    throw ValidationError("sample mode needs a positive sample count");
  }
  for (double th : cfg.theta) {
    if (!std::isfinite(th)) throw ValidationError("non-finite theta");
  }
  if (!cfg.dirichlet_t.empty()) {
    cfg.approx.validate(q);
    if (cfg.family == Family::kEllipticTwist && cfg.approx.X > ctx.TT->budget())
      throw BudgetError("X exceeds the twist budget");
  }
}

DSample evaluate(const EnsembleContext& ctx, const SweepConfig& cfg, const Poly& D, std::uint64_t index,
                 std::optional<int> root_hint) {
  std::uint32_t q = q_of(ctx);
  DSample s;
  s.index = index;
  LPolynomial L = cfg.family == Family::kQuadratic ? l_star(*ctx.T, D) : twist_l(*ctx.TT, D, root_hint);
  s.root_number = L.root_number;
  EigenphaseSet Z = eigenphases(L);

  s.log_l.reserve(cfg.theta.size());
  s.s_theta.reserve(cfg.theta.size());
  for (double th : cfg.theta) {
    cd point(0.5, t_of_theta(th, q));
    LogValue v = log_abs_L(Z, q, point);
    if (!v.vanished && L.eta) v.value += static_cast<double>(L.eta) * std::log(1.0 - std::exp(-point * log_q(q)));
    s.log_l.push_back(v.value);
    s.s_theta.push_back(S_theta(Z, th));
  }

  if (!cfg.dirichlet_t.empty()) {
    int X = cfg.approx.X;
    LogCoefficients c = cfg.family == Family::kQuadratic
                            ? quadratic_log_coefficients(*ctx.F, L, D, X, cfg.prime_part)
                            : twist_log_coefficients(*ctx.TT, D, X);
    for (double t : cfg.dirichlet_t) {
      cd point(cfg.approx.sigma0(), t);
      s.dx.push_back(dirichlet_DX(c, point, X));
      if (cfg.prime_part) s.px.push_back(prime_PX(c, point, X));
    }
  }

  s.min_phase = 1.0;
  for (double th : Z.theta) s.min_phase = std::min(s.min_phase, std::abs(th));
  s.rh_residual = Z.max_residual();
  if (cfg.keep_phases) s.phases = Z.theta;
  if (cfg.keep_l) s.L = std::move(L);
  return s;
}

namespace {

struct ShardOut {
  std::vector<DSample> samples;
  std::uint64_t drawn = 0;
  std::uint64_t rejected_squarefree = 0;
  std::uint64_t rejected_family = 0;
};

class ShardRunner {
 public:
  ShardRunner(const EnsembleContext& ctx, const SweepConfig& cfg) : ctx_(ctx), cfg_(cfg) {
    if (cfg.family == Family::kEllipticTwist) sign_ = plus_family_sign(*ctx.TT, cfg.n);
    total_ = ipow(ctx.F->q(), cfg.n);
  }

  std::size_t shard_count() const {
    std::uint64_t units = cfg_.mode == SamplingMode::kExhaustive ? total_ : cfg_.samples;
    return static_cast<std::size_t>((units + cfg_.shard_size - 1) / cfg_.shard_size);
  }

  ShardOut run(std::size_t shard) const {
    ShardOut out;
    std::uint64_t size = cfg_.shard_size;
    std::uint64_t start = static_cast<std::uint64_t>(shard) * size;
    if (cfg_.mode == SamplingMode::kExhaustive) {
      std::uint64_t end = std::min(total_, start + size);
      for (std::uint64_t idx = start; idx < end; ++idx) consider(idx, out);
    } else {
      std::uint64_t want = std::min(size, cfg_.samples - start);
      auto g = shard_rng(cfg_.seed, shard);
      while (out.samples.size() < want) consider(uniform_below(g, total_), out);
    }
    return out;
  }

 private:
  void consider(std::uint64_t idx, ShardOut& out) const {
    ++out.drawn;
    Poly D = monic_from_index(*ctx_.F, cfg_.n, idx);
    if (!is_squarefree(*ctx_.F, D)) {
      ++out.rejected_squarefree;
      return;
    }
    std::optional<int> hint;
    if (cfg_.family == Family::kEllipticTwist) {
      const EllipticCurveFF& E = ctx_.TT->curve();
      if (!in_family(E, D)) {
        ++out.rejected_family;
        return;
      }
      int chi = chi_of_M(E, D);
      if (cfg_.plus_only && chi != sign_) {
        ++out.rejected_family;
        return;
      }
      hint = sign_ * chi;
    }
    out.samples.push_back(evaluate(ctx_, cfg_, D, idx, hint));
  }

  const EnsembleContext& ctx_;
  const SweepConfig& cfg_;
  int sign_ = 1;
  std::uint64_t total_ = 0;
};

}  // namespace

SweepResult sweep(const EnsembleContext& ctx, const SweepConfig& cfg) {
  validate(ctx, cfg);
  ShardRunner runner(ctx, cfg);
  std::size_t shards = runner.shard_count();
  std::vector<std::optional<ShardOut>> outs(shards);
  std::vector<std::exception_ptr> errors(shards);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto t0 = std::chrono::steady_clock::now();

  auto worker = [&] {
    while (!stop.load()) {
      std::size_t k = next.fetch_add(1);
      if (k >= shards) return;
      if (cfg.time_budget > 0) {
        std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
        if (el.count() > cfg.time_budget) {
          stop = true;
          return;
        }
      }
      try {
        outs[k] = runner.run(k);
      } catch (...) {
        errors[k] = std::current_exception();
        stop = true;
        return;
      }
    }
  };
  unsigned width = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  width = static_cast<unsigned>(std::min<std::size_t>(width, std::max<std::size_t>(shards, 1)));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < width; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult r;
  r.kappa = family_kappa(ctx, cfg.family, cfg.n);
  r.shards_total = shards;
  for (std::size_t k = 0; k < shards; ++k) {
    if (!outs[k]) break;
    ShardOut& o = *outs[k];
    r.drawn += o.drawn;
    r.rejected_squarefree += o.rejected_squarefree;
    r.rejected_family += o.rejected_family;
    std::move(o.samples.begin(), o.samples.end(), std::back_inserter(r.samples));
    ++r.shards_done;
  }
  r.complete = r.shards_done == shards;
  return r;
}

NormalSummary summarize_normal(const std::vector<double>& z, std::size_t excluded) {
  NormalSummary s;
  s.count = z.size();
  s.excluded = excluded;
  for (int i = -12; i <= 12; ++i) s.cdf_grid.push_back(0.25 * i);
  if (z.empty()) return s;
  Moments m;
  for (double v : z) m.add(v);
  s.mean = m.mean();
  s.variance = m.variance();
  s.skewness = m.skewness();
  s.excess_kurtosis = m.excess_kurtosis();
  s.ks = ks_normal(z);
  s.cdf = empirical_cdf(z, s.cdf_grid);
  return s;
}

CltResult clt_statistic(const SweepResult& r, const std::vector<double>& a, const std::vector<std::size_t>& theta_cols,
                        const std::vector<double>& t, double scale, Family family) {
  if (a.size() != theta_cols.size() || a.size() != t.size()) throw ValidationError("CLT plan sizes differ");
  CltResult c;
  c.a = a;
  c.t = t;
  c.scale = scale;
  c.mean_sign = family_mean_sign(family);
  c.targets = moment_targets(a, t, scale);
  std::size_t excluded = 0;
  for (const DSample& s : r.samples) {
    double re = 0, im = 0;
    bool vanished = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
      cd v = s.log_l.at(theta_cols[j]);
      if (!std::isfinite(v.real())) vanished = true;
      re += a[j] * v.real();
      im += a[j] * v.imag();
    }
    if (vanished) {
      ++excluded;
      continue;
    }
    c.z_re.push_back((re - c.mean_sign * c.targets.mean) / std::sqrt(c.targets.var_re));
    if (!c.targets.degenerate_im) c.z_im.push_back(im / std::sqrt(c.targets.var_im));
  }
  c.re = summarize_normal(c.z_re, excluded);
  if (!c.targets.degenerate_im) c.im = summarize_normal(c.z_im, excluded);
  return c;
}

double covariance_target(double ti, double tj, int X, bool imaginary) {
  double dm = 0.5 * clamp_log(X, ti - tj), dp = 0.5 * clamp_log(X, ti + tj);
  return imaginary ? dm - dp : dm + dp;
}

double covariance_finite_target(double ti, double tj, int X, double sigma0, std::uint32_t q, bool imaginary) {
  // Each prime P contributes sum_k chi(P)^k |P|^{-k s} / k. With chi(P) = 0
  // with probability 1/(|P|+1) and +-1 otherwise, odd k carry chi(P) and even
  // k carry chi(P)^2; distinct primes are taken as uncorrelated.
  double L = log_q(q), acc = 0;
  auto kernel = [&](double t, double x) { return imaginary ? std::sin(t * x) : std::cos(t * x); };
  for (int d = 1; d <= X; ++d) {
    double Q = std::pow(static_cast<double>(q), d), p = Q / (Q + 1);
    double odd_i = 0, odd_j = 0, even_i = 0, even_j = 0;
    for (int k = 1; k * d <= X; ++k) {
      double w = std::pow(Q, -k * sigma0) / k, x = k * d * L;
      (k % 2 ? odd_i : even_i) += w * kernel(ti, x);
      (k % 2 ? odd_j : even_j) += w * kernel(tj, x);
    }
    acc += static_cast<double>(prime_count(q, d)) * (p * odd_i * odd_j + p * (1 - p) * even_i * even_j);
  }
  return acc;
}

std::vector<CovarianceRow> covariance_estimate(const SweepResult& r, const SweepConfig& cfg, std::uint32_t q) {
  std::size_t k = cfg.dirichlet_t.size();
  std::vector<std::vector<double>> re(k), im(k);
  for (const DSample& s : r.samples) {
    for (std::size_t j = 0; j < k; ++j) {
      re[j].push_back(s.dx.at(j).real());
      im[j].push_back(s.dx.at(j).imag());
    }
  }
  std::vector<CovarianceRow> rows;
  for (int part = 0; part < 2; ++part) {
    bool imag = part == 1;
    auto& cols = imag ? im : re;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        CovarianceRow row;
        row.part = imag ? "im" : "re";
        row.i = i;
        row.j = j;
        row.t_i = cfg.dirichlet_t[i];
        row.t_j = cfg.dirichlet_t[j];
        row.empirical = covariance(cols[i], cols[j]);
        row.target = covariance_target(row.t_i, row.t_j, cfg.approx.X, imag);
        double se = row.empirical.se > 0 ? row.empirical.se : std::numeric_limits<double>::min();
        row.z = (row.empirical.value - row.target) / se;
        if (cfg.family == Family::kQuadratic) {
          row.finite_target = covariance_finite_target(row.t_i, row.t_j, cfg.approx.X, cfg.approx.sigma0(), q, imag);
          row.z_finite = (row.empirical.value - row.finite_target) / se;
        } else {
          row.finite_target = row.z_finite = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

double FluctuationCase::target() const {
  if (a1 == a3 && a2 == a4) return 1;
  if (a1 == a3 || a2 == a4) return 0.5;
  if (a2 == a3 || a1 == a4) return -0.5;
  return 0;
}

std::vector<FluctuationCase> standard_fluctuation_cases() {
  return {{"identical", 0.2, 0.6, 0.2, 0.6},
          {"shared-left", 0.2, 0.6, 0.2, 0.8},
          {"shared-right", 0.2, 0.8, 0.4, 0.8},
          {"touching", 0.2, 0.4, 0.4, 0.8},
          {"disjoint", 0.2, 0.4, 0.6, 0.8}};
}

std::vector<double> fluctuation_alphas(const std::vector<FluctuationCase>& cases) {
  std::vector<double> a;
  for (const auto& c : cases) a.insert(a.end(), {c.a1, c.a2, c.a3, c.a4});
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<FluctuationRow> fluctuation_correlations(const std::vector<std::vector<double>>& S_at_alpha,
                                                     const std::vector<double>& alphas,
                                                     const std::vector<FluctuationCase>& cases, double delta, int kappa) {
  if (!(delta >= 0 && delta < 1)) throw ValidationError("delta must lie in [0, 1)");
  auto col = [&](double a) {
    auto it = std::find(alphas.begin(), alphas.end(), a);
    if (it == alphas.end()) throw ValidationError("alpha " + std::to_string(a) + " was not evaluated");
    return static_cast<std::size_t>(it - alphas.begin());
  };
  double norm = std::sqrt((1 - delta) * std::log(static_cast<double>(kappa))) / std::numbers::pi;
  std::vector<FluctuationRow> rows;
  for (const auto& c : cases) {
    std::size_t i1 = col(c.a1), i2 = col(c.a2), i3 = col(c.a3), i4 = col(c.a4);
    std::vector<double> x, y;
    for (const auto& S : S_at_alpha) {
      x.push_back((S[i2] - S[i1]) / norm);
      y.push_back((S[i4] - S[i3]) / norm);
    }
    FluctuationRow row;
    row.c = c;
    row.correlation = correlation(x, y);
    row.target = c.target();
    row.var_first = covariance(x, x).value;
    row.var_second = covariance(y, y).value;
    rows.push_back(row);
  }
  return rows;
}

std::pair<double, double> zero_count_thetas(int kappa, double delta1, double delta2) {
  double t1 = 0.25 * std::pow(static_cast<double>(kappa), -delta1);
  double t2 = 0.5 * std::pow(static_cast<double>(kappa), -delta2);
  return {std::min(t1, t2), std::max(t1, t2)};
}

ZeroCountClt zero_count_clt(const std::vector<double>& S1, const std::vector<double>& S2, int kappa, double delta1,
                            double delta2) {
  if (S1.size() != S2.size()) throw ValidationError("zero-count samples differ in size");
  double norm = std::sqrt(std::log(static_cast<double>(kappa))) / std::numbers::pi;
  std::vector<double> z;
  for (std::size_t i = 0; i < S1.size(); ++i) z.push_back((S2[i] - S1[i]) / norm);
  ZeroCountClt r;
  r.target_variance = 1 - 0.5 * (delta1 + delta2);
  r.summary = summarize_normal(z);
  return r;
}

EigenphaseSet synthetic_iid_phases(int kappa, std::mt19937_64& g) {
  EigenphaseSet Z;
  Z.method = "synthetic-iid";
  for (int i = 0; i < kappa / 2; ++i) {
    double th = 0.5 * uniform01(g);
    Z.theta.push_back(th);
    Z.theta.push_back(-th);
  }
  std::sort(Z.theta.begin(), Z.theta.end());
  Z.residual.assign(Z.theta.size(), 0.0);
  return Z;
}

std::vector<double> low_lying_scan(const SweepResult& r, int genus, const std::vector<double>& y_grid) {
  std::vector<double> out;
  for (double y : y_grid) {
    double w = 1.0 / (y * genus);
    std::size_t hits = 0;
    for (const DSample& s : r.samples) hits += s.min_phase < w;
    out.push_back(r.samples.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(r.samples.size()));
  }
  return out;
}

SymmetryType symmetry_type(Family f) {
  return f == Family::kQuadratic ? SymmetryType::kSymplectic : SymmetryType::kOrthogonalEven;
}

double reference_density(SymmetryType s, double x) {
  double sinc = x == 0 ? 1.0 : std::sin(2 * std::numbers::pi * x) / (2 * std::numbers::pi * x);
  return s == SymmetryType::kSymplectic ? 1 - sinc : 1 + sinc;
}

std::vector<DensityBin> one_level_density(const SweepResult& r, double bin_width, double x_max, SymmetryType s) {
  if (!(bin_width > 0) || !(x_max > bin_width)) throw ValidationError("bad density binning");
  std::size_t nb = static_cast<std::size_t>(std::ceil(x_max / bin_width - 1e-12));
  std::vector<double> mass(nb, 0.0);
  for (const DSample& d : r.samples) {
    if (d.phases.empty() && r.kappa > 0) throw ValidationError("one-level density needs the phases");
    for (double th : d.phases) {
      double x = r.kappa * std::abs(th);
      if (x >= x_max) continue;
      mass[std::min(nb - 1, static_cast<std::size_t>(x / bin_width))] += 0.5;
    }
  }
  std::vector<DensityBin> bins;
  double N = static_cast<double>(std::max<std::size_t>(r.samples.size(), 1));
  for (std::size_t b = 0; b < nb; ++b) {
    DensityBin bin;
    bin.lo = b * bin_width;
    bin.hi = std::min(x_max, (b + 1) * bin_width);
    bin.density = mass[b] / (N * (bin.hi - bin.lo));
    bin.reference = reference_density(s, 0.5 * (bin.lo + bin.hi));
    bins.push_back(bin);
  }
  return bins;
}

NonvanishingResult nonvanishing_proportion(const SweepResult& r, std::size_t theta_col, double alpha) {
  NonvanishingResult n;
  n.alpha = alpha;
  n.total = r.samples.size();
  for (const DSample& s : r.samples) n.nonvanishing += std::isfinite(s.log_l.at(theta_col).real());
  n.proportion = n.total ? static_cast<double>(n.nonvanishing) / static_cast<double>(n.total) : 0.0;
  return n;
}

GpScan gaussian_process_scan(const SweepResult& r, const std::vector<std::size_t>& theta_cols,
                             const std::vector<double>& delta, Family family) {
  if (theta_cols.size() != delta.size()) throw ValidationError("GP scan sizes differ");
  double lk = std::log(static_cast<double>(r.kappa));
  int eps = family_mean_sign(family);
  std::size_t k = delta.size();
  std::vector<std::vector<double>> re(k), im(k);
  for (const DSample& s : r.samples) {
    bool ok = true;
    for (std::size_t c : theta_cols) ok = ok && std::isfinite(s.log_l.at(c).real());
    if (!ok) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (!(delta[j] >= 0 && delta[j] < 1)) throw ValidationError("delta must lie in [0, 1)");
      cd v = s.log_l[theta_cols[j]];
      re[j].push_back((v.real() - 0.5 * eps * lk) / std::sqrt(0.5 * (1 + delta[j]) * lk));
      im[j].push_back(v.imag() / std::sqrt(0.5 * (1 - delta[j]) * lk));
    }
  }
  GpScan g;
  g.delta = delta;
  Eigen::Index K = static_cast<Eigen::Index>(k);
  g.cov_re = g.cov_im = g.target_re = g.target_im = g.se_re = g.se_im = Eigen::MatrixXd::Zero(K, K);
  for (std::size_t i = 0; i < k; ++i) {
    g.re.push_back(summarize_normal(re[i]));
    g.im.push_back(summarize_normal(im[i]));
    for (std::size_t j = 0; j < k; ++j) {
      Eigen::Index a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      auto cr = covariance(re[i], re[j]);
      auto ci = covariance(im[i], im[j]);
      g.cov_re(a, b) = cr.value;
      g.se_re(a, b) = cr.se;
      g.cov_im(a, b) = ci.value;
      g.se_im(a, b) = ci.se;
      g.target_re(a, b) = i == j ? 1.0 : 2 * std::min(delta[i], delta[j]) / std::sqrt((1 + delta[i]) * (1 + delta[j]));
      g.target_im(a, b) = i == j ? 1.0 : 0.0;
    }
  }
  return g;
}

}  // namespace fflab
