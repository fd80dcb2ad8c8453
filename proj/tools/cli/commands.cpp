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

#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "fflab/dirichlet.hpp"
#include "fflab/elliptic.hpp"
#include "fflab/ensemble.hpp"
#include "fflab/errors.hpp"
#include "fflab/factor.hpp"
#include "fflab/rmt.hpp"

namespace fflab::cli {

namespace {

FieldSpec field_from_q(std::int64_t q) {
  if (q < 3 || q > static_cast<std::int64_t>(kMaxUserFieldOrder)) throw ValidationError(fmt::format("q = {} is out of range", q));
  std::uint32_t p = 2;
  while (static_cast<std::int64_t>(p) * p <= q && q % p) ++p;
  if (q % p) p = static_cast<std::uint32_t>(q);
  std::int64_t r = q;
  std::uint32_t e = 0;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) throw ValidationError(fmt::format("q = {} is not a prime power", q));
  return FieldSpec::make(p, e);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Field, tables and curve for one family; addresses stay fixed.
struct Setup {
  std::unique_ptr<Field> F;
  Family family = Family::kQuadratic;
  std::unique_ptr<PrimeTable> T;
  std::unique_ptr<EllipticCurveFF> E;
  std::unique_ptr<TwistTable> TT;

  EnsembleContext ctx() const { return {F.get(), T.get(), TT.get()}; }
  std::uint32_t q() const { return F->q(); }
};

Family parse_family(const std::string& s) {
  if (s == "quadratic") return Family::kQuadratic;
  if (s == "elliptic" || s == "elliptic-twist") return Family::kEllipticTwist;
  throw ValidationError("unknown family '" + s + "' (quadratic, elliptic)");
}

Setup make_setup(Config& c, int n) {
  Setup s;
  s.F = std::make_unique<Field>(field_from_q(c.integer("q", 5)));
  s.family = parse_family(c.str("family", "quadratic"));
  if (s.q() % 4 != 1) throw ValidationError(fmt::format("the families need q = 1 mod 4, got q = {}", s.q()));
  if (n < 1) throw ValidationError("n must be positive");
  if (s.family == Family::kQuadratic) {
    s.T = std::make_unique<PrimeTable>(*s.F, std::max(1, (n - 1) / 2));
  } else {
    int budget = static_cast<int>(c.integer("budget", 4));
    if (budget < 1 || budget > 10) throw ValidationError("budget must lie in [1, 10]");
    s.T = std::make_unique<PrimeTable>(*s.F, budget);
    auto path = c.maybe_str("curve-config");
    CurveConfig cc = path ? parse_curve_config(*s.F, read_file(*path)) : toy_curve(*s.F);
    s.E = std::make_unique<EllipticCurveFF>(*s.F, cc);
    s.TT = std::make_unique<TwistTable>(*s.E, *s.T);
  }
  return s;
}

json curve_json(const Setup& s, int n) {
  if (!s.E) return nullptr;
  json bad = json::array();
  for (const auto& [P, r] : s.E->bad_primes()) bad.push_back({{"prime", to_string(P)}, {"reduction", reduction_name(r)}});
  return {{"A", to_string(s.E->A())},
          {"B", to_string(s.E->B())},
          {"discriminant", to_string(s.E->discriminant())},
          {"multiplicative_part", to_string(s.E->multiplicative_part())},
          {"bad_primes", bad},
          {"conductor_degree", s.TT->conductor_degree(n)},
          {"conductor_detected", s.TT->conductor_detected()},
          {"root_number", s.TT->root_number()},
          {"twist_degree", s.TT->twist_degree(n)},
          {"plus_family_sign", plus_family_sign(*s.TT, n)}};
}

json summary_json(const NormalSummary& s) {
  return {{"count", s.count},         {"excluded", s.excluded},
          {"mean", s.mean},           {"variance", s.variance},
          {"skewness", s.skewness},   {"excess_kurtosis", s.excess_kurtosis},
          {"ks", s.ks},               {"ks_critical_05", s.count ? ks_critical(s.count, 0.05) : 0.0},
          {"cdf_grid", s.cdf_grid},   {"cdf", s.cdf}};
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

SweepConfig sweep_base(Config& c, Family family, int n) {
  SweepConfig cfg;
  cfg.family = family;
  cfg.n = n;
  cfg.samples = c.u64("sample", 0);
  cfg.mode = cfg.samples ? SamplingMode::kSample : SamplingMode::kExhaustive;
  cfg.seed = c.u64("seed", 1);
  cfg.threads = static_cast<int>(c.integer("threads", 0));
  cfg.shard_size = c.u64("shard-size", 1024);
  cfg.time_budget = c.real("time-budget", 0);
  return cfg;
}

json sweep_counts(const SweepResult& r) {
  return {{"retained", r.samples.size()},
          {"drawn", r.drawn},
          {"rejected_squarefree", r.rejected_squarefree},
          {"rejected_family", r.rejected_family},
          {"acceptance", r.acceptance()},
          {"complete", r.complete},
          {"shards_done", r.shards_done},
          {"shards_total", r.shards_total}};
}

json manifest_json(const Config& c, const std::string& command, const std::string& field, const std::string& family) {
  return {{"command", command},
          {"config_hash", sha256_hex(c.canonical())},
          {"parameters", c.inputs()},
          {"field", field},
          {"family", family},
          {"rng", "mt19937_64, one stream per (seed, shard, stream id)"}};
}

RunOutcome finish(RunRecorder& rec, Config& c, json report, const std::string& command, const std::string& field,
                  const std::string& family) {
  c.check_all_used();
  json m = manifest_json(c, command, field, family);
  report["manifest"] = m;
  write_json(rec.path("report.json"), report);
  rec.record("report.json");
  m["runtime"] = c.runtime();
  rec.finish(m);
  return {rec.dir(), report, rec.digests()};
}

void check_complete(const SweepResult& r) {
  if (!r.complete)
    throw BudgetError(fmt::format("time budget ran out after {} of {} shards; partial outputs written", r.shards_done,
                                  r.shards_total));
}

std::vector<std::string> theta_cols(const std::string& prefix, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(fmt::format("{}_{}", prefix, j));
  return out;
}

std::string join_phases(const std::vector<double>& v) { return join_reals(v, ';'); }

}  // namespace

RunOutcome run_lfun(Config& c) {
  auto D_text = c.maybe_str("D");
  int n = static_cast<int>(c.integer("n", 0));
  if (D_text) {
    // n comes from D; the field is needed to read it.
    Field probe(field_from_q(c.integer("q", 5)));
    n = parse_poly(probe, *D_text).degree();
  }
  Setup s = make_setup(c, n);
  SweepConfig cfg = sweep_base(c, s.family, n);
  cfg.plus_only = c.flag("plus-only", false);
  cfg.keep_l = cfg.keep_phases = true;
  RunRecorder rec(c.str("out-dir", "."));

  SweepResult r;
  if (D_text) {
    Poly D = parse_poly(*s.F, *D_text);
    if (!D.is_monic() || !is_squarefree(*s.F, D)) throw ValidationError("D must be monic and square-free");
    std::optional<int> hint;
    if (s.family == Family::kEllipticTwist) {
      if (!in_family(*s.E, D)) throw ValidationError("D is not an admissible twist for this curve");
      hint = plus_family_sign(*s.TT, n) * chi_of_M(*s.E, D);
    }
    r.kappa = family_kappa(s.ctx(), s.family, n);
    r.samples.push_back(evaluate(s.ctx(), cfg, D, monic_index(*s.F, D), hint));
    r.drawn = 1;
  } else {
    r = sweep(s.ctx(), cfg);
  }

  std::vector<std::string> header = {"index", "field", "D", "n", "g", "eta", "root_number", "weight", "degree"};
  for (int k = 0; k <= r.kappa; ++k) header.push_back(fmt::format("b_{}", k));
  header.insert(header.end(), {"rh_residual", "fe_residual", "phases"});
  CsvWriter csv(rec.path("lfun.csv"), header);
  std::string fh = s.F->spec().header();
  double max_rh = 0, max_fe = 0;
  bool symmetric = true;
  std::map<int, std::uint64_t> signs;
  for (const DSample& d : r.samples) {
    const LPolynomial& L = *d.L;
    if (L.degree() != r.kappa) throw InvariantError("L-polynomial degree differs within the family");
    double fe = functional_equation_residual(L);
    max_rh = std::max(max_rh, d.rh_residual);
    max_fe = std::max(max_fe, fe);
    if (L.family == Family::kQuadratic) symmetric = symmetric && quadratic_symmetry_holds(L);
    ++signs[L.root_number];
    std::vector<std::string> row = {std::to_string(d.index),
                                    fh,
                                    to_string(monic_from_index(*s.F, n, d.index)),
                                    std::to_string(n),
                                    std::to_string(L.genus),
                                    std::to_string(L.eta),
                                    std::to_string(L.root_number),
                                    std::to_string(L.weight),
                                    std::to_string(L.degree())};
    for (auto b : L.coeffs) row.push_back(std::to_string(b));
    row.insert(row.end(), {real(d.rh_residual), real(fe), join_phases(d.phases)});
    csv.row(row);
  }
  csv.close();
  rec.record("lfun.csv");

  json sign_counts = json::object();
  for (auto [e, k] : signs) sign_counts[std::to_string(e)] = k;
  json report = {{"command", "lfun"},
                 {"n", n},
                 {"kappa", r.kappa},
                 {"mode", D_text ? "single" : (cfg.mode == SamplingMode::kExhaustive ? "exhaustive" : "sample")},
                 {"counts", sweep_counts(r)},
                 {"max_rh_residual", max_rh},
                 {"max_fe_residual", max_fe},
                 {"root_numbers", sign_counts},
                 {"curve", curve_json(s, n)}};
  if (s.family == Family::kQuadratic) report["integer_symmetry_holds"] = symmetric;
  auto out = finish(rec, c, report, "lfun", fh, std::string(family_name(s.family)));
  check_complete(r);
  return out;
}

namespace {

void write_clt(Config& c, const Setup& s, SweepConfig& cfg, RunRecorder& rec, json& report) {
  std::vector<double> a = c.reals("a", {1.0});
  std::vector<double> t = c.reals("t", {0.0});
  std::string scale_name = c.str("scale", "n");
  int kappa = family_kappa(s.ctx(), s.family, cfg.n);
  if (scale_name != "n" && scale_name != "g") throw ValidationError("scale must be n or g");
  ShiftPlan plan = ShiftPlan::make(a, t, s.q(), kappa, cfg.n);
  double n_scale = cfg.n, g_scale = std::max(1, kappa / 2);
  double scale = scale_name == "n" ? n_scale : g_scale, alt = scale_name == "n" ? g_scale : n_scale;
  for (double tj : t) cfg.theta.push_back(theta_of_t(tj, s.q()));
  SweepResult r = sweep(s.ctx(), cfg);
  std::vector<std::size_t> cols(t.size());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
  CltResult main = clt_statistic(r, a, cols, t, scale, s.family);
  CltResult other = clt_statistic(r, a, cols, t, alt, s.family);

  CsvWriter csv(rec.path("samples.csv"), {"index", "D", "root_number", "vanished", "z_re", "z_im", "z_re_alt"});
  std::size_t k = 0;
  for (const DSample& d : r.samples) {
    bool vanished = false;
    for (std::size_t j : cols) vanished = vanished || !std::isfinite(d.log_l[j].real());
    std::string D = to_string(monic_from_index(*s.F, cfg.n, d.index));
    if (vanished) {
      csv.row({std::to_string(d.index), D, std::to_string(d.root_number), "1", "nan", "nan", "nan"});
      continue;
    }
    csv.row({std::to_string(d.index), D, std::to_string(d.root_number), "0", real(main.z_re[k]),
             main.im ? real(main.z_im[k]) : "nan", real(other.z_re[k])});
    ++k;
  }
  rec.record("samples.csv");

  json regimes = json::array();
  for (Regime g : plan.regimes) regimes.push_back(regime_name(g));
  auto clt_json = [&](const CltResult& x, double sc) {
    json j = {{"scale", sc},
              {"mean_sign", x.mean_sign},
              {"targets",
               {{"mean", x.targets.mean},
                {"var_re", x.targets.var_re},
                {"var_im", x.targets.var_im},
                {"degenerate_im", x.targets.degenerate_im}}},
              {"re", summary_json(x.re)}};
    j["im"] = x.im ? summary_json(*x.im) : json{{"skipped", "degenerate-variance"}};
    return j;
  };
  report["counts"] = sweep_counts(r);
  report["clt"] = {{"a", a}, {"t", t}, {"regimes", regimes}, {"normalization", scale_name}};
  report["clt"]["log_" + scale_name] = clt_json(main, scale);
  report["clt"][scale_name == "n" ? "log_g" : "log_n"] = clt_json(other, alt);
  check_complete(r);
}

void write_covariance_header(CsvWriter*& w, std::unique_ptr<CsvWriter>& own, RunRecorder& rec) {
  own = std::make_unique<CsvWriter>(rec.path("covariance.csv"),
                                    std::vector<std::string>{"kind", "part", "i", "j", "x_i", "x_j", "empirical", "se",
                                                             "target", "z", "finite_target", "z_finite"});
  w = own.get();
  rec.record("covariance.csv");
}

void write_cov(Config& c, const Setup& s, SweepConfig& cfg, RunRecorder& rec, json& report) {
  cfg.approx.X = static_cast<int>(c.integer("X", 11));
  cfg.approx.c = c.real("c", 0.25);
  std::vector<double> def;
  for (double th : {0.1, 0.15, 0.22, 0.3}) def.push_back(t_of_theta(th, s.q()));
  cfg.dirichlet_t = c.reals("t", def);
  cfg.prime_part = c.flag("prime-part", false);
  int kappa = family_kappa(s.ctx(), s.family, cfg.n);
  SweepResult r = sweep(s.ctx(), cfg);
  auto rows = covariance_estimate(r, cfg, s.q());

  std::vector<std::string> header = {"index", "D"};
  for (auto& h : theta_cols("dx_re", cfg.dirichlet_t.size())) header.push_back(h);
  for (auto& h : theta_cols("dx_im", cfg.dirichlet_t.size())) header.push_back(h);
  if (cfg.prime_part)
    for (auto& h : theta_cols("px_re", cfg.dirichlet_t.size())) header.push_back(h);
  CsvWriter samples(rec.path("samples.csv"), header);
  for (const DSample& d : r.samples) {
    std::vector<std::string> row = {std::to_string(d.index), to_string(monic_from_index(*s.F, cfg.n, d.index))};
    for (auto v : d.dx) row.push_back(real(v.real()));
    for (auto v : d.dx) row.push_back(real(v.imag()));
    for (auto v : d.px) row.push_back(real(v.real()));
    samples.row(row);
  }
  rec.record("samples.csv");

  CsvWriter* w = nullptr;
  std::unique_ptr<CsvWriter> own;
  write_covariance_header(w, own, rec);
  std::size_t judged = 0, within = 0, within_finite = 0;
  for (const auto& row : rows) {
    w->row({"shift", row.part, std::to_string(row.i), std::to_string(row.j), real(row.t_i), real(row.t_j),
            real(row.empirical.value), real(row.empirical.se), real(row.target), real(row.z), real(row.finite_target),
            real(row.z_finite)});
    if (row.part == "re" && row.i != row.j) {
      ++judged;
      within += std::abs(row.z) <= 3;
      within_finite += std::abs(row.z_finite) <= 3;
    }
  }
  json regimes = json::array();
  for (double t : cfg.dirichlet_t) regimes.push_back(regime_name(classify_shift(t, s.q(), kappa)));
  report["counts"] = sweep_counts(r);
  report["covariance"] = {{"X", cfg.approx.X},
                          {"sigma0", cfg.approx.sigma0()},
                          {"t", cfg.dirichlet_t},
                          {"regimes", regimes},
                          {"offdiagonal_re_pairs", judged},
                          {"within_3se", within},
                          {"within_3se_finite_target", within_finite},
                          {"fraction_within_3se", judged ? static_cast<double>(within) / judged : 0.0}};
  check_complete(r);
}

json fluctuation_json(const std::vector<FluctuationRow>& rows) {
  json out = json::array();
  for (const auto& f : rows)
    out.push_back({{"case", f.c.name},
                   {"alpha", {f.c.a1, f.c.a2, f.c.a3, f.c.a4}},
                   {"correlation", f.correlation.value},
                   {"se", f.correlation.se},
                   {"target", f.target},
                   {"var_first", f.var_first},
                   {"var_second", f.var_second}});
  return out;
}

void write_fluctuation_csv(RunRecorder& rec, const std::vector<FluctuationRow>& rows) {
  CsvWriter w(rec.path("fluctuation.csv"),
              {"case", "a1", "a2", "a3", "a4", "correlation", "se", "target", "var_first", "var_second"});
  for (const auto& f : rows)
    w.row({f.c.name, real(f.c.a1), real(f.c.a2), real(f.c.a3), real(f.c.a4), real(f.correlation.value),
           real(f.correlation.se), real(f.target), real(f.var_first), real(f.var_second)});
  rec.record("fluctuation.csv");
}

void write_fluct(Config& c, const Setup& s, SweepConfig& cfg, RunRecorder& rec, json& report) {
  double delta = c.real("delta", 0.3);
  double d1 = c.real("zc-delta1", 0.3), d2 = c.real("zc-delta2", 0.3);
  if (!(delta >= 0 && delta < 1) || !(d1 >= 0 && d1 < 1) || !(d2 >= 0 && d2 < 1))
    throw ValidationError("delta values must lie in [0, 1)");
  int kappa = family_kappa(s.ctx(), s.family, cfg.n);
  auto cases = standard_fluctuation_cases();
  auto alphas = fluctuation_alphas(cases);
  for (double a : alphas) cfg.theta.push_back(a / std::pow(kappa, delta));
  auto [th1, th2] = zero_count_thetas(kappa, d1, d2);
  cfg.theta.push_back(th1);
  cfg.theta.push_back(th2);
  for (double th : cfg.theta)
    if (th > 0.5) throw ValidationError("fluctuation phases must stay below 1/2; lower the alphas or raise delta");
  SweepResult r = sweep(s.ctx(), cfg);

  std::size_t k = alphas.size();
  std::vector<std::vector<double>> S(r.samples.size());
  std::vector<double> S1, S2;
  CsvWriter samples(rec.path("samples.csv"), [&] {
    std::vector<std::string> h = {"index", "D"};
    for (auto& x : theta_cols("s", k)) h.push_back(x);
    h.insert(h.end(), {"s_zc1", "s_zc2"});
    return h;
  }());
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const DSample& d = r.samples[i];
    S[i].assign(d.s_theta.begin(), d.s_theta.begin() + static_cast<std::ptrdiff_t>(k));
    S1.push_back(d.s_theta[k]);
    S2.push_back(d.s_theta[k + 1]);
    std::vector<std::string> row = {std::to_string(d.index), to_string(monic_from_index(*s.F, cfg.n, d.index))};
    for (double v : d.s_theta) row.push_back(real(v));
    samples.row(row);
  }
  rec.record("samples.csv");
  auto rows = fluctuation_correlations(S, alphas, cases, delta, kappa);
  write_fluctuation_csv(rec, rows);
  auto zc = zero_count_clt(S1, S2, kappa, d1, d2);
  report["counts"] = sweep_counts(r);
  report["fluctuation"] = {{"delta", delta}, {"kappa", kappa}, {"alphas", alphas}, {"table", fluctuation_json(rows)}};
  report["zero_count_clt"] = {{"delta1", d1},
                              {"delta2", d2},
                              {"theta1", th1},
                              {"theta2", th2},
                              {"target_variance", zc.target_variance},
                              {"summary", summary_json(zc.summary)}};
  check_complete(r);
}

void write_lowlying(Config& c, const Setup& s, SweepConfig& cfg, RunRecorder& rec, json& report) {
  std::vector<double> y = c.reals("y", {0.25, 0.5, 1, 2, 4, 8, 16});
  for (double v : y)
    if (!(v > 0)) throw ValidationError("y values must be positive");
  SweepResult r = sweep(s.ctx(), cfg);
  int genus = std::max(1, r.kappa / 2);
  auto p = low_lying_scan(r, genus, y);
  CsvWriter w(rec.path("lowlying.csv"), {"y", "window", "proportion"});
  for (std::size_t i = 0; i < y.size(); ++i) w.row({real(y[i]), real(1.0 / (y[i] * genus)), real(p[i])});
  rec.record("lowlying.csv");
  report["counts"] = sweep_counts(r);
  report["lowlying"] = {{"genus", genus}, {"y", y}, {"proportion", p}};
  check_complete(r);
}

void write_density(Config& c, const Setup& s, SweepConfig& cfg, RunRecorder& rec, json& report) {
  double bin = c.real("bin", 0.25), x_max = c.real("x-max", 5);
  cfg.keep_phases = true;
  SweepResult r = sweep(s.ctx(), cfg);
  SymmetryType sym = symmetry_type(s.family);
  std::string tag = sym == SymmetryType::kSymplectic ? "symplectic" : "so-even";
  auto bins = one_level_density(r, bin, x_max, sym);
  CsvWriter w(rec.path("density.csv"), {"symmetry", "lo", "hi", "density", "reference"});
  double mass = 0;
  for (const auto& b : bins) {
    w.row({tag, real(b.lo), real(b.hi), real(b.density), real(b.reference)});
    mass += b.density * (b.hi - b.lo);
  }
  rec.record("density.csv");
  report["counts"] = sweep_counts(r);
  report["density"] = {{"symmetry", tag}, {"bin", bin}, {"x_max", x_max}, {"kappa", r.kappa}, {"mass", mass}};
  check_complete(r);
}

void write_nonvanishing(Config& c, const Setup& s, SweepConfig& cfg, RunRecorder& rec, json& report) {
  double alpha = c.real("alpha", 0);
  int kappa = family_kappa(s.ctx(), s.family, cfg.n);
  double denom = s.family == Family::kQuadratic ? cfg.n : kappa;
  cfg.theta = {alpha / denom};
  SweepResult r = sweep(s.ctx(), cfg);
  auto nv = nonvanishing_proportion(r, 0, alpha);
  CsvWriter w(rec.path("samples.csv"), {"index", "D", "root_number", "log_abs_l", "arg_l"});
  for (const DSample& d : r.samples)
    w.row({std::to_string(d.index), to_string(monic_from_index(*s.F, cfg.n, d.index)), std::to_string(d.root_number),
           real(d.log_l[0].real()), real(d.log_l[0].imag())});
  rec.record("samples.csv");
  bool quad = s.family == Family::kQuadratic;
  report["counts"] = sweep_counts(r);
  report["nonvanishing"] = {{"alpha", alpha},
                            {"theta", cfg.theta[0]},
                            {"total", nv.total},
                            {"nonvanishing", nv.nonvanishing},
                            {"proportion", nv.proportion},
                            {"reference_at_0", quad ? kNonvanishingR0 : kNonvanishingE0},
                            {"reference_at_infinity", quad ? kNonvanishingRInf : kNonvanishingEInf}};
  check_complete(r);
}

void write_gp(Config& c, const Setup& s, SweepConfig& cfg, RunRecorder& rec, json& report) {
  std::vector<double> delta = c.reals("delta", {0.0, 0.2, 0.4, 0.6});
  int kappa = family_kappa(s.ctx(), s.family, cfg.n);
  std::vector<std::size_t> cols;
  for (double d : delta) {
    if (!(d >= 0 && d < 1)) throw ValidationError("delta values must lie in [0, 1)");
    cols.push_back(cfg.theta.size());
    cfg.theta.push_back(std::pow(kappa, -d));
  }
  SweepResult r = sweep(s.ctx(), cfg);
  GpScan g = gaussian_process_scan(r, cols, delta, s.family);
  CsvWriter* w = nullptr;
  std::unique_ptr<CsvWriter> own;
  write_covariance_header(w, own, rec);
  for (int part = 0; part < 2; ++part) {
    const auto& C = part ? g.cov_im : g.cov_re;
    const auto& T = part ? g.target_im : g.target_re;
    const auto& SE = part ? g.se_im : g.se_re;
    for (Eigen::Index i = 0; i < C.rows(); ++i)
      for (Eigen::Index j = i; j < C.cols(); ++j) {
        double z = SE(i, j) > 0 ? (C(i, j) - T(i, j)) / SE(i, j) : 0.0;
        w->row({"delta", part ? "im" : "re", std::to_string(i), std::to_string(j), real(delta[static_cast<std::size_t>(i)]),
                real(delta[static_cast<std::size_t>(j)]), real(C(i, j)), real(SE(i, j)), real(T(i, j)), real(z), "nan",
                "nan"});
      }
  }
  json re = json::array(), im = json::array();
  for (std::size_t k = 0; k < delta.size(); ++k) {
    re.push_back(summary_json(g.re[k]));
    im.push_back(summary_json(g.im[k]));
  }
  report["counts"] = sweep_counts(r);
  report["gp_scan"] = {{"delta", delta}, {"re", re}, {"im", im}};
  check_complete(r);
}

}  // namespace

RunOutcome run_stats(Config& c) {
  std::string stat = c.str("stat", "");
  int n = static_cast<int>(c.integer("n", 0));
  Setup s = make_setup(c, n);
  SweepConfig cfg = sweep_base(c, s.family, n);
  cfg.plus_only = c.flag("plus-only", true);
  RunRecorder rec(c.str("out-dir", "."));
  json report = {{"command", "stats"}, {"stat", stat}, {"n", n}, {"curve", curve_json(s, n)}};
  // Outputs are written before a budget error propagates, so a partial run
  // still leaves a checkpoint behind.
  std::exception_ptr pending;
  try {
    if (stat == "clt") write_clt(c, s, cfg, rec, report);
    else if (stat == "cov") write_cov(c, s, cfg, rec, report);
    else if (stat == "fluct") write_fluct(c, s, cfg, rec, report);
    else if (stat == "lowlying") write_lowlying(c, s, cfg, rec, report);
    else if (stat == "density") write_density(c, s, cfg, rec, report);
    else if (stat == "nonvanishing") write_nonvanishing(c, s, cfg, rec, report);
    else if (stat == "gp-scan") write_gp(c, s, cfg, rec, report);
    else throw ValidationError("unknown stat '" + stat + "' (clt, cov, fluct, lowlying, density, nonvanishing, gp-scan)");
  } catch (const BudgetError&) {
    pending = std::current_exception();
  }
  report["kappa"] = family_kappa(s.ctx(), s.family, n);
  auto out = finish(rec, c, report, "stats", s.F->spec().header(), std::string(family_name(s.family)));
  if (pending) std::rethrow_exception(pending);
  return out;
}

RunOutcome run_rmt(Config& c) {
  RmtConfig cfg;
  cfg.ensemble = parse_ensemble(c.str("ensemble", "usp"));
  cfg.N = static_cast<int>(c.integer("N", 128));
  cfg.samples = c.u64("samples", 10000);
  cfg.seed = c.u64("seed", 1);
  cfg.threads = static_cast<int>(c.integer("threads", 0));
  cfg.shard_size = c.u64("shard-size", 64);
  cfg.theta = c.reals("theta", {0.1, 0.15, 0.2, 0.25, 0.3});
  double delta = c.real("delta", 0.3);
  if (!(delta >= 0 && delta < 1)) throw ValidationError("delta must lie in [0, 1)");
  int kappa = cfg.ensemble == MatrixEnsemble::kU ? cfg.N : 2 * cfg.N;
  if (cfg.N < 1) throw ValidationError("N must be positive");
  auto cases = standard_fluctuation_cases();
  auto alphas = fluctuation_alphas(cases);
  for (double a : alphas) cfg.count_theta.push_back(a / std::pow(kappa, delta));
  RunRecorder rec(c.str("out-dir", "."));
  RmtSweepResult r = rmt_sweep(cfg);

  std::vector<std::string> header = {"index", "trace1_re", "trace1_im", "trace2_re", "trace2_im", "residual"};
  for (auto& h : theta_cols("logz_re", cfg.theta.size())) header.push_back(h);
  for (auto& h : theta_cols("logz_im", cfg.theta.size())) header.push_back(h);
  for (auto& h : theta_cols("s", alphas.size())) header.push_back(h);
  CsvWriter samples(rec.path("samples.csv"), header);
  std::vector<double> t1r, t1i, t2r;
  std::vector<std::vector<double>> S;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const RmtRecord& x = r.records[i];
    std::vector<std::string> row = {std::to_string(i),         real(x.trace1.real()), real(x.trace1.imag()),
                                    real(x.trace2.real()),     real(x.trace2.imag()), real(x.residual)};
    for (auto v : x.log_z) row.push_back(real(v.real()));
    for (auto v : x.log_z) row.push_back(real(v.imag()));
    for (double v : x.s_theta) row.push_back(real(v));
    samples.row(row);
    t1r.push_back(x.trace1.real());
    t1i.push_back(x.trace1.imag());
    t2r.push_back(x.trace2.real());
    S.push_back(x.s_theta);
  }
  samples.close();
  rec.record("samples.csv");

  auto means = rmt_means(r, cfg);
  json mean_rows = json::array();
  for (const auto& m : means)
    mean_rows.push_back({{"theta", m.theta},
                         {"re", estimate_json(m.re)},
                         {"im", estimate_json(m.im)},
                         {"exact_re", m.exact_re},
                         {"exact_im", m.exact_im},
                         {"clamp_target", m.clamp_target},
                         {"diff", estimate_json(m.diff)},
                         {"diff_target", m.diff_target},
                         {"diff_z", m.diff_z}});

  CsvWriter* w = nullptr;
  std::unique_ptr<CsvWriter> own;
  write_covariance_header(w, own, rec);
  for (const auto& row : rmt_covariances(r, cfg)) {
    // Indices of t1, t2 on the theta grid.
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k < cfg.theta.size(); ++k) {
      if (cfg.theta[k] == row.t1) i = k;
      if (cfg.theta[k] == row.t2) j = k;
    }
    std::string kind = row.a2 > 0 ? "sum" : "difference";
    auto z = [](const Estimate& e, double t) { return e.se > 0 ? (e.value - t) / e.se : 0.0; };
    w->row({kind, "re", std::to_string(i), std::to_string(j), real(row.t1), real(row.t2), real(row.var_re.value),
            real(row.var_re.se), real(row.target), real(z(row.var_re, row.target)), "nan", "nan"});
    w->row({kind, "im", std::to_string(i), std::to_string(j), real(row.t1), real(row.t2), real(row.var_im.value),
            real(row.var_im.se), real(row.target_im), real(z(row.var_im, row.target_im)), "nan", "nan"});
  }
  own->close();

  auto rows = fluctuation_correlations(S, alphas, cases, delta, kappa);
  write_fluctuation_csv(rec, rows);

  json report = {{"command", "rmt"},
                 {"ensemble", ensemble_name(cfg.ensemble)},
                 {"N", cfg.N},
                 {"kappa", kappa},
                 {"samples", r.records.size()},
                 {"max_residual", r.max_residual},
                 {"resamples", r.resamples},
                 {"trace",
                  {{"tr_a_re", estimate_json(mean_estimate(t1r))},
                   {"tr_a_im", estimate_json(mean_estimate(t1i))},
                   {"tr_a2", estimate_json(mean_estimate(t2r))}}},
                 {"means", mean_rows},
                 {"fluctuation", {{"delta", delta}, {"alphas", alphas}, {"table", fluctuation_json(rows)}}}};
  return finish(rec, c, report, "rmt", "", std::string(ensemble_name(cfg.ensemble)));
}

int exit_code(std::exception_ptr e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const ValidationError& x) {
    message = x.what();
    return 2;
  } catch (const BudgetError& x) {
    message = x.what();
    return 3;
  } catch (const InvariantError& x) {
    message = x.what();
    return 4;
  } catch (const std::exception& x) {
    message = x.what();
    return 1;
  }
}

}  // namespace fflab::cli
