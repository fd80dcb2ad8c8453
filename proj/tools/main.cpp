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

// fflab: L-functions of quadratic characters and elliptic twists over
// F_q[t], their ensemble statistics, and the random-matrix comparison.

#include <iostream>
#include <map>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

using Overrides = std::map<std::string, std::string>;

void key_option(CLI::App* app, Overrides& o, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>("--" + key, [&o, key](const std::string& v) { o[key] = v; }, help);
}

void key_flag(CLI::App* app, Overrides& o, const std::string& key, const std::string& help) {
  app->add_flag_function("--" + key, [&o, key](std::int64_t) { o[key] = "true"; }, help);
}

void common(CLI::App* app, Overrides& o, std::string& config_path) {
  app->add_option("--config", config_path, "key=value config file; flags override it");
  key_option(app, o, "out-dir", "output directory (default .)");
  key_option(app, o, "seed", "RNG seed (default 1)");
  key_option(app, o, "threads", "worker threads (default: all cores)");
  key_option(app, o, "shard-size", "work items per RNG shard");
}

void family_options(CLI::App* app, Overrides& o) {
  key_option(app, o, "q", "field size, a prime power = 1 mod 4 (default 5)");
  key_option(app, o, "family", "quadratic | elliptic (default quadratic)");
  key_option(app, o, "curve-config", "curve file with A=, B= (default y^2 = x^3 + t x + 1)");
  key_option(app, o, "budget", "prime degree budget for twists (default 4)");
  key_option(app, o, "n", "degree of D");
  key_option(app, o, "sample", "number of sampled D; 0 or absent enumerates all");
  key_flag(app, o, "plus-only", "twists: keep the root number +1 family only");
  key_option(app, o, "time-budget", "seconds; a partial checkpoint is written when exceeded");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fflab: function-field L-function laboratory"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path;

  auto* lfun = app.add_subcommand("lfun", "L-polynomials and eigenphases for one D or a whole family");
  common(lfun, o, config_path);
  family_options(lfun, o);
  key_option(lfun, o, "D", "explicit D as digits c0,c1,...,1");

  auto* stats = app.add_subcommand("stats", "ensemble statistics");
  common(stats, o, config_path);
  family_options(stats, o);
  key_option(stats, o, "stat", "clt | cov | fluct | lowlying | density | nonvanishing | gp-scan");
  key_option(stats, o, "a", "clt: weights a_j (comma list)");
  key_option(stats, o, "t", "clt, cov: shifts t_j (comma list)");
  key_option(stats, o, "scale", "clt: n | g normalization (both are reported)");
  key_option(stats, o, "X", "cov: Dirichlet polynomial length");
  key_option(stats, o, "c", "cov: sigma_0 = 1/2 + c/X");
  key_flag(stats, o, "prime-part", "cov: also record the prime-only polynomial");
  key_option(stats, o, "delta", "fluct: delta; gp-scan: delta grid");
  key_option(stats, o, "zc-delta1", "fluct: zero-count CLT delta_1");
  key_option(stats, o, "zc-delta2", "fluct: zero-count CLT delta_2");
  key_option(stats, o, "y", "lowlying: y grid");
  key_option(stats, o, "bin", "density: bin width in x = kappa |theta|");
  key_option(stats, o, "x-max", "density: histogram range");
  key_option(stats, o, "alpha", "nonvanishing: alpha");

  auto* rmt = app.add_subcommand("rmt", "Haar random matrices");
  common(rmt, o, config_path);
  key_option(rmt, o, "ensemble", "usp | so-even | u (default usp)");
  key_option(rmt, o, "N", "matrix size parameter (default 128)");
  key_option(rmt, o, "samples", "number of matrices (default 10000)");
  key_option(rmt, o, "theta", "angles for log Z (comma list, radians)");
  key_option(rmt, o, "delta", "fluctuation scale delta (default 0.3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    fflab::cli::Config cfg = config_path.empty() ? fflab::cli::Config{} : fflab::cli::Config::load(config_path);
    for (const auto& [k, v] : o) cfg.set(k, v);
    fflab::cli::RunOutcome out;
    if (lfun->parsed()) out = fflab::cli::run_lfun(cfg);
    else if (stats->parsed()) out = fflab::cli::run_stats(cfg);
    else out = fflab::cli::run_rmt(cfg);
    fmt::print("wrote {}\n", out.dir.string());
    for (const auto& [name, digest] : out.digests.items()) fmt::print("  {}  {}\n", digest.get<std::string>(), name);
    return 0;
  } catch (...) {
    std::string msg;
    int code = fflab::cli::exit_code(std::current_exception(), msg);
    std::cerr << "fflab: " << msg << '\n';
    return code;
  }
}
