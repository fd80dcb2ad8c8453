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

// The lfun, stats and rmt pipelines behind the fflab executable.

#pragma once

#include <exception>
#include <filesystem>
#include <string>

#include "cli/config.hpp"
#include "cli/output.hpp"

namespace fflab::cli {

struct RunOutcome {
  std::filesystem::path dir;
  json report;
  json digests;  // output file name -> SHA-256
};

// Each run consumes its keys from cfg, writes its outputs and
// manifest.json into out-dir, and throws the fflab error types.
RunOutcome run_lfun(Config& cfg);
RunOutcome run_stats(Config& cfg);
RunOutcome run_rmt(Config& cfg);

// 2 validation, 3 budget, 4 invariant, 1 anything else.
int exit_code(std::exception_ptr e, std::string& message);

}  // namespace fflab::cli
