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

// Flat key=value run configuration. Keys match the long flag names; flags
// given on the command line override the file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fflab::cli {

class Config {
 public:
  Config() = default;
  // '#' starts a comment; blank lines are skipped. Throws ValidationError.
  static Config parse(std::string_view text, std::string_view origin = "config");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  // Typed getters. Each records the resolved value (default included) for
  // the manifest and marks the key as consumed.
  std::string str(const std::string& key, const std::string& fallback);
  std::optional<std::string> maybe_str(const std::string& key);
  std::int64_t integer(const std::string& key, std::int64_t fallback);
  std::uint64_t u64(const std::string& key, std::uint64_t fallback);
  double real(const std::string& key, double fallback);
  bool flag(const std::string& key, bool fallback);
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback);

  // Rejects keys that no getter asked for (typos, wrong subcommand).
  void check_all_used() const;

  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  // Resolved keys that affect results, and the rest (see is_runtime_key).
  std::map<std::string, std::string> inputs() const;
  std::map<std::string, std::string> runtime() const;
  // "key=value\n" over inputs(), sorted by key.
  std::string canonical() const;

 private:
  std::optional<std::string> take(const std::string& key);

  std::map<std::string, std::string> kv_;
  std::map<std::string, std::string> resolved_;
  std::set<std::string> used_;
};

// Keys that change where or how fast a run goes but not what it computes.
inline bool is_runtime_key(const std::string& key) { return key == "out-dir" || key == "threads"; }

std::string join_reals(const std::vector<double>& v, char sep = ',');

}  // namespace fflab::cli
