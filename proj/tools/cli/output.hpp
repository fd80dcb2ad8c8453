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

// CSV and JSON emission, SHA-256 digests and the run manifest.

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fflab::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// 17 significant digits, -0 written as 0; "nan", "inf", "-inf" for the special values.
std::string real(double x);

// RFC 4180 writer: fields holding commas, quotes or newlines are quoted.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  void close() { out_.close(); }
  std::size_t columns() const { return header_.size(); }

 private:
  std::ofstream out_;
  std::vector<std::string> header_;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const json& j);

// Tracks outputs of one run and writes manifest.json. Timestamps live only
// in the manifest, so the other outputs are byte-identical across reruns.
class RunRecorder {
 public:
  explicit RunRecorder(std::filesystem::path out_dir);
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  void record(const std::string& name);
  // Digest of every recorded output, by file name.
  json digests() const;
  // Writes manifest.json from the given fields plus timestamps and digests.
  void finish(json manifest);

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
  std::chrono::system_clock::time_point start_;
};

std::string utc_timestamp(std::chrono::system_clock::time_point t);

}  // namespace fflab::cli
