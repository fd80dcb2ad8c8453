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

#include "cli/output.hpp"

#include <cmath>
#include <ctime>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "fflab/errors.hpp"

namespace fflab::cli {

std::string real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x == 0 ? 0.0 : x);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), header_(std::move(header)) {
  if (!out_) throw ValidationError("cannot write " + path.string());
  row(header_);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != header_.size())
    throw InvariantError(fmt::format("CSV row has {} fields, header has {}", fields.size(), header_.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out_ << f;
      continue;
    }
    out_ << '"';
    for (char c : f) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  out_ << '\n';
}

namespace {

std::string digest(const void* data, std::size_t n, EVP_MD_CTX* ctx, bool final) {
  if (n) EVP_DigestUpdate(ctx, data, n);
  if (!final) return {};
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  std::string hex;
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

struct MdCtx {
  EVP_MD_CTX* p = EVP_MD_CTX_new();
  MdCtx() { EVP_DigestInit_ex(p, EVP_sha256(), nullptr); }
  ~MdCtx() { EVP_MD_CTX_free(p); }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  MdCtx c;
  return digest(bytes.data(), bytes.size(), c.p, true);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  MdCtx c;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    digest(buf.data(), static_cast<std::size_t>(in.gcount()), c.p, false);
  }
  return digest(nullptr, 0, c.p, true);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunRecorder::RunRecorder(std::filesystem::path out_dir) : dir_(std::move(out_dir)), start_(std::chrono::system_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void RunRecorder::record(const std::string& name) { files_.push_back(name); }

json RunRecorder::digests() const {
  json d = json::object();
  for (const auto& f : files_) d[f] = sha256_file(dir_ / f);
  return d;
}

void RunRecorder::finish(json manifest) {
  manifest["tool_version"] = kToolVersion;
  manifest["start"] = utc_timestamp(start_);
  manifest["end"] = utc_timestamp(std::chrono::system_clock::now());
  manifest["outputs"] = digests();
  write_json(dir_ / "manifest.json", manifest);
}

}  // namespace fflab::cli
