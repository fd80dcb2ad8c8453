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

#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fflab/errors.hpp"

namespace fflab::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw ValidationError(fmt::format("{}: '{}' is not a number", key, text));
  return v;
}

}  // namespace

Config Config::parse(std::string_view text, std::string_view origin) {
  Config c;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view s = line;
    if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
    s = trim(s);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ValidationError(fmt::format("{}:{}: expected key=value", origin, no));
    std::string key(trim(s.substr(0, eq)));
    if (key.empty()) throw ValidationError(fmt::format("{}:{}: empty key", origin, no));
    if (c.kv_.count(key)) throw ValidationError(fmt::format("{}:{}: duplicate key '{}'", origin, no, key));
    c.kv_[key] = std::string(trim(s.substr(eq + 1)));
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void Config::set(const std::string& key, std::string value) { kv_[key] = std::move(value); }

std::optional<std::string> Config::take(const std::string& key) {
  used_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return std::nullopt;
  return it->second;
}

std::string Config::str(const std::string& key, const std::string& fallback) {
  std::string v = take(key).value_or(fallback);
  resolved_[key] = v;
  return v;
}

std::optional<std::string> Config::maybe_str(const std::string& key) {
  auto v = take(key);
  if (v) resolved_[key] = *v;
  return v;
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) {
  auto v = take(key);
  std::int64_t out = fallback;
  if (v) {
    std::string_view t = trim(*v);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size())
      throw ValidationError(fmt::format("{}: '{}' is not an integer", key, *v));
  }
  resolved_[key] = std::to_string(out);
  return out;
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t fallback) {
  auto v = take(key);
  std::uint64_t out = fallback;
  if (v) {
    std::string_view t = trim(*v);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size())
      throw ValidationError(fmt::format("{}: '{}' is not a non-negative integer", key, *v));
  }
  resolved_[key] = std::to_string(out);
  return out;
}

double Config::real(const std::string& key, double fallback) {
  auto v = take(key);
  double out = v ? parse_double(key, *v) : fallback;
  resolved_[key] = fmt::format("{:.17g}", out);
  return out;
}

bool Config::flag(const std::string& key, bool fallback) {
  auto v = take(key);
  bool out = fallback;
  if (v) {
    std::string t(trim(*v));
    if (t == "1" || t == "true" || t == "yes" || t == "on") out = true;
    else if (t == "0" || t == "false" || t == "no" || t == "off") out = false;
    else throw ValidationError(fmt::format("{}: '{}' is not a boolean", key, *v));
  }
  resolved_[key] = out ? "true" : "false";
  return out;
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) {
  auto v = take(key);
  std::vector<double> out = fallback;
  if (v) {
    out.clear();
    std::string_view rest = *v;
    while (true) {
      auto c = rest.find(',');
      std::string_view item = trim(rest.substr(0, c));
      if (!item.empty()) out.push_back(parse_double(key, item));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
  }
  resolved_[key] = join_reals(out);
  return out;
}

void Config::check_all_used() const {
  for (const auto& [k, v] : kv_) {
    if (!used_.count(k)) throw ValidationError("unknown or unused config key '" + k + "'");
  }
}

std::map<std::string, std::string> Config::inputs() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : resolved_)
    if (!is_runtime_key(k)) out[k] = v;
  return out;
}

std::map<std::string, std::string> Config::runtime() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : resolved_)
    if (is_runtime_key(k)) out[k] = v;
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : inputs()) out += k + "=" + v + "\n";
  return out;
}

std::string join_reals(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fmt::format("{:.17g}", v[i] == 0 ? 0.0 : v[i]);
  }
  return out;
}

}  // namespace fflab::cli
