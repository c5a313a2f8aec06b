// Copyright 2026 The kbtriage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kbtriage/digest.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage::cli {
namespace {

constexpr std::array<std::string_view, 31> kKnownKeys{
    "tracker.bugzilla.endpoint", "tracker.syzkaller.endpoint", "window.start", "window.end",
    "model.endpoint",            "model.name",                 "model.temperature",
    "model.allow_nonzero_temperature", "model.api_key",        "model.timeout_seconds",
    "embed.endpoint",            "embed.model",                "embed.dim",
    "embed.api_key",             "embed.char_budget",          "embed.timeout_seconds",
    "templates.dir",             "exemplars.file",             "component_map.file",
    "paths.corpus",              "paths.labels",               "paths.vector_store",
    "paths.verdict_log",         "paths.results",              "concurrency.max_in_flight",
    "seed",                      "retrieval.k_per_class",      "baselines.logreg.l2",
    "baselines.logreg.epochs",   "baselines.knn.k",            "retry.max_attempts"};

constexpr std::array<std::string_view, 2> kSecretVariables{"MODEL_API_KEY", "EMBED_API_KEY"};

bool is_path_key(std::string_view key) {
  return key.starts_with("paths.") || key.ends_with(".dir") || key.ends_with(".file");
}

std::string interpolate(std::string_view value, const Config::EnvLookup& env, std::size_t line) {
  std::string out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    const auto open = value.find("${", pos);
    if (open == std::string_view::npos) {
      out.append(value.substr(pos));
      break;
    }
    const auto close = value.find('}', open);
    if (close == std::string_view::npos) {
      fail(Errc::kConfig, fmt::format("line {}: unterminated ${{", line));
    }
    out.append(value.substr(pos, open - pos));
    const auto name = value.substr(open + 2, close - open - 2);
    if (std::find(kSecretVariables.begin(), kSecretVariables.end(), name) == kSecretVariables.end()) {
      fail(Errc::kConfig, fmt::format("line {}: only MODEL_API_KEY and EMBED_API_KEY may be "
                                      "interpolated, got '{}'",
                                      line, name));
    }
    out.append(env(name).value_or(""));
    pos = close + 1;
  }
  return out;
}

}  // namespace

bool is_known_key(std::string_view key) {
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

bool is_secret_key(std::string_view key) { return key.ends_with(".api_key"); }

std::optional<std::string> process_env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

Config Config::parse(std::string_view text, const std::filesystem::path& base_dir,
                     const EnvLookup& env) {
  Config cfg;
  std::size_t line_no = 0;
  for (auto raw : text::split_lines(text)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(Errc::kConfig, fmt::format("line {}: expected key = value", line_no));
    }
    const std::string key(text::trim(line.substr(0, eq)));
    if (!is_known_key(key)) fail(Errc::kConfig, fmt::format("line {}: unknown key '{}'", line_no, key));
    std::string value = interpolate(text::trim(line.substr(eq + 1)), env, line_no);
    if (is_path_key(key) && !value.empty()) {
      std::filesystem::path p(value);
      if (p.is_relative()) p = base_dir / p;
      value = p.lexically_normal().string();
    }
    if (!cfg.values_.emplace(key, std::move(value)).second) {
      fail(Errc::kConfig, fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kConfig, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), std::filesystem::absolute(path).parent_path(), process_env);
}

std::optional<std::string> Config::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::string Config::get_or(std::string_view key, std::string_view fallback) const {
  return get(key).value_or(std::string(fallback));
}

long long Config::get_int(std::string_view key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    fail(Errc::kConfig, fmt::format("{}: expected an integer, got '{}'", key, *v));
  }
  return out;
}

double Config::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v->size()) fail(Errc::kConfig, fmt::format("{}: expected a number, got '{}'", key, *v));
  return out;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto lower = text::to_lower(*v);
  if (lower == "true" || lower == "1" || lower == "yes") return true;
  if (lower == "false" || lower == "0" || lower == "no") return false;
  fail(Errc::kConfig, fmt::format("{}: expected a boolean, got '{}'", key, *v));
}

std::optional<std::filesystem::path> Config::path(std::string_view key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return std::filesystem::path(*v);
}

std::string Config::digest() const {
  std::string canonical;
  for (const auto& [k, v] : values_) {
    canonical += k;
    canonical += '=';
    canonical += is_secret_key(k) ? std::string("<redacted>") : v;
    canonical += '\n';
  }
  return sha256_hex(canonical);
}

}  // namespace kbtriage::cli
