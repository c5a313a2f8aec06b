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

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace kbtriage::cli {

/// Flat `key = value` configuration. `#` starts a comment line. Values may
/// reference `${MODEL_API_KEY}` or `${EMBED_API_KEY}`; no other variable is
/// interpolated. Path-valued keys are resolved against the file's directory.
/// Unknown keys and malformed lines throw Error(kConfig).
class Config {
 public:
  using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

  Config() = default;
  static Config parse(std::string_view text, const std::filesystem::path& base_dir,
                      const EnvLookup& env);
  static Config load(const std::filesystem::path& path);

  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::optional<std::filesystem::path> path(std::string_view key) const;

  /// sha256 over the sorted `key=value` lines with secret values redacted.
  std::string digest() const;
  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// Reads the process environment.
std::optional<std::string> process_env(std::string_view name);

bool is_known_key(std::string_view key);
bool is_secret_key(std::string_view key);

}  // namespace kbtriage::cli
