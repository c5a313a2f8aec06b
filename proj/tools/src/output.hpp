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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kbtriage::cli {

/// Shortest round-trip decimal rendering; identical across runs.
std::string num(double value);
std::string num(std::optional<double> value);  // empty when absent

/// RFC 4180 CSV: fields quoted when they contain a comma, quote or newline.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::string str() const;
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::vector<std::string>& header() const { return header_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Minimal reader for files produced by CsvTable.
CsvTable read_csv(const std::filesystem::path& path);

/// Writes through a sibling temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

/// Records one command's inputs (with sha256), seeds, config digest and
/// outputs in `<results>/manifest.json`, keyed by command name. Entries of
/// other commands are kept. Contains no timestamps.
struct ManifestEntry {
  std::string command;
  std::vector<std::filesystem::path> inputs;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> parameters;
  std::string config_digest;
  std::vector<std::string> outputs;  // relative to the results directory
};

void update_manifest(const std::filesystem::path& results_dir, const ManifestEntry& entry);

}  // namespace kbtriage::cli
