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

#include "output.hpp"

#include <fmt/format.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "kbtriage/digest.hpp"
#include "kbtriage/error.hpp"

namespace kbtriage::cli {
namespace {

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string num(double value) { return fmt::format("{}", value); }

std::string num(std::optional<double> value) { return value ? num(*value) : std::string(); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    fail(Errc::kInvalidArgument,
         fmt::format("CSV row has {} fields, header has {}", row.size(), header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += quote(row[i]);
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (quoted) {
      if (c == '"' && i + 1 < data.size() && data[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(row));
      row.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  if (records.empty()) fail(Errc::kMalformedRecord, "empty CSV " + path.string());
  CsvTable table(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) table.add(std::move(records[i]));
  return table;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(Errc::kIo, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void update_manifest(const std::filesystem::path& results_dir, const ManifestEntry& entry) {
  const auto path = results_dir / "manifest.json";
  nlohmann::ordered_json manifest = {{"tool", "kbtriage"}, {"commands", nlohmann::ordered_json::object()}};
  if (std::filesystem::exists(path)) {
    try {
      manifest = nlohmann::ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::kMalformedRecord, fmt::format("{}: {}", path.string(), e.what()));
    }
  }
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& p : entry.inputs) {
    inputs.push_back({{"path", p.string()}, {"sha256", sha256_hex(read_file(p))}});
  }
  nlohmann::ordered_json e;
  e["inputs"] = std::move(inputs);
  e["seeds"] = entry.seeds;
  e["parameters"] = entry.parameters;
  e["config_digest"] = entry.config_digest;
  e["outputs"] = entry.outputs;
  manifest["commands"][entry.command] = std::move(e);
  write_file(path, manifest.dump(2) + "\n");
}

}  // namespace kbtriage::cli
