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

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "kbtriage/corpus.hpp"
#include "kbtriage/embedded/component_map.inc"
#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

std::string_view component_kind_id(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::kFileSystem: return "FileSystem";
    case ComponentKind::kDrivers: return "Drivers";
    case ComponentKind::kNetworking: return "Networking";
    case ComponentKind::kKernelCore: return "KernelCore";
    case ComponentKind::kTools: return "Tools";
    case ComponentKind::kSecurity: return "Security";
    case ComponentKind::kIO: return "IO";
    case ComponentKind::kOther: return "Other";
  }
  return "Other";
}

std::string_view component_kind_display(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::kFileSystem: return "File System";
    case ComponentKind::kDrivers: return "Drivers";
    case ComponentKind::kNetworking: return "Networking";
    case ComponentKind::kKernelCore: return "Kernel Core";
    case ComponentKind::kTools: return "Tools";
    case ComponentKind::kSecurity: return "Security";
    case ComponentKind::kIO: return "IO";
    case ComponentKind::kOther: return "Other";
  }
  return "Other";
}

std::optional<ComponentKind> parse_component_kind(std::string_view raw) {
  const auto norm = text::normalize_label(raw);
  for (auto kind : {ComponentKind::kFileSystem, ComponentKind::kDrivers,
                    ComponentKind::kNetworking, ComponentKind::kKernelCore,
                    ComponentKind::kTools, ComponentKind::kSecurity, ComponentKind::kIO,
                    ComponentKind::kOther}) {
    if (norm == text::normalize_label(component_kind_id(kind)) ||
        norm == text::normalize_label(component_kind_display(kind))) {
      return kind;
    }
  }
  return std::nullopt;
}

Component Component::other(std::string name) {
  auto trimmed = std::string(text::trim(name));
  if (trimmed.empty()) trimmed = "unspecified";
  return {ComponentKind::kOther, std::move(trimmed)};
}

std::string Component::display_name() const {
  return kind == ComponentKind::kOther ? other_name : std::string(component_kind_display(kind));
}

ComponentMap ComponentMap::builtin() {
  static const ComponentMap map = parse(embedded::component_map);
  return map;
}

ComponentMap ComponentMap::parse(std::string_view contents) {
  ComponentMap map;
  std::size_t line_no = 0;
  for (auto line : text::split_lines(contents)) {
    ++line_no;
    auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      auto body = text::trim(trimmed.substr(1));
      constexpr std::string_view kVersion = "version:";
      if (body.starts_with(kVersion)) {
        auto digits = text::trim(body.substr(kVersion.size()));
        std::from_chars(digits.data(), digits.data() + digits.size(), map.version_);
      }
      continue;
    }
    const auto tab = trimmed.find('\t');
    if (tab == std::string_view::npos) {
      fail(Errc::kMalformedRecord, fmt::format("component map line {}: missing tab", line_no));
    }
    const auto key = text::normalize_label(trimmed.substr(0, tab));
    const auto kind = parse_component_kind(trimmed.substr(tab + 1));
    if (key.empty() || !kind || *kind == ComponentKind::kOther) {
      fail(Errc::kMalformedRecord, fmt::format("component map line {}: bad entry", line_no));
    }
    auto [it, inserted] = map.table_.emplace(key, *kind);
    if (!inserted && it->second != *kind) {
      fail(Errc::kMalformedRecord,
           fmt::format("component map line {}: '{}' mapped twice", line_no, key));
    }
  }
  return map;
}

ComponentMap ComponentMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::optional<ComponentKind> ComponentMap::lookup(std::string_view label) const {
  auto it = table_.find(text::normalize_label(label));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

Component ComponentMap::normalize(std::string_view component_raw, Source source) const {
  const auto raw = text::trim(component_raw);
  if (raw.empty()) return Component::other("unspecified");
  if (auto kind = lookup(raw)) return Component::named(*kind);

  if (source == Source::kBugzilla) {
    std::vector<std::size_t> slashes;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '/') slashes.push_back(i);
    }
    // Most specific first: component suffixes, shortest first, then product prefixes.
    for (auto it = slashes.rbegin(); it != slashes.rend(); ++it) {
      if (auto kind = lookup(raw.substr(*it + 1))) return Component::named(*kind);
    }
    for (auto it = slashes.rbegin(); it != slashes.rend(); ++it) {
      if (auto kind = lookup(raw.substr(0, *it))) return Component::named(*kind);
    }
    return Component::other(std::string(raw));
  }

  std::string token;
  auto flush = [&]() -> std::optional<ComponentKind> {
    std::optional<ComponentKind> kind;
    if (!token.empty()) kind = lookup(token);
    token.clear();
    return kind;
  };
  for (char c : raw) {
    if (c == ',' || c == ';' || c == ' ' || c == '\t') {
      if (auto kind = flush()) return Component::named(*kind);
    } else {
      token.push_back(c);
    }
  }
  if (auto kind = flush()) return Component::named(*kind);
  return Component::other(std::string(raw));
}

Component normalize_component(std::string_view component_raw, Source source) {
  return ComponentMap::builtin().normalize(component_raw, source);
}

}  // namespace kbtriage
