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

#include "kbtriage/label.hpp"

#include "kbtriage/text.hpp"

namespace kbtriage {

std::string_view to_string(Source source) noexcept {
  return source == Source::kBugzilla ? "bugzilla" : "syzkaller";
}

std::string_view to_string(Label label) noexcept {
  return label == Label::kGenuineBug ? "GENUINE_BUG" : "FALSE_POSITIVE";
}

std::optional<Source> parse_source(std::string_view text) {
  const auto norm = text::normalize_label(text);
  if (norm == "bugzilla") return Source::kBugzilla;
  if (norm == "syzkaller") return Source::kSyzkaller;
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view text) {
  const auto norm = text::normalize_label(text);
  if (norm == "genuine bug") return Label::kGenuineBug;
  if (norm == "false positive") return Label::kFalsePositive;
  return std::nullopt;
}

std::string ReportKey::str() const {
  std::string out(to_string(source));
  out.push_back(':');
  out += id;
  return out;
}

std::optional<ReportKey> ReportKey::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 >= text.size()) return std::nullopt;
  auto source = parse_source(text.substr(0, colon));
  if (!source) return std::nullopt;
  return ReportKey{*source, std::string(text.substr(colon + 1))};
}

std::string decision_category(const Decision& decision) {
  if (const auto* label = std::get_if<Label>(&decision)) return std::string(to_string(*label));
  return "EXCLUDED";
}

}  // namespace kbtriage
