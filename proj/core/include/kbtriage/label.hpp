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

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace kbtriage {

enum class Source { kBugzilla, kSyzkaller };

/// Final binary class of a report. Positive class for metrics is kGenuineBug.
enum class Label { kGenuineBug, kFalsePositive };

std::string_view to_string(Source source) noexcept;
std::string_view to_string(Label label) noexcept;

/// Accepts `bugzilla` / `syzkaller` case-insensitively.
std::optional<Source> parse_source(std::string_view text);

/// Accepts `GENUINE_BUG` / `FALSE_POSITIVE` (case-insensitive, `_`, `-` or
/// space separated).
std::optional<Label> parse_label(std::string_view text);

/// Identity of a report within a corpus. Rendered as `source:id`.
struct ReportKey {
  Source source = Source::kBugzilla;
  std::string id;

  auto operator<=>(const ReportKey&) const = default;
  bool operator==(const ReportKey&) const = default;

  std::string str() const;
  static std::optional<ReportKey> parse(std::string_view text);
};

struct Excluded {
  std::string reason;

  bool operator==(const Excluded&) const = default;
};

/// Outcome of labeling: a class, or removal from the dataset with a reason.
using Decision = std::variant<Label, Excluded>;

std::string decision_category(const Decision& decision);

}  // namespace kbtriage
