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

#include "kbtriage/taxonomy.hpp"

#include <fmt/format.h>

#include <cmath>

#include "kbtriage/error.hpp"
#include "kbtriage/stats.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

RootCauseCategory parent_category(RootCauseSubcategory sub) noexcept {
  switch (sub) {
    case RootCauseSubcategory::kHardwareIssues:
    case RootCauseSubcategory::kUserspaceDependencyIssues:
    case RootCauseSubcategory::kFirmwareIssues:
      return RootCauseCategory::kExternalDependencyIssues;
    case RootCauseSubcategory::kImplicitBehaviorMisunderstanding:
    case RootCauseSubcategory::kLimitationUnawareness:
    case RootCauseSubcategory::kSemanticMisunderstanding:
      return RootCauseCategory::kMisunderstandingOfFeaturesOrLimitations;
    case RootCauseSubcategory::kSoftwareEnvironmentConfiguration:
    case RootCauseSubcategory::kHardwareEnvironmentConfiguration:
      return RootCauseCategory::kIncorrectEnvironmentConfiguration;
    case RootCauseSubcategory::kUnsupportedInvocation:
    case RootCauseSubcategory::kIncorrectOperation:
      return RootCauseCategory::kIncorrectUsage;
  }
  return RootCauseCategory::kIncorrectUsage;
}

std::string_view category_id(RootCauseCategory c) noexcept {
  switch (c) {
    case RootCauseCategory::kExternalDependencyIssues: return "ExternalDependencyIssues";
    case RootCauseCategory::kMisunderstandingOfFeaturesOrLimitations:
      return "MisunderstandingOfFeaturesOrLimitations";
    case RootCauseCategory::kIncorrectEnvironmentConfiguration:
      return "IncorrectEnvironmentConfiguration";
    case RootCauseCategory::kIncorrectUsage: return "IncorrectUsage";
  }
  return "";
}

std::string_view category_display(RootCauseCategory c) noexcept {
  switch (c) {
    case RootCauseCategory::kExternalDependencyIssues: return "External Dependency Issues";
    case RootCauseCategory::kMisunderstandingOfFeaturesOrLimitations:
      return "Misunderstanding of Features or Limitations";
    case RootCauseCategory::kIncorrectEnvironmentConfiguration:
      return "Incorrect Environment Configuration";
    case RootCauseCategory::kIncorrectUsage: return "Incorrect Usage";
  }
  return "";
}

std::string_view subcategory_id(RootCauseSubcategory s) noexcept {
  switch (s) {
    case RootCauseSubcategory::kHardwareIssues: return "HardwareIssues";
    case RootCauseSubcategory::kUserspaceDependencyIssues: return "UserspaceDependencyIssues";
    case RootCauseSubcategory::kFirmwareIssues: return "FirmwareIssues";
    case RootCauseSubcategory::kImplicitBehaviorMisunderstanding:
      return "ImplicitBehaviorMisunderstanding";
    case RootCauseSubcategory::kLimitationUnawareness: return "LimitationUnawareness";
    case RootCauseSubcategory::kSemanticMisunderstanding: return "SemanticMisunderstanding";
    case RootCauseSubcategory::kSoftwareEnvironmentConfiguration:
      return "SoftwareEnvironmentConfiguration";
    case RootCauseSubcategory::kHardwareEnvironmentConfiguration:
      return "HardwareEnvironmentConfiguration";
    case RootCauseSubcategory::kUnsupportedInvocation: return "UnsupportedInvocation";
    case RootCauseSubcategory::kIncorrectOperation: return "IncorrectOperation";
  }
  return "";
}

std::string_view subcategory_display(RootCauseSubcategory s) noexcept {
  switch (s) {
    case RootCauseSubcategory::kHardwareIssues: return "Hardware Issues";
    case RootCauseSubcategory::kUserspaceDependencyIssues: return "Userspace Dependency Issues";
    case RootCauseSubcategory::kFirmwareIssues: return "Outdated Firmware or Firmware Issues";
    case RootCauseSubcategory::kImplicitBehaviorMisunderstanding:
      return "Implicit Behavior Misunderstanding";
    case RootCauseSubcategory::kLimitationUnawareness: return "Limitation Unawareness";
    case RootCauseSubcategory::kSemanticMisunderstanding: return "Semantic Misunderstanding";
    case RootCauseSubcategory::kSoftwareEnvironmentConfiguration:
      return "Software Environment Configuration";
    case RootCauseSubcategory::kHardwareEnvironmentConfiguration:
      return "Hardware Environment Configuration";
    case RootCauseSubcategory::kUnsupportedInvocation: return "Unsupported Invocation";
    case RootCauseSubcategory::kIncorrectOperation: return "Incorrect Operation";
  }
  return "";
}

std::optional<RootCauseCategory> parse_category(std::string_view raw) {
  const auto norm = text::normalize_label(raw);
  for (auto c : kRootCauseCategories) {
    if (norm == text::normalize_label(category_id(c)) ||
        norm == text::normalize_label(category_display(c))) {
      return c;
    }
  }
  return std::nullopt;
}

std::optional<RootCauseSubcategory> parse_subcategory(std::string_view raw) {
  const auto norm = text::normalize_label(raw);
  for (auto s : kRootCauseSubcategories) {
    if (norm == text::normalize_label(subcategory_id(s)) ||
        norm == text::normalize_label(subcategory_display(s))) {
      return s;
    }
  }
  if (norm == "unsupported usage") return RootCauseSubcategory::kUnsupportedInvocation;
  if (norm == "implicit behaviour misunderstanding") {
    return RootCauseSubcategory::kImplicitBehaviorMisunderstanding;
  }
  return std::nullopt;
}

const std::vector<CatalogEntry>& catalog() {
  using C = RootCauseCategory;
  using S = RootCauseSubcategory;
  static const std::vector<CatalogEntry> entries = {
      {C::kExternalDependencyIssues, S::kHardwareIssues,
       "A defective or quirky device misbehaves and the symptom surfaces in kernel logs or "
       "crashes, although the kernel handles the device correctly.",
       "Errors disappear once a faulty USB dongle is swapped for another vendor's.",
       {45, 21, 66}},
      {C::kExternalDependencyIssues, S::kUserspaceDependencyIssues,
       "A userspace program or library (C library, GUI toolkit, daemon) is at fault, but the "
       "failure is attributed to the kernel.",
       "A tracing GUI renders empty graphs until its toolkit library is rebuilt.",
       {85, 36, 121}},
      {C::kExternalDependencyIssues, S::kFirmwareIssues,
       "Outdated or buggy device firmware triggers warnings or failures that look like kernel "
       "regressions.",
       "A wireless card logs firmware crashes that stop after a vendor firmware update.",
       {41, 1, 42}},
      {C::kMisunderstandingOfFeaturesOrLimitations, S::kImplicitBehaviorMisunderstanding,
       "Intended but non-obvious runtime behavior (lazy initialization, caching, scheduling or "
       "timing effects) is taken for a defect.",
       "Memory that is not returned immediately after a file is closed is reported as a leak.",
       {53, 82, 135}},
      {C::kMisunderstandingOfFeaturesOrLimitations, S::kLimitationUnawareness,
       "The reporter is unaware of a deliberate restriction such as a resource cap or a "
       "context in which an operation is refused.",
       "A system call fails under a restricted namespace exactly as documented.",
       {22, 25, 47}},
      {C::kMisunderstandingOfFeaturesOrLimitations, S::kSemanticMisunderstanding,
       "Error codes, log messages or API contracts are read with the wrong meaning.",
       "An informational stack dump in the log is reported as a kernel crash.",
       {6, 7, 13}},
      {C::kIncorrectEnvironmentConfiguration, S::kSoftwareEnvironmentConfiguration,
       "Build options, boot parameters or runtime settings are inconsistent or wrong for the "
       "intended setup.",
       "A feature is missing because the kernel was built without the required option.",
       {31, 9, 40}},
      {C::kIncorrectEnvironmentConfiguration, S::kHardwareEnvironmentConfiguration,
       "The hardware setup does not match what the kernel build or drivers expect.",
       "A kernel built for one CPU family is booted on an incompatible machine.",
       {10, 2, 12}},
      {C::kIncorrectUsage, S::kUnsupportedInvocation,
       "The kernel is driven through interfaces or options that are legacy, removed or never "
       "supported.",
       "A removed module parameter is still passed on the command line.",
       {6, 8, 13}},
      {C::kIncorrectUsage, S::kIncorrectOperation,
       "A supported interface is used in the wrong way, for example without the required "
       "privileges or arguments.",
       "A privileged command run as an unprivileged user fails with a permission error.",
       {4, 3, 7}},
  };
  return entries;
}

std::string_view category_definition(RootCauseCategory c) noexcept {
  switch (c) {
    case RootCauseCategory::kExternalDependencyIssues:
      return "The fault lies in hardware, firmware or userspace software the kernel depends "
             "on, not in the kernel itself.";
    case RootCauseCategory::kMisunderstandingOfFeaturesOrLimitations:
      return "Correct kernel behavior is reported as a bug because its semantics, limits or "
             "implicit effects were misread.";
    case RootCauseCategory::kIncorrectEnvironmentConfiguration:
      return "A misconfigured software or hardware environment causes the failure.";
    case RootCauseCategory::kIncorrectUsage:
      return "The kernel is used outside its supported or intended usage.";
  }
  return "";
}

ReferenceCount category_reference_count(RootCauseCategory c) noexcept {
  switch (c) {
    case RootCauseCategory::kExternalDependencyIssues: return {171, 58, 229};
    case RootCauseCategory::kMisunderstandingOfFeaturesOrLimitations: return {81, 114, 195};
    case RootCauseCategory::kIncorrectEnvironmentConfiguration: return {41, 11, 52};
    case RootCauseCategory::kIncorrectUsage: return {10, 11, 21};
  }
  return {};
}

std::vector<std::string> reference_count_discrepancies() {
  std::vector<std::string> notes;
  for (const auto& entry : catalog()) {
    if (!entry.reference.consistent()) {
      notes.push_back(fmt::format("{}: {} + {} != reported total {}",
                                  subcategory_display(entry.subcategory), entry.reference.bugzilla,
                                  entry.reference.syzkaller, entry.reference.reported_total));
    }
  }
  for (auto category : kRootCauseCategories) {
    const auto ref = category_reference_count(category);
    if (!ref.consistent()) {
      notes.push_back(fmt::format("{}: {} + {} != reported total {}", category_display(category),
                                  ref.bugzilla, ref.syzkaller, ref.reported_total));
    }
    int sub_total = 0;
    for (const auto& entry : catalog()) {
      if (entry.category == category) sub_total += entry.reference.reported_total;
    }
    if (sub_total != ref.reported_total) {
      notes.push_back(fmt::format("{}: subcategory totals sum to {}, reported total {}",
                                  category_display(category), sub_total, ref.reported_total));
    }
  }
  return notes;
}

// ---------------------------------------------------------------------------

std::string format_percent(double fraction) {
  std::string s = fmt::format("{:.2f}", fraction * 100.0);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

GuidelineSheet build_guidelines(const ComponentDistribution& distribution,
                                const ProportionMatrix& proportions) {
  GuidelineSheet sheet;
  for (auto category : kRootCauseCategories) {
    sheet.categories.push_back({category, std::string(category_definition(category))});
  }

  std::size_t covered_reports = 0;
  for (ComponentKind kind : kNamedComponents) {
    const auto* dist_row = distribution.find(kind);
    if (dist_row == nullptr) {
      fail(Errc::kIncompleteInput,
           fmt::format("distribution has no {} row", component_kind_display(kind)));
    }
    const auto index = proportions.row_index(kind);
    if (!index) {
      fail(Errc::kIncompleteInput,
           fmt::format("proportions have no {} row", component_kind_display(kind)));
    }
    const auto& cells = proportions.cells[*index];
    for (auto c : proportions.counts[*index]) covered_reports += c;

    GuidelineSheet::ComponentNote note;
    note.component = kind;
    note.fp_share = dist_row->share_total;
    const bool uniform = std::all_of(cells.begin(), cells.end(), [&](double v) {
      return std::fabs(v - cells[0]) <= 1e-12;
    });
    const auto name = component_kind_display(kind);
    if (uniform) {
      note.line = fmt::format("{}: no dominant cause", name);
    } else {
      std::size_t best = 0;
      for (std::size_t j = 1; j < cells.size(); ++j) {
        if (cells[j] > cells[best]) best = j;
      }
      note.dominant = kRootCauseCategories[best];
      note.dominant_share = cells[best];
      note.line = fmt::format("{}: {} dominate ({}%)", name,
                              text::to_lower(category_display(*note.dominant)),
                              format_percent(cells[best]));
    }
    sheet.components.push_back(std::move(note));
  }

  sheet.citations.push_back(fmt::format(
      "component distribution over {} labeled false-positive reports ({} Bugzilla, {} Syzkaller)",
      distribution.total, distribution.total_bugzilla, distribution.total_syzkaller));
  sheet.citations.push_back(fmt::format(
      "stage-wise root-cause proportions over {} false-positive reports in the seven major "
      "components",
      covered_reports));
  return sheet;
}

std::string GuidelineSheet::render() const {
  std::string out;
  out += "Root-cause categories of false-positive kernel bug reports:\n";
  for (const auto& note : categories) {
    out += fmt::format("- {}: {}\n", category_display(note.category), note.description);
  }
  out += "\nShare of false-positive reports by component:\n";
  for (const auto& note : components) {
    out += fmt::format("- {}: {}%\n", component_kind_display(note.component),
                       format_percent(note.fp_share));
  }
  out += "\nDominant root cause by component:\n";
  for (const auto& note : components) out += fmt::format("- {}\n", note.line);
  out += "\nSources:\n";
  for (const auto& c : citations) out += fmt::format("- {}\n", c);
  return out;
}

}  // namespace kbtriage
