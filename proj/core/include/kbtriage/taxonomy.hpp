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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbtriage/corpus.hpp"

namespace kbtriage {

struct ComponentDistribution;
struct ProportionMatrix;

enum class RootCauseCategory {
  kExternalDependencyIssues,
  kMisunderstandingOfFeaturesOrLimitations,
  kIncorrectEnvironmentConfiguration,
  kIncorrectUsage,
};

inline constexpr std::array<RootCauseCategory, 4> kRootCauseCategories = {
    RootCauseCategory::kExternalDependencyIssues,
    RootCauseCategory::kMisunderstandingOfFeaturesOrLimitations,
    RootCauseCategory::kIncorrectEnvironmentConfiguration,
    RootCauseCategory::kIncorrectUsage,
};

enum class RootCauseSubcategory {
  kHardwareIssues,
  kUserspaceDependencyIssues,
  kFirmwareIssues,
  kImplicitBehaviorMisunderstanding,
  kLimitationUnawareness,
  kSemanticMisunderstanding,
  kSoftwareEnvironmentConfiguration,
  kHardwareEnvironmentConfiguration,
  kUnsupportedInvocation,
  kIncorrectOperation,
};

inline constexpr std::array<RootCauseSubcategory, 10> kRootCauseSubcategories = {
    RootCauseSubcategory::kHardwareIssues,
    RootCauseSubcategory::kUserspaceDependencyIssues,
    RootCauseSubcategory::kFirmwareIssues,
    RootCauseSubcategory::kImplicitBehaviorMisunderstanding,
    RootCauseSubcategory::kLimitationUnawareness,
    RootCauseSubcategory::kSemanticMisunderstanding,
    RootCauseSubcategory::kSoftwareEnvironmentConfiguration,
    RootCauseSubcategory::kHardwareEnvironmentConfiguration,
    RootCauseSubcategory::kUnsupportedInvocation,
    RootCauseSubcategory::kIncorrectOperation,
};

RootCauseCategory parent_category(RootCauseSubcategory sub) noexcept;

/// `ExternalDependencyIssues`-style identifiers used in files.
std::string_view category_id(RootCauseCategory category) noexcept;
std::string_view subcategory_id(RootCauseSubcategory sub) noexcept;
/// Human-readable names, e.g. "External Dependency Issues".
std::string_view category_display(RootCauseCategory category) noexcept;
std::string_view subcategory_display(RootCauseSubcategory sub) noexcept;

std::optional<RootCauseCategory> parse_category(std::string_view text);
std::optional<RootCauseSubcategory> parse_subcategory(std::string_view text);

/// Counts published with the taxonomy, kept verbatim even where the
/// per-source columns do not add up to the stated total.
struct ReferenceCount {
  int bugzilla = 0;
  int syzkaller = 0;
  int reported_total = 0;

  bool consistent() const { return bugzilla + syzkaller == reported_total; }
};

struct CatalogEntry {
  RootCauseCategory category;
  RootCauseSubcategory subcategory;
  std::string_view definition;
  std::string_view example;
  ReferenceCount reference;
};

/// The ten subcategories, grouped by category (3 + 3 + 2 + 2).
const std::vector<CatalogEntry>& catalog();

std::string_view category_definition(RootCauseCategory category) noexcept;
ReferenceCount category_reference_count(RootCauseCategory category) noexcept;

/// Human-readable notes for every reference count that is internally
/// inconsistent (row sums and category totals).
std::vector<std::string> reference_count_discrepancies();

// ---------------------------------------------------------------------------

struct GuidelineSheet {
  struct CategoryNote {
    RootCauseCategory category;
    std::string description;
  };
  struct ComponentNote {
    ComponentKind component;
    double fp_share = 0.0;  // fraction of false positives in this component
    std::optional<RootCauseCategory> dominant;
    double dominant_share = 0.0;
    std::string line;  // e.g. "Security: external dependency issues dominate (75%)"
  };

  std::vector<CategoryNote> categories;
  std::vector<ComponentNote> components;
  std::vector<std::string> citations;

  /// Plain-text prompt fragment; byte-stable for identical sheets.
  std::string render() const;
};

/// Formats a fraction as a percentage with at most two decimals and no
/// trailing zeros: 0.75 -> "75", 0.4775 -> "47.75".
std::string format_percent(double fraction);

/// Throws kIncompleteInput when either input lacks one of the seven named
/// components.
GuidelineSheet build_guidelines(const ComponentDistribution& distribution,
                                const ProportionMatrix& proportions);

}  // namespace kbtriage
