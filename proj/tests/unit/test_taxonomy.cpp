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

#include <gtest/gtest.h>

#include <map>

#include "kbtriage/error.hpp"
#include "kbtriage/stats.hpp"
#include "kbtriage/taxonomy.hpp"

namespace kbtriage {
namespace {

using RC = RootCauseCategory;
using RS = RootCauseSubcategory;

TEST(Catalog, TenSubcategoriesGroupedUnderFourCategories) {
  const auto& entries = catalog();
  ASSERT_EQ(entries.size(), 10u);
  std::map<RC, int> per_category;
  for (const auto& e : entries) {
    EXPECT_EQ(parent_category(e.subcategory), e.category);
    EXPECT_FALSE(e.definition.empty());
    EXPECT_FALSE(e.example.empty());
    ++per_category[e.category];
  }
  EXPECT_EQ(per_category[RC::kExternalDependencyIssues], 3);
  EXPECT_EQ(per_category[RC::kMisunderstandingOfFeaturesOrLimitations], 3);
  EXPECT_EQ(per_category[RC::kIncorrectEnvironmentConfiguration], 2);
  EXPECT_EQ(per_category[RC::kIncorrectUsage], 2);
}

TEST(Catalog, ParentMapping) {
  EXPECT_EQ(parent_category(RS::kFirmwareIssues), RC::kExternalDependencyIssues);
  EXPECT_EQ(parent_category(RS::kSemanticMisunderstanding), RC::kMisunderstandingOfFeaturesOrLimitations);
  EXPECT_EQ(parent_category(RS::kHardwareEnvironmentConfiguration), RC::kIncorrectEnvironmentConfiguration);
  EXPECT_EQ(parent_category(RS::kUnsupportedInvocation), RC::kIncorrectUsage);
}

TEST(Catalog, IdentifiersRoundTrip) {
  for (auto c : kRootCauseCategories) {
    EXPECT_EQ(parse_category(category_id(c)), c);
    EXPECT_EQ(parse_category(category_display(c)), c);
  }
  for (auto s : kRootCauseSubcategories) {
    EXPECT_EQ(parse_subcategory(subcategory_id(s)), s);
    EXPECT_EQ(parse_subcategory(subcategory_display(s)), s);
  }
  EXPECT_FALSE(parse_category("Cosmic Rays").has_value());
}

TEST(Catalog, ReferenceCountsKeptVerbatim) {
  // Published counts: one subcategory row and one category's subtotal do not add up.
  const auto notes = reference_count_discrepancies();
  std::size_t inconsistent = 0;
  for (const auto& e : catalog()) inconsistent += e.reference.consistent() ? 0 : 1;
  EXPECT_EQ(inconsistent, 1u);
  EXPECT_EQ(notes.size(), 2u);
  EXPECT_EQ(category_reference_count(RC::kExternalDependencyIssues).reported_total, 229);
  int total = 0;
  for (auto c : kRootCauseCategories) total += category_reference_count(c).reported_total;
  EXPECT_EQ(total, 497);
}

TEST(Percent, Formatting) {
  EXPECT_EQ(format_percent(0.75), "75");
  EXPECT_EQ(format_percent(0.4775), "47.75");
  EXPECT_EQ(format_percent(0.5), "50");
  EXPECT_EQ(format_percent(1.0 / 3.0), "33.33");
  EXPECT_EQ(format_percent(0.0), "0");
}

// Every named component gets `per_component` false positives; Security is
// skewed toward external dependencies unless `uniform_security` is set.
std::vector<Observation> observations(bool uniform_security) {
  std::vector<Observation> out;
  int id = 0;
  for (ComponentKind kind : kNamedComponents) {
    std::vector<RC> causes{RC::kExternalDependencyIssues, RC::kMisunderstandingOfFeaturesOrLimitations,
                           RC::kIncorrectEnvironmentConfiguration, RC::kIncorrectUsage};
    if (kind == ComponentKind::kSecurity && !uniform_security) {
      causes = {RC::kExternalDependencyIssues, RC::kExternalDependencyIssues,
                RC::kExternalDependencyIssues, RC::kIncorrectUsage};
    } else if (kind != ComponentKind::kSecurity) {
      causes = {RC::kIncorrectUsage, RC::kIncorrectUsage, RC::kIncorrectUsage,
                RC::kExternalDependencyIssues};
    }
    for (auto c : causes) {
      out.push_back({{Source::kBugzilla, std::to_string(++id)}, Label::kFalsePositive,
                     Component::named(kind), c});
    }
  }
  return out;
}

TEST(Guidelines, DominantCauseLine) {
  const auto o = observations(false);
  const auto sheet = build_guidelines(component_distribution(o), stagewise_proportions(o));
  ASSERT_EQ(sheet.components.size(), 7u);
  ASSERT_EQ(sheet.categories.size(), 4u);
  const auto& security = *std::find_if(sheet.components.begin(), sheet.components.end(),
                                       [](const auto& n) { return n.component == ComponentKind::kSecurity; });
  EXPECT_EQ(security.line, "Security: external dependency issues dominate (75%)");
  EXPECT_EQ(security.dominant, RC::kExternalDependencyIssues);
  EXPECT_DOUBLE_EQ(security.fp_share, 4.0 / 28.0);
  const auto text = sheet.render();
  EXPECT_NE(text.find("- Security: external dependency issues dominate (75%)\n"), std::string::npos);
  EXPECT_EQ(text, build_guidelines(component_distribution(o), stagewise_proportions(o)).render());
}

TEST(Guidelines, UniformRowHasNoDominantCause) {
  const auto o = observations(true);
  const auto sheet = build_guidelines(component_distribution(o), stagewise_proportions(o));
  const auto& security = *std::find_if(sheet.components.begin(), sheet.components.end(),
                                       [](const auto& n) { return n.component == ComponentKind::kSecurity; });
  EXPECT_EQ(security.line, "Security: no dominant cause");
  EXPECT_FALSE(security.dominant.has_value());
}

TEST(Guidelines, MissingComponentIsIncompleteInput) {
  auto o = observations(false);
  std::erase_if(o, [](const Observation& x) { return x.component == Component::named(ComponentKind::kIO); });
  try {
    build_guidelines(component_distribution(o), stagewise_proportions(o));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIncompleteInput);
  }
}

}  // namespace
}  // namespace kbtriage
