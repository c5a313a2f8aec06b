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
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace kbtriage::text {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

/// Lowercased maximal runs of ASCII letters and digits. Every other byte
/// (including all non-ASCII bytes) is a separator.
std::vector<std::string> tokenize(std::string_view s);

/// Case-folds, trims, maps `_` and `-` to spaces and collapses whitespace, so
/// `RESOLVED  CODE_FIX` and `resolved code-fix` compare equal.
std::string normalize_label(std::string_view s);

/// Cuts `s` to at most `max_bytes` without splitting a UTF-8 sequence.
std::string_view truncate_utf8(std::string_view s, std::size_t max_bytes) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s) noexcept;

/// Single-pass `{name}` substitution. Names absent from `values` are left
/// verbatim; substituted text is never rescanned.
std::string substitute(std::string_view tmpl,
                       const std::map<std::string, std::string, std::less<>>& values);

std::vector<std::string_view> split_lines(std::string_view s);

bool icontains(std::string_view haystack, std::string_view needle);

}  // namespace kbtriage::text
