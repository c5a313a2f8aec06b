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

#include <chrono>
#include <string>
#include <string_view>

namespace kbtriage {

/// UTC instant at one-second resolution. Sub-second digits in tracker
/// payloads are truncated on parse.
using Timestamp = std::chrono::sys_seconds;

/// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SS` with optional fractional
/// seconds and a `Z` or `+HH:MM` / `-HH:MM` suffix; a space may replace `T`.
/// Throws Error(kMalformedTimestamp).
Timestamp parse_timestamp(std::string_view text);

/// Canonical form: `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp ts);

/// Midnight UTC of a `YYYY-MM-DD` date.
Timestamp parse_date(std::string_view text);
std::string format_date(Timestamp ts);

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0,
                         int minute = 0, int second = 0);

inline double hours_between(Timestamp from, Timestamp to) {
  return std::chrono::duration<double, std::ratio<3600>>(to - from).count();
}

}  // namespace kbtriage
