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

#include <map>
#include <string>
#include <string_view>

namespace kbtriage::http {

struct Response {
  int status = 0;
  std::string body;
};

using Headers = std::multimap<std::string, std::string>;

/// Blocking requests against `http://` or `https://` URLs. Transport
/// failures (connect, TLS, timeout) throw Error(kClientFailure); non-2xx
/// statuses are returned to the caller.
Response get(std::string_view url, const Headers& headers = {}, int timeout_seconds = 60);
Response post_json(std::string_view url, std::string_view body, const Headers& headers = {},
                   int timeout_seconds = 60);

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;    // begins with '/', includes the query string
};

/// Throws Error(kConfig) for unsupported or malformed URLs.
Url parse_url(std::string_view url);

}  // namespace kbtriage::http
