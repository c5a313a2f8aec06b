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

#include "kbtriage/http.hpp"

#include <httplib.h>

#include <fmt/format.h>

#include <charconv>

#include "kbtriage/error.hpp"

namespace kbtriage::http {
namespace {

httplib::Headers to_httplib(const Headers& headers) {
  httplib::Headers out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

template <typename Fn>
Response perform(std::string_view url, int timeout_seconds, Fn&& request) {
  const Url parsed = parse_url(url);
  const std::string base = fmt::format("{}://{}:{}", parsed.scheme, parsed.host, parsed.port);
  httplib::Client client(base);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);
  client.set_follow_location(true);
  httplib::Result result = request(client, parsed.path);
  if (!result) {
    fail(Errc::kClientFailure,
         fmt::format("{}: {}", url, httplib::to_string(result.error())));
  }
  return {result->status, result->body};
}

}  // namespace

Url parse_url(std::string_view url) {
  Url out;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) fail(Errc::kConfig, fmt::format("bad URL '{}'", url));
  out.scheme = std::string(url.substr(0, scheme_end));
  if (out.scheme != "http" && out.scheme != "https") {
    fail(Errc::kConfig, fmt::format("unsupported scheme in '{}'", url));
  }
  const std::string rest(url.substr(scheme_end + 3));
  const auto slash = rest.find('/');
  std::string_view authority = std::string_view(rest).substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  out.port = out.scheme == "https" ? 443 : 80;
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    auto port_text = authority.substr(colon + 1);
    int port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port <= 0 ||
        port > 65535) {
      fail(Errc::kConfig, fmt::format("bad port in '{}'", url));
    }
    out.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) fail(Errc::kConfig, fmt::format("missing host in '{}'", url));
  out.host = std::string(authority);
  return out;
}

Response get(std::string_view url, const Headers& headers, int timeout_seconds) {
  return perform(url, timeout_seconds, [&](httplib::Client& c, const std::string& path) {
    return c.Get(path, to_httplib(headers));
  });
}

Response post_json(std::string_view url, std::string_view body, const Headers& headers,
                   int timeout_seconds) {
  return perform(url, timeout_seconds, [&](httplib::Client& c, const std::string& path) {
    return c.Post(path, to_httplib(headers), std::string(body), "application/json");
  });
}

}  // namespace kbtriage::http
