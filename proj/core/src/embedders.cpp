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

#include <cmath>
#include <nlohmann/json.hpp>

#include "kbtriage/error.hpp"
#include "kbtriage/http.hpp"
#include "kbtriage/retrieval.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

EmbeddingVector MockEmbedder::embed(std::string_view input) const {
  std::vector<double> counts(kDim, 0.0);
  for (const auto& token : text::tokenize(input)) counts[text::fnv1a64(token) % kDim] += 1.0;
  double norm_sq = 0.0;
  for (double c : counts) norm_sq += c * c;
  EmbeddingVector out;
  out.values.assign(kDim, 0.0f);
  if (norm_sq == 0.0) return out;
  const double norm = std::sqrt(norm_sq);
  for (std::size_t i = 0; i < kDim; ++i) out.values[i] = static_cast<float>(counts[i] / norm);
  return out;
}

HttpEmbedder::HttpEmbedder(HttpEndpointConfig config, std::size_t dim)
    : config_(std::move(config)), dim_(dim) {
  if (config_.endpoint.empty()) fail(Errc::kConfig, "embedding endpoint is empty");
  if (config_.model.empty()) fail(Errc::kConfig, "embedding model is empty");
}

EmbeddingVector HttpEmbedder::embed(std::string_view input) const {
  const nlohmann::json request = {{"model", config_.model}, {"input", std::string(input)}};
  http::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  std::string url = config_.endpoint;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/embeddings";
  const auto response = http::post_json(url, request.dump(), headers, config_.timeout_seconds);
  if (response.status < 200 || response.status >= 300) {
    fail(Errc::kEmbedderFailure, fmt::format("HTTP {} from {}", response.status, url));
  }
  try {
    const auto body = nlohmann::json::parse(response.body);
    EmbeddingVector out;
    for (const auto& v : body.at("data").at(0).at("embedding")) {
      out.values.push_back(v.get<float>());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kEmbedderFailure, fmt::format("unexpected embedding response: {}", e.what()));
  }
}

}  // namespace kbtriage
