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

#include <algorithm>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/http.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage::cli {
namespace {

struct IngestOptions {
  std::string source;
  OptPath fixtures;
  bool live = false;
  std::vector<std::string> ids;
  OptPath out;
  bool strict = false;
};

struct Payload {
  std::string origin;  // file name or id, for diagnostics
  nlohmann::json body;
};

std::vector<Payload> fixture_payloads(const std::filesystem::path& dir, std::vector<std::string>& errors) {
  if (!std::filesystem::is_directory(dir)) throw UsageError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Payload> out;
  for (const auto& f : files) {
    try {
      auto body = nlohmann::json::parse(read_file(f));
      if (body.is_array()) {
        for (std::size_t i = 0; i < body.size(); ++i) {
          out.push_back({fmt::format("{}[{}]", f.filename().string(), i), std::move(body[i])});
        }
      } else {
        out.push_back({f.filename().string(), std::move(body)});
      }
    } catch (const nlohmann::json::exception& e) {
      errors.push_back(fmt::format("{}: {}", f.filename().string(), e.what()));
    }
  }
  return out;
}

nlohmann::json fetch_json(const std::string& url, const http::Headers& headers) {
  const auto response = http::get(url, headers);
  if (response.status < 200 || response.status >= 300) {
    fail(Errc::kClientFailure, fmt::format("HTTP {} from {}", response.status, url));
  }
  try {
    return nlohmann::json::parse(response.body);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kMalformedRecord, fmt::format("{}: {}", url, e.what()));
  }
}

// Bugzilla REST: bug fields from /rest/bug/<id>, comments from
// /rest/bug/<id>/comment; the first comment is the description.
nlohmann::json fetch_bugzilla(const std::string& endpoint, const std::string& id) {
  const auto bug = fetch_json(fmt::format("{}/rest/bug/{}", endpoint, id), {});
  nlohmann::json payload = bug.at("bugs").at(0);
  const auto comments = fetch_json(fmt::format("{}/rest/bug/{}/comment", endpoint, id), {});
  const auto& list = comments.at("bugs").at(id).at("comments");
  payload["comments"] = list;
  if (!payload.contains("description") && !list.empty()) {
    payload["description"] = list.at(0).value("text", "");
  }
  return payload;
}

nlohmann::json fetch_syzkaller(const std::string& endpoint, const std::string& id) {
  auto payload = fetch_json(fmt::format("{}/bug?extid={}&json=1", endpoint, id), {});
  if (!payload.contains("id") && !payload.contains("extid")) payload["extid"] = id;
  return payload;
}

int run_ingest(Context& ctx, const IngestOptions& opt) {
  const auto source = parse_source(opt.source);
  if (!source) throw UsageError("unknown source '" + opt.source + "' (bugzilla|syzkaller)");
  if (opt.live == opt.fixtures.has_value()) throw UsageError("give exactly one of --fixtures or --live");
  const auto out_path = require_path(ctx, opt.out, "paths.corpus", "--out");

  std::vector<std::string> errors;
  std::vector<Payload> payloads;
  if (opt.fixtures) {
    payloads = fixture_payloads(*opt.fixtures, errors);
  } else {
    if (opt.ids.empty()) throw UsageError("--live needs --ids");
    const auto key = *source == Source::kBugzilla ? "tracker.bugzilla.endpoint" : "tracker.syzkaller.endpoint";
    const auto endpoint = ctx.config.get(key);
    if (!endpoint) throw UsageError(fmt::format("--live needs config key {}", key));
    for (const auto& id : opt.ids) {
      try {
        payloads.push_back({id, *source == Source::kBugzilla ? fetch_bugzilla(*endpoint, id)
                                                             : fetch_syzkaller(*endpoint, id)});
      } catch (const Error& e) {
        errors.push_back(fmt::format("{}: {}", id, e.what()));
      } catch (const nlohmann::json::exception& e) {
        errors.push_back(fmt::format("{}: {}", id, e.what()));
      }
    }
  }

  Corpus corpus = std::filesystem::exists(out_path) ? load_corpus(out_path, configured_window(ctx))
                                                    : Corpus(configured_window(ctx));
  const std::size_t before = corpus.size();
  std::size_t ingested = 0;
  for (const auto& p : payloads) {
    try {
      corpus.upsert(ingest(*source, p.body));
      ++ingested;
    } catch (const Error& e) {
      errors.push_back(fmt::format("{}: {}", p.origin, e.what()));
    } catch (const nlohmann::json::exception& e) {
      errors.push_back(fmt::format("{}: {}", p.origin, e.what()));
    }
  }
  for (const auto& e : errors) ctx.err << "warning: skipped " << e << '\n';
  if (opt.strict && !errors.empty()) {
    ctx.err << fmt::format("error: code=MalformedRecord detail=\"{} malformed payload(s) in strict mode\"\n",
                           errors.size());
    return 2;
  }
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  save_corpus(out_path, corpus);
  ctx.out << fmt::format("ingested={} new={} failed={} corpus_size={}\n", ingested,
                         corpus.size() - before, errors.size(), corpus.size());
  return 0;
}

}  // namespace

void register_ingest(CLI::App& app, Context& ctx) {
  auto opt = std::make_shared<IngestOptions>();
  auto* cmd = app.add_subcommand("ingest", "Ingest tracker payloads into a corpus file");
  cmd->add_option("--source", opt->source, "bugzilla or syzkaller")->required();
  cmd->add_option("--fixtures", opt->fixtures, "Directory of recorded JSON payloads");
  cmd->add_flag("--live", opt->live, "Fetch from the configured tracker endpoint");
  cmd->add_option("--ids", opt->ids, "Report ids to fetch in live mode")->delimiter(',');
  cmd->add_option("--out", opt->out, "Corpus file to create or merge into");
  cmd->add_flag("--strict", opt->strict, "Fail with status 2 on any malformed payload");
  cmd->callback([&ctx, opt] { ctx.action = [&ctx, opt] { return run_ingest(ctx, *opt); }; });
}

}  // namespace kbtriage::cli
