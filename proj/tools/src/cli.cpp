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

#include "cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <iostream>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "kbtriage/error.hpp"

namespace kbtriage::cli {
namespace {

void report_error(std::ostream& err, std::string_view code, std::string_view detail) {
  err << fmt::format("error: code={} detail={}\n", code, nlohmann::json(std::string(detail)).dump());
}

bool is_usage_code(Errc code) {
  return code == Errc::kConfig || code == Errc::kMissingContext;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err, std::nullopt, {}, {}};
  CLI::App app{"Triage toolkit for Linux kernel bug reports", "kbtriage"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kbtriage 0.3.0");
  app.add_option("-c,--config", ctx.config_path, "Flat key = value configuration file");

  register_ingest(app, ctx);
  register_annotate(app, ctx);
  register_stats(app, ctx);
  register_kb_build(app, ctx);
  register_classify(app, ctx);
  register_evaluate(app, ctx);
  register_report(app, ctx);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    report_error(err, "Usage", e.what());
    err << "run 'kbtriage --help' for usage\n";
    return 2;
  }

  try {
    if (ctx.config_path) ctx.config = Config::load(*ctx.config_path);
    if (!ctx.action) {
      report_error(err, "Usage", "no command given");
      return 2;
    }
    return ctx.action();
  } catch (const UsageError& e) {
    report_error(err, "Usage", e.what());
    return 2;
  } catch (const Error& e) {
    report_error(err, errc_name(e.code()), e.detail());
    return is_usage_code(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    report_error(err, "Internal", e.what());
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace kbtriage::cli
