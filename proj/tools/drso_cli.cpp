// Copyright 2026 The drso Authors.
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

// Batch frontend over the C interface: one subcommand per invocation.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "drso/drso.h"

namespace {

constexpr std::uint64_t kDefaultSeed = 20160101;

struct Options {
  std::vector<std::string> inputs;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> tolerance;
  bool check_oracle = false;
};

int exit_code(drso_status s) {
  switch (s) {
    case DRSO_OK: return 0;
    case DRSO_ERR_INFEASIBLE: return 2;
    case DRSO_ERR_BUDGET: return 3;
    case DRSO_ERR_NUMERICAL:
    case DRSO_ERR_INTERNAL: return 4;
    default: return 1;
  }
}

int report_error(drso_status s) {
  std::fputs(drso_last_error_json(), stderr);
  return exit_code(s);
}

int usage_error(const std::string& message) {
  std::ostringstream doc;
  // Same shape as the library's error documents.
  doc << "{\"schema\":\"drso/1\",\"error\":{\"code\":\"schema\",\"message\":\"";
  for (char c : message) {
    if (c == '"' || c == '\\') doc << '\\';
    doc << c;
  }
  doc << "\"}}\n";
  std::fputs(doc.str().c_str(), stderr);
  return 1;
}

bool read_text(const std::string& path, std::string& out) {
  if (path == "-") {
    out.assign(std::istreambuf_iterator<char>(std::cin), {});
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  out.assign(std::istreambuf_iterator<char>(in), {});
  return true;
}

int execute(const std::string& command, const Options& o) {
  drso_format format = DRSO_FORMAT_JSON;
  if (o.format == "csv") format = DRSO_FORMAT_CSV;
  else if (o.format == "table") format = DRSO_FORMAT_TABLE;

  drso_request* req = nullptr;
  drso_status s = drso_request_create(command.c_str(), &req);
  if (s != DRSO_OK) return report_error(s);
  struct Guard {
    drso_request* r;
    drso_result* res = nullptr;
    ~Guard() {
      drso_result_destroy(res);
      drso_request_destroy(r);
    }
  } guard{req};

  for (const auto& path : o.inputs) {
    std::string text;
    if (!read_text(path, text)) return usage_error("cannot read input file '" + path + "'");
    if ((s = drso_request_add_input(req, text.c_str())) != DRSO_OK) return report_error(s);
  }
  drso_request_set_seed(req, o.seed);
  if (o.tolerance && (s = drso_request_set_tolerance(req, *o.tolerance)) != DRSO_OK) return report_error(s);
  drso_request_set_check_oracle(req, o.check_oracle ? 1 : 0);

  if ((s = drso_run(req, &guard.res)) != DRSO_OK) return report_error(s);
  const char* text = nullptr;
  if ((s = drso_result_render(guard.res, format, &text)) != DRSO_OK) return report_error(s);

  if (o.output.empty()) {
    std::fputs(text, stdout);
  } else {
    std::ofstream out(o.output, std::ios::binary);
    if (!out || !(out << text)) return usage_error("cannot write output file '" + o.output + "'");
  }
  int has_gap = 0;
  double gap = 0.0;
  drso_result_oracle_gap(guard.res, &has_gap, &gap);
  if (has_gap) std::fprintf(stderr, "oracle gap: %.17g\n", gap);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drso: Wasserstein distributionally robust optimization toolkit"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(drso_version()));

  Options opts;
  std::string chosen;
  for (std::size_t i = 0; i < drso_command_count(); ++i) {
    const std::string name = drso_command_name(i);
    auto* sub = app.add_subcommand(name, "run the " + name + " solver");
    sub->add_option("-i,--input", opts.inputs, "drso/1 JSON input file(s), '-' for stdin");
    sub->add_option("-o,--output", opts.output, "write the result here instead of stdout");
    sub->add_option("-f,--format", opts.format, "json, csv or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--seed", opts.seed, "seed for synthetic generators")->capture_default_str();
    sub->add_option("--tolerance", opts.tolerance, "override the solver tolerance");
    sub->add_flag("--check-oracle", opts.check_oracle, "also run the brute-force path and print the gap");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }
  return execute(chosen, opts);
}
