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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "service/schema.hpp"

namespace drso::service {

struct Request {
  std::string command;
  std::vector<Json> inputs;  // parsed documents, in command-line order
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> tolerance;
  bool check_oracle = false;
};

/// Scalars and nested data go to `json`; plot-ready tables go to `columns`
/// and `rows`. A command without a natural table leaves `rows` empty.
struct Report {
  Json json;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::optional<double> oracle_gap;
};

enum class Format { kJson, kCsv, kTable };

Format parse_format(const std::string& name);
const std::vector<std::string>& commands();

Report run(const Request& request);
std::string render(const Report& report, Format format);

/// Error document written to stderr by the frontends.
std::string error_json(const std::string& code, const std::string& message);

}  // namespace drso::service
