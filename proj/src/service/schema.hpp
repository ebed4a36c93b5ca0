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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "drso/distribution.hpp"
#include "drso/metric.hpp"
#include "drso/point_space.hpp"

namespace drso::service {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "drso/1";
inline constexpr std::uint64_t kDefaultSeed = 20160101;

/// Parses one document and checks its "schema" tag.
Json parse_document(const std::string& text);

// Field readers. A missing or mistyped field is a schema error.
const Json& field(const Json& doc, const char* key);
double number(const Json& doc, const char* key);
double number_or(const Json& doc, const char* key, double fallback);
std::size_t count_or(const Json& doc, const char* key, std::size_t fallback);
std::string text_or(const Json& doc, const char* key, const std::string& fallback);
std::vector<double> numbers(const Json& value, const char* what);
std::vector<std::vector<double>> point_rows(const Json& value, const char* what);

/// {"points": [...]} or {"grid": {"lo", "hi", "step"}}.
std::shared_ptr<const PointSpace> read_space(const Json& doc);
/// {"kind": "euclidean", "p": 1}; defaults to euclidean with p = 1.
GroundMetric read_metric(const Json& doc);
/// {"points": [...], "weights": [...]}; uniform weights when omitted.
DiscreteDistribution read_distribution(const Json& doc);
/// Same, but on `space` when every point is one of its members.
DiscreteDistribution read_distribution_on(const Json& doc, const std::shared_ptr<const PointSpace>& space);

Json to_json(std::span<const double> x);
Json point_json(const PointSpace& space, std::size_t i);

}  // namespace drso::service
