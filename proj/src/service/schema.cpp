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

#include "service/schema.hpp"

#include <cmath>

#include "drso/error.hpp"

namespace drso::service {

namespace {

[[noreturn]] void schema_error(const std::string& what) { fail(ErrorCode::kSchema, what); }

}  // namespace

Json parse_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("document must be a JSON object");
  const auto it = doc.find("schema");
  if (it == doc.end() || !it->is_string() || it->get<std::string>() != kSchema)
    schema_error(std::string("document must carry \"schema\": \"") + kSchema + "\"");
  return doc;
}

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object()) schema_error(std::string("expected an object holding '") + key + "'");
  const auto it = doc.find(key);
  if (it == doc.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_number()) schema_error(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& doc, const char* key, double fallback) {
  return doc.is_object() && doc.contains(key) ? number(doc, key) : fallback;
}

std::size_t count_or(const Json& doc, const char* key, std::size_t fallback) {
  if (!doc.is_object() || !doc.contains(key)) return fallback;
  const Json& v = doc.at(key);
  if (!v.is_number_unsigned()) schema_error(std::string("field '") + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::string text_or(const Json& doc, const char* key, const std::string& fallback) {
  if (!doc.is_object() || !doc.contains(key)) return fallback;
  const Json& v = doc.at(key);
  if (!v.is_string()) schema_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& value, const char* what) {
  if (!value.is_array()) schema_error(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& v : value) {
    if (!v.is_number()) schema_error(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> point_rows(const Json& value, const char* what) {
  if (!value.is_array() || value.empty()) schema_error(std::string(what) + " must be a nonempty array");
  std::vector<std::vector<double>> out;
  out.reserve(value.size());
  for (const auto& v : value) {
    // Bare numbers are one-dimensional points.
    if (v.is_number()) {
      out.push_back({v.get<double>()});
    } else {
      out.push_back(numbers(v, what));
    }
  }
  return out;
}

std::shared_ptr<const PointSpace> read_space(const Json& doc) {
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    return std::make_shared<const PointSpace>(
        PointSpace::grid_1d(number(g, "lo"), number(g, "hi"), number(g, "step")));
  }
  return std::make_shared<const PointSpace>(point_rows(field(doc, "points"), "points"));
}

GroundMetric read_metric(const Json& doc) {
  if (!doc.is_object() || !doc.contains("metric")) return GroundMetric::euclidean(1.0);
  const Json& m = doc.at("metric");
  const MetricKind kind = parse_metric_kind(text_or(m, "kind", "euclidean"));
  const double p = number_or(m, "p", 1.0);
  if (kind == MetricKind::kExplicitMatrix) {
    const auto rows = point_rows(field(m, "matrix"), "metric.matrix");
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (r.size() != rows.size()) schema_error("metric.matrix must be square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return GroundMetric::explicit_matrix(std::move(flat), rows.size(), p);
  }
  return GroundMetric::from_kind(kind, p);
}

namespace {

std::vector<double> read_weights(const Json& doc, std::size_t n) {
  if (!doc.contains("weights")) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  auto w = numbers(doc.at("weights"), "weights");
  if (w.size() != n) schema_error("weights must match points in length");
  return w;
}

}  // namespace

DiscreteDistribution read_distribution(const Json& doc) {
  const auto pts = point_rows(field(doc, "points"), "points");
  return DiscreteDistribution::from_points(pts, read_weights(doc, pts.size()));
}

DiscreteDistribution read_distribution_on(const Json& doc, const std::shared_ptr<const PointSpace>& space) {
  const auto pts = point_rows(field(doc, "points"), "points");
  const auto w = read_weights(doc, pts.size());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto k = pts[i].size() == space->dimension() ? space->find(pts[i]) : std::nullopt;
    if (!k) return DiscreteDistribution::from_points(pts, w);
    atoms.push_back({*k, w[i]});
  }
  return DiscreteDistribution(space, std::move(atoms));
}

Json to_json(std::span<const double> x) {
  Json a = Json::array();
  for (double v : x) a.push_back(v);
  return a;
}

Json point_json(const PointSpace& space, std::size_t i) {
  const auto x = space.point(i);
  return x.size() == 1 ? Json(x[0]) : to_json(x);
}

}  // namespace drso::service
