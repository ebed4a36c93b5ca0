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

#include <cstdio>
#include <string>

#include "drso/error.hpp"
#include "service/service.hpp"

namespace drso::service {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scalar_text(const Json& v) {
  if (v.is_number_float()) return g17(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Top-level scalars only; arrays and objects stay in the JSON format.
std::vector<std::pair<std::string, std::string>> scalars(const Json& j) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : j.items())
    if (!v.is_structured()) out.emplace_back(k, scalar_text(v));
  return out;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  if (name == "table") return Format::kTable;
  fail(ErrorCode::kInvalidArgument, "format must be json, csv or table");
}

std::string render(const Report& report, Format format) {
  std::string out;
  if (format == Format::kJson) {
    Json j = report.json;
    if (!report.rows.empty() && !j.contains("rows")) {
      j["columns"] = report.columns;
      Json rows = Json::array();
      for (const auto& r : report.rows) rows.push_back(r);
      j["rows"] = rows;
    }
    return j.dump(2) + "\n";
  }
  if (format == Format::kCsv) {
    if (report.rows.empty()) {
      out = "key,value\n";
      for (const auto& [k, v] : scalars(report.json)) out += k + "," + v + "\n";
      return out;
    }
    for (std::size_t c = 0; c < report.columns.size(); ++c) out += (c ? "," : "") + report.columns[c];
    out += "\n";
    for (const auto& r : report.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + g17(r[c]);
      out += "\n";
    }
    return out;
  }
  const auto kv = scalars(report.json);
  std::size_t w = 0;
  for (const auto& [k, _] : kv) w = std::max(w, k.size());
  for (const auto& [k, v] : kv) out += k + std::string(w - k.size() + 2, ' ') + v + "\n";
  if (!report.rows.empty()) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(report.columns.size());
    for (std::size_t c = 0; c < report.columns.size(); ++c) width[c] = report.columns[c].size();
    for (const auto& r : report.rows) {
      cells.emplace_back();
      for (std::size_t c = 0; c < r.size(); ++c) {
        cells.back().push_back(g17(r[c]));
        width[c] = std::max(width[c], cells.back().back().size());
      }
    }
    auto line = [&](const std::vector<std::string>& row) {
      for (std::size_t c = 0; c < row.size(); ++c)
        out += std::string(width[c] - row[c].size() + (c ? 2 : 0), ' ') + row[c];
      out += "\n";
    };
    out += "\n";
    line(report.columns);
    for (const auto& r : cells) line(r);
  }
  return out;
}

std::string error_json(const std::string& code, const std::string& message) {
  return Json{{"schema", kSchema}, {"error", {{"code", code}, {"message", message}}}}.dump() + "\n";
}

}  // namespace drso::service
