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

#include "drso/drso.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "drso/error.hpp"
#include "drso/measures.hpp"
#include "drso/phi.hpp"
#include "service/service.hpp"

struct drso_request {
  drso::service::Request request;
};

struct drso_result {
  drso::service::Report report;
  std::string rendered;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_json;

drso_status to_status(drso::ErrorCode code) {
  switch (code) {
    case drso::ErrorCode::kInvalidArgument: return DRSO_ERR_INVALID_ARGUMENT;
    case drso::ErrorCode::kSchema: return DRSO_ERR_SCHEMA;
    case drso::ErrorCode::kInfeasible: return DRSO_ERR_INFEASIBLE;
    case drso::ErrorCode::kBudgetExceeded: return DRSO_ERR_BUDGET;
    case drso::ErrorCode::kNotApplicable: return DRSO_ERR_NOT_APPLICABLE;
    case drso::ErrorCode::kNumerical: return DRSO_ERR_NUMERICAL;
  }
  return DRSO_ERR_INTERNAL;
}

drso_status record(drso_status s, const std::string& msg) {
  g_error = msg;
  g_error_json = drso::service::error_json(drso_status_name(s), msg);
  return s;
}

template <class F>
drso_status guarded(F&& f) {
  g_error.clear();
  g_error_json.clear();
  try {
    f();
    return DRSO_OK;
  } catch (const drso::Error& e) {
    return record(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(DRSO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(DRSO_ERR_INTERNAL, e.what());
  }
}

drso_status null_argument(const char* what) { return record(DRSO_ERR_INVALID_ARGUMENT, std::string(what) + " is null"); }

}  // namespace

extern "C" {

const char* drso_version(void) { return "1.0.0"; }

const char* drso_status_name(drso_status status) {
  switch (status) {
    case DRSO_OK: return "ok";
    case DRSO_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DRSO_ERR_SCHEMA: return "schema";
    case DRSO_ERR_INFEASIBLE: return "infeasible";
    case DRSO_ERR_BUDGET: return "budget_exceeded";
    case DRSO_ERR_NOT_APPLICABLE: return "not_applicable";
    case DRSO_ERR_NUMERICAL: return "numerical";
    case DRSO_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* drso_last_error(void) { return g_error.c_str(); }
const char* drso_last_error_json(void) { return g_error_json.c_str(); }

size_t drso_command_count(void) { return drso::service::commands().size(); }

const char* drso_command_name(size_t i) {
  const auto& c = drso::service::commands();
  return i < c.size() ? c[i].c_str() : nullptr;
}

drso_status drso_request_create(const char* command, drso_request** out) {
  if (!command) return null_argument("command");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const std::string name = command;
    const auto& c = drso::service::commands();
    if (std::find(c.begin(), c.end(), name) == c.end())
      drso::fail(drso::ErrorCode::kInvalidArgument, "unknown subcommand '" + name + "'");
    auto* r = new drso_request;
    r->request.command = name;
    *out = r;
  });
}

void drso_request_destroy(drso_request* request) { delete request; }

drso_status drso_request_add_input(drso_request* request, const char* json_text) {
  if (!request) return null_argument("request");
  if (!json_text) return null_argument("json_text");
  return guarded([&] { request->request.inputs.push_back(drso::service::parse_document(json_text)); });
}

drso_status drso_request_set_seed(drso_request* request, uint64_t seed) {
  if (!request) return null_argument("request");
  request->request.seed = seed;
  return DRSO_OK;
}

drso_status drso_request_set_tolerance(drso_request* request, double tolerance) {
  if (!request) return null_argument("request");
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    return record(DRSO_ERR_INVALID_ARGUMENT, "tolerance must be positive and finite");
  request->request.tolerance = tolerance;
  return DRSO_OK;
}

drso_status drso_request_set_check_oracle(drso_request* request, int enabled) {
  if (!request) return null_argument("request");
  request->request.check_oracle = enabled != 0;
  return DRSO_OK;
}

drso_status drso_run(const drso_request* request, drso_result** out) {
  if (!request) return null_argument("request");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto* r = new drso_result;
    try {
      r->report = drso::service::run(request->request);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void drso_result_destroy(drso_result* result) { delete result; }

drso_status drso_result_render(drso_result* result, drso_format format, const char** text) {
  if (!result) return null_argument("result");
  if (!text) return null_argument("text");
  return guarded([&] {
    drso::service::Format f = drso::service::Format::kJson;
    switch (format) {
      case DRSO_FORMAT_JSON: f = drso::service::Format::kJson; break;
      case DRSO_FORMAT_CSV: f = drso::service::Format::kCsv; break;
      case DRSO_FORMAT_TABLE: f = drso::service::Format::kTable; break;
      default: drso::fail(drso::ErrorCode::kInvalidArgument, "unknown output format");
    }
    result->rendered = drso::service::render(result->report, f);
    *text = result->rendered.c_str();
  });
}

drso_status drso_result_oracle_gap(const drso_result* result, int* has_gap, double* gap) {
  if (!result) return null_argument("result");
  if (!has_gap || !gap) return null_argument("output pointer");
  *has_gap = result->report.oracle_gap.has_value() ? 1 : 0;
  *gap = result->report.oracle_gap.value_or(0.0);
  return DRSO_OK;
}

drso_status drso_wasserstein_1d(const double* x, const double* wx, size_t nx, const double* y, const double* wy,
                                size_t ny, double p, double* out) {
  if (!x || !wx || !y || !wy || !out) return null_argument("input array");
  return guarded([&] {
    std::vector<std::vector<double>> px, py;
    for (size_t i = 0; i < nx; ++i) px.push_back({x[i]});
    for (size_t i = 0; i < ny; ++i) py.push_back({y[i]});
    const auto mu = drso::DiscreteDistribution::from_points(px, std::vector<double>(wx, wx + nx));
    const auto nu = drso::DiscreteDistribution::from_points(py, std::vector<double>(wy, wy + ny));
    *out = drso::wasserstein_1d_fast(mu, nu, p);
  });
}

drso_status drso_phi_worst_case(const double* q, const double* psi, size_t n, double theta, const char* kind,
                                double* value, double* p_star) {
  if (!q || !psi || !kind || !value) return null_argument("input pointer");
  return guarded([&] {
    const auto r = drso::phi_worst_case(std::span<const double>(q, n), std::span<const double>(psi, n), theta,
                                        drso::parse_phi_kind(kind));
    *value = r.value;
    if (p_star)
      for (size_t j = 0; j < n; ++j) p_star[j] = r.p_star[j];
  });
}

}  // extern "C"
