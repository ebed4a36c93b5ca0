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

/* C interface to drso. Every call returns a drso_status; on failure the
 * message and an error document are available from drso_last_error() and
 * drso_last_error_json() on the calling thread until its next drso call. */

#ifndef DRSO_DRSO_H_
#define DRSO_DRSO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DRSO_API __declspec(dllexport)
#else
#define DRSO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum drso_status {
  DRSO_OK = 0,
  DRSO_ERR_INVALID_ARGUMENT = 1,
  DRSO_ERR_SCHEMA = 2,
  DRSO_ERR_INFEASIBLE = 3,
  DRSO_ERR_BUDGET = 4,
  DRSO_ERR_NOT_APPLICABLE = 5,
  DRSO_ERR_NUMERICAL = 6,
  DRSO_ERR_INTERNAL = 7
} drso_status;

typedef enum drso_format { DRSO_FORMAT_JSON = 0, DRSO_FORMAT_CSV = 1, DRSO_FORMAT_TABLE = 2 } drso_format;

typedef struct drso_request drso_request;
typedef struct drso_result drso_result;

DRSO_API const char* drso_version(void);
DRSO_API const char* drso_status_name(drso_status status);
DRSO_API const char* drso_last_error(void);
DRSO_API const char* drso_last_error_json(void);

/* Number of subcommands and the i-th name, in sorted order. */
DRSO_API size_t drso_command_count(void);
DRSO_API const char* drso_command_name(size_t i);

DRSO_API drso_status drso_request_create(const char* command, drso_request** out);
DRSO_API void drso_request_destroy(drso_request* request);
/* Appends one "drso/1" JSON document. Parsed and checked immediately. */
DRSO_API drso_status drso_request_add_input(drso_request* request, const char* json_text);
DRSO_API drso_status drso_request_set_seed(drso_request* request, uint64_t seed);
DRSO_API drso_status drso_request_set_tolerance(drso_request* request, double tolerance);
DRSO_API drso_status drso_request_set_check_oracle(drso_request* request, int enabled);

DRSO_API drso_status drso_run(const drso_request* request, drso_result** out);
DRSO_API void drso_result_destroy(drso_result* result);
/* Rendered output; the pointer stays valid until the result is destroyed. */
DRSO_API drso_status drso_result_render(drso_result* result, drso_format format, const char** text);
/* Sets *has_gap to 0 when the request did not ask for the oracle check. */
DRSO_API drso_status drso_result_oracle_gap(const drso_result* result, int* has_gap, double* gap);

/* W_p between two weighted point sets on the real line, |x - y| ground metric. */
DRSO_API drso_status drso_wasserstein_1d(const double* x, const double* wx, size_t nx, const double* y,
                                         const double* wy, size_t ny, double p, double* out);

/* sup p.psi over the phi-divergence ball of radius theta around q. kind is
 * one of kl, burg, chi2, modified-chi2, hellinger, tv. p_star may be NULL. */
DRSO_API drso_status drso_phi_worst_case(const double* q, const double* psi, size_t n, double theta,
                                         const char* kind, double* value, double* p_star);

#ifdef __cplusplus
}
#endif

#endif /* DRSO_DRSO_H_ */
