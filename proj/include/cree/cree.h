/* Copyright 2026 The cree Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the cree shared library. Every call returns a cree_status;
 * on failure cree_last_error() describes the error for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * cree_string_free. */

#ifndef CREE_CREE_H_
#define CREE_CREE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CREE_API __declspec(dllexport)
#else
#define CREE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cree_status {
  CREE_OK = 0,
  CREE_INVALID_ARGUMENT = 1,
  CREE_POSTERIOR_UNDEFINED = 2,
  CREE_DEGENERATE_DISTRIBUTION = 3,
  CREE_UNBOUNDED_WATER_LEVEL = 4,
  CREE_QUADRATURE_FAILURE = 5,
  CREE_UNDEFINED_EE = 6,
  CREE_NON_CONVERGENCE = 7,
  CREE_PARSE_ERROR = 8,
  CREE_IO_ERROR = 9,
  CREE_UNKNOWN_KEY = 10,
  CREE_INTERNAL_ERROR = 99
} cree_status;

typedef struct cree_scenario cree_scenario;
typedef struct cree_report cree_report;

CREE_API const char* cree_last_error(void);
CREE_API const char* cree_status_name(cree_status status);

/* Scenario with every key at its default. */
CREE_API cree_status cree_scenario_new(cree_scenario** out);
CREE_API cree_status cree_scenario_load(const char* path, cree_scenario** out);
CREE_API cree_status cree_scenario_parse(const char* text, cree_scenario** out);
CREE_API cree_status cree_scenario_set(cree_scenario* scenario, const char* key,
                                       const char* value);
CREE_API cree_status cree_scenario_get(const cree_scenario* scenario,
                                       const char* key, char** out);
CREE_API void cree_scenario_free(cree_scenario* scenario);

/* A solve that stops on an iteration cap still returns CREE_OK; check
 * cree_report_ok. */
CREE_API cree_status cree_solve(const cree_scenario* scenario, cree_report** out);
CREE_API int cree_report_ok(const cree_report* report);
/* Numeric fields: ee_star, ee_std_err, rate, avg_p0, avg_p1, p_tot,
 * interference, lambda, nu, alpha_star, f_star, outer_iters, inner_iters. */
CREE_API cree_status cree_report_get(const cree_report* report, const char* field,
                                     double* out);
/* Number of alpha iterates and a copy of them. */
CREE_API size_t cree_report_trace_size(const cree_report* report);
CREE_API cree_status cree_report_trace(const cree_report* report, double* out,
                                       size_t capacity);
CREE_API cree_status cree_report_format(const cree_report* report, char** out);
CREE_API void cree_report_free(cree_report* report);

CREE_API cree_status cree_sweep(const cree_scenario* scenario, const char* key,
                                const double* values, size_t count, char** csv);

/* mc_count 0 keeps each preset's own sample count. */
CREE_API cree_status cree_figure(int id, const char* out_dir, uint64_t seed,
                                 int64_t mc_count);

/* *all_pass is 1 when every check passed. */
CREE_API cree_status cree_validate(uint64_t seed, double eps, char** report,
                                   int* all_pass);

CREE_API void cree_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CREE_CREE_H_ */
