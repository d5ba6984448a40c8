/* SPDX-License-Identifier: Apache-2.0
 *
 * risurllc: RIS-aided eMBB/URLLC puncturing simulator
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 */

#ifndef RISURLLC_H
#define RISURLLC_H

/* C interface to the simulator. All functions are thread-safe on distinct
 * handles. On failure a function returns a non-zero status and
 * rsu_last_error() describes the problem for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(RSU_BUILDING_LIBRARY)
#define RSU_API __attribute__((visibility("default")))
#else
#define RSU_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsu_status
{
    RSU_OK = 0,
    RSU_INVALID_ARGUMENT = 1, /* bad pointer or argument value */
    RSU_VALIDATION_ERROR = 2, /* malformed scenario or instance */
    RSU_INFEASIBLE = 3,       /* well-formed but unusable configuration */
    RSU_IO_ERROR = 4,
    RSU_DOMAIN_ERROR = 5,
    RSU_INTERNAL_ERROR = 6
} rsu_status;

typedef enum rsu_service
{
    RSU_SERVICE_EMBB = 0,
    RSU_SERVICE_URLLC = 1
} rsu_service;

typedef struct rsu_scenario rsu_scenario;

RSU_API const char* rsu_version(void);

/* Message of the last failed call on this thread ("" if none). */
RSU_API const char* rsu_last_error(void);

RSU_API rsu_status rsu_scenario_load(const char* path, rsu_scenario** out);
RSU_API rsu_status rsu_scenario_parse(const char* text, rsu_scenario** out);
RSU_API void rsu_scenario_free(rsu_scenario* scenario);

RSU_API rsu_status rsu_scenario_set_trials(rsu_scenario* scenario, int trials);
RSU_API rsu_status rsu_scenario_set_seed(rsu_scenario* scenario, uint64_t seed);
RSU_API rsu_status rsu_scenario_set_threads(rsu_scenario* scenario, int threads);
RSU_API rsu_status rsu_scenario_get_trials(const rsu_scenario* scenario, int* trials);
RSU_API rsu_status rsu_scenario_get_seed(const rsu_scenario* scenario, uint64_t* seed);

/* Checks every sweep point without simulating. */
RSU_API rsu_status rsu_scenario_validate(const rsu_scenario* scenario);

/* Runs the sweep and writes the CSV table to csv_path. */
RSU_API rsu_status rsu_run_sweep(const rsu_scenario* scenario, const char* csv_path);

/* Solves a tiny allocation instance (JSON file) exhaustively. On success *result
 * holds a JSON document that must be released with rsu_string_free. */
RSU_API rsu_status rsu_oracle_solve(const char* instance_path, char** result);
RSU_API void rsu_string_free(char* s);

RSU_API rsu_status rsu_snr_gap(double eps, rsu_service service, double* out);

#ifdef __cplusplus
}
#endif

#endif /* RISURLLC_H */
