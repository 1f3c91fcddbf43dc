/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * riscr - cutoff-rate optimization for RIS-aided MIMO links
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
 */

/*
 * C interface to the riscr library. All objects are opaque handles owned by
 * the caller and released with the matching *_destroy function. Every call
 * that can fail returns a riscr_status; riscr_last_error() then describes the
 * most recent failure on the calling thread.
 */
#ifndef RISCR_H
#define RISCR_H

#include <stddef.h>
#include <stdint.h>

#if defined(RISCR_BUILDING_LIBRARY)
#define RISCR_API __attribute__((visibility("default")))
#else
#define RISCR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum riscr_status {
    RISCR_OK = 0,
    RISCR_E_INVALID_ARGUMENT = 1,
    RISCR_E_CONFIG = 2,
    RISCR_E_IO = 3,
    RISCR_E_NUMERIC = 4,
    RISCR_E_INTERNAL = 5
} riscr_status;

typedef enum riscr_command {
    RISCR_CMD_OPTIMIZE = 0,
    RISCR_CMD_SWEEP = 1,
    RISCR_CMD_GRADCHECK = 2,
    RISCR_CMD_REPRODUCE_FIG2 = 3,
    RISCR_CMD_REPRODUCE_FIG3 = 4,
    RISCR_CMD_BASELINE_NORIS = 5
} riscr_command;

typedef struct riscr_config riscr_config;
typedef struct riscr_result riscr_result;
typedef struct riscr_scenario riscr_scenario;

/* Converged-point means for one (run_id, method) arm. */
typedef struct riscr_arm_summary {
    const char* run_id;  /* valid while the result lives */
    const char* method;
    size_t realizations;
    double r0;
    double mi;
    double mi_stderr;
    double gaussian_rate;
    double gaussian_ref;
    double mean_iterations;
} riscr_arm_summary;

RISCR_API const char* riscr_version(void);
RISCR_API const char* riscr_status_string(riscr_status status);
RISCR_API const char* riscr_last_error(void);

RISCR_API riscr_status riscr_config_create(riscr_config** out);
RISCR_API void riscr_config_destroy(riscr_config* config);
RISCR_API riscr_status riscr_config_load(riscr_config* config, const char* path);
RISCR_API riscr_status riscr_config_set(riscr_config* config, const char* key, const char* value);
/* Copies the value (NUL-terminated) into buf. *needed, if non-NULL, receives
 * the buffer size required; a too-small buffer yields RISCR_E_INVALID_ARGUMENT. */
RISCR_API riscr_status riscr_config_get(const riscr_config* config, const char* key, char* buf,
                                        size_t buf_len, size_t* needed);

RISCR_API riscr_status riscr_run(const riscr_config* config, riscr_command command,
                                 riscr_result** out);
RISCR_API void riscr_result_destroy(riscr_result* result);
RISCR_API riscr_status riscr_result_write_csv(const riscr_result* result, const char* path);
/* Human-readable summary; owned by the result. */
RISCR_API const char* riscr_result_summary(const riscr_result* result);
RISCR_API size_t riscr_result_row_count(const riscr_result* result);
RISCR_API size_t riscr_result_arm_count(const riscr_result* result);
RISCR_API riscr_status riscr_result_arm(const riscr_result* result, size_t index,
                                        riscr_arm_summary* out);
/* 0 when a gradient check failed, 1 otherwise. */
RISCR_API int riscr_result_passed(const riscr_result* result);

/* One channel realization of the configured geometry plus its constellation
 * table, for evaluating rates at caller-supplied design points. Complex
 * arrays are interleaved (re, im); the precoder is column-major N_t x N_r. */
RISCR_API riscr_status riscr_scenario_create(const riscr_config* config, uint64_t realization,
                                             riscr_scenario** out);
RISCR_API void riscr_scenario_destroy(riscr_scenario* scenario);
RISCR_API riscr_status riscr_scenario_dims(const riscr_scenario* scenario, size_t* n_tx,
                                           size_t* n_rx, size_t* n_ris, size_t* n_symbols);
RISCR_API riscr_status riscr_scenario_cutoff_rate(const riscr_scenario* scenario,
                                                  const double* theta, const double* precoder,
                                                  double* r0);

#ifdef __cplusplus
}
#endif

#endif
