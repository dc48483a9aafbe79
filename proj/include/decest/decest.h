/* SPDX-License-Identifier: Apache-2.0
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

#ifndef DECEST_H
#define DECEST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DECEST_API __declspec(dllexport)
#else
#define DECEST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum decest_status {
    DECEST_OK = 0,
    DECEST_INVALID_ARGUMENT = 1,
    DECEST_IO = 2,
    DECEST_PARSE = 3,
    DECEST_NUMERIC = 4,
    DECEST_INTERNAL = 5
} decest_status;

typedef struct decest_scenario decest_scenario;
typedef struct decest_table decest_table;
typedef struct decest_codebook decest_codebook;

/* Message for the last failing call on this thread; "" after success. */
DECEST_API const char* decest_last_error(void);
DECEST_API const char* decest_version(void);

/* Built-in scenarios. Names stay valid for the life of the process. */
DECEST_API size_t decest_builtin_count(void);
DECEST_API const char* decest_builtin_name(size_t index);
DECEST_API const char* decest_builtin_description(size_t index);

/* name_or_path: a built-in name, else a JSON scenario file. */
DECEST_API decest_status decest_scenario_load(const char* name_or_path, decest_scenario** out);
DECEST_API decest_status decest_scenario_save(const decest_scenario* sc, const char* path);
DECEST_API void decest_scenario_free(decest_scenario* sc);
DECEST_API decest_status decest_scenario_set_trials(decest_scenario* sc, long trials);
DECEST_API decest_status decest_scenario_set_seed(decest_scenario* sc, uint64_t seed);
DECEST_API const char* decest_scenario_name(const decest_scenario* sc);

DECEST_API decest_status decest_run(const decest_scenario* sc, unsigned workers, decest_table** out);
DECEST_API void decest_table_free(decest_table* t);
DECEST_API size_t decest_table_rows(const decest_table* t);

typedef struct decest_row {
    double sweep_value;
    const char* estimator;
    double mse;
    double std_err;
    long trials;
    double mean_iters;
    const char* error; /* "" when the estimator ran */
} decest_row;

DECEST_API decest_status decest_table_row(const decest_table* t, size_t index, decest_row* out);
/* path NULL or "-" writes to standard output. */
DECEST_API decest_status decest_table_write_csv(const decest_table* t, const char* path);

/* kind: "tn", "tc" or "tp". training_len is used for "tp" only. */
DECEST_API decest_status decest_codebook_build(const char* kind, int levels, int training_len, decest_codebook** out);
DECEST_API decest_status decest_codebook_load(const char* path, decest_codebook** out);
DECEST_API decest_status decest_codebook_save(const decest_codebook* cb, const char* path);
DECEST_API void decest_codebook_free(decest_codebook* cb);
DECEST_API int decest_codebook_length(const decest_codebook* cb);
DECEST_API int decest_codebook_size(const decest_codebook* cb);

typedef struct decest_ambiguity {
    int m;
    int n;
    double phase;
} decest_ambiguity;

/* Writes up to capacity pairs into out (may be NULL) and the total count into count. */
DECEST_API decest_status decest_codebook_ambiguities(const decest_codebook* cb, decest_ambiguity* out, size_t capacity,
                                                     size_t* count);

typedef struct decest_crlb_params {
    double theta;
    int n_sensors;
    int levels;
    int training_len;
    double gamma_s_db;
    double gamma_c_db;
    double granular_half_width;
    double energy_per_observation;
    long samples;
    uint64_t seed;
} decest_crlb_params;

typedef struct decest_crlb_result {
    double bound;
    double std_error;
    double information;
    long mc_samples;
} decest_crlb_result;

DECEST_API void decest_crlb_defaults(decest_crlb_params* p);
/* Unknown-CSI bound 1/(N I_1) with the pilot-prefixed codebook. */
DECEST_API decest_status decest_crlb(const decest_crlb_params* p, decest_crlb_result* out);

#ifdef __cplusplus
}
#endif

#endif
