/*
 * Copyright 2026 The gram-realize Authors
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

/*
 * C interface of libgram_realize.
 *
 * Every object is an opaque handle created by a gr_*_create / gr_*_read /
 * gr_*_run call and released with the matching gr_*_free. Functions return a
 * gr_status; on failure gr_last_error() describes the problem. The message is
 * thread-local and stays valid until the next failing call on that thread.
 *
 * Paths equal to "-" mean stdout for writers.
 */
#ifndef GRAM_REALIZE_H_
#define GRAM_REALIZE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GRAM_REALIZE_BUILDING)
#    define GR_API __declspec(dllexport)
#  else
#    define GR_API __declspec(dllimport)
#  endif
#else
#  define GR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gr_status {
  GR_OK = 0,
  GR_ERR_INPUT = 1,      /* malformed arguments or documents */
  GR_ERR_NUMERIC = 2,    /* non-finite arithmetic, failed decomposition */
  GR_ERR_STATE = 3,      /* operation called in the wrong state */
  GR_ERR_GENERATION = 4, /* random sampler exhausted its attempts */
  GR_ERR_IO = 5,         /* file could not be read or written */
  GR_ERR_NULL = 6,       /* required pointer argument was NULL */
  GR_ERR_INTERNAL = 7
} gr_status;

typedef enum gr_mode {
  GR_MODE_REGULAR = 0,
  GR_MODE_PARTIAL = 1,
  GR_MODE_SELECTION_OF_FASTEST = 2
} gr_mode;

typedef struct gr_layout {
  int d; /* Hilbert-space dimension */
  int W; /* number of states */
  int V; /* number of measurements */
  int K; /* outcomes per measurement */
} gr_layout;

typedef struct gr_solve_options {
  double entry_threshold;       /* stop when max |(P^T P - G)_ij| <= this */
  double error_threshold;       /* ... or when ||P^T P - G||_F / ||G||_F < this */
  int64_t max_subroutine_calls; /* 0 = 500 * M */
  double time_limit_s;          /* 0 = unlimited */
  uint64_t seed;
  int neighborhood_size;        /* 0 = min(d^2, M - 1) */
} gr_solve_options;

typedef struct gr_solve_summary {
  int converged;
  int budget_exhausted;
  double final_error;
  double final_max_entry_error;
  int64_t subroutine_calls;
  double wall_time_s;
  size_t mode_segments;
  double max_trace_error;
  double max_completeness_error;
  double min_eigenvalue;
} gr_solve_summary;

typedef struct gr_model gr_model;           /* ground-truth states and POVMs */
typedef struct gr_gram gr_gram;             /* Gram matrix with its layout */
typedef struct gr_result gr_result;         /* realized model and solve report */
typedef struct gr_experiment gr_experiment; /* experiment configuration */
typedef struct gr_records gr_records;       /* run records */

GR_API const char* gr_version(void);
GR_API const char* gr_last_error(void);
GR_API const char* gr_status_string(gr_status status);
GR_API const char* gr_mode_name(gr_mode mode);

/* Scenarios: kind is "pure", "partly_mixed" or "purified". */
GR_API gr_status gr_model_generate(const char* kind, gr_layout layout, uint64_t seed,
                                   gr_model** out);
GR_API gr_status gr_model_layout(const gr_model* model, gr_layout* out);
/* Writes the model document including its Gram matrix. */
GR_API gr_status gr_model_write_json(const gr_model* model, const char* path);
GR_API gr_status gr_model_gram(const gr_model* model, gr_gram** out);
GR_API void gr_model_free(gr_model* model);

/* Gram matrices. entries is row-major M x M with M = W + V K. */
GR_API gr_status gr_gram_create(gr_layout layout, const double* entries, size_t len,
                                gr_gram** out);
GR_API gr_status gr_gram_read_json(const char* path, gr_gram** out);
GR_API gr_status gr_gram_write_json(const gr_gram* gram, const char* path);
GR_API gr_status gr_gram_layout(const gr_gram* gram, gr_layout* out);
GR_API gr_status gr_gram_entries(const gr_gram* gram, double* buffer, size_t len);
GR_API void gr_gram_free(gr_gram* gram);

/* Realization. */
GR_API void gr_solve_options_init(gr_solve_options* options);
GR_API gr_status gr_realize(const gr_gram* gram, const gr_solve_options* options,
                            gr_result** out);
GR_API gr_status gr_result_summary(const gr_result* result, gr_solve_summary* out);
GR_API gr_status gr_result_mode_segment(const gr_result* result, size_t index, gr_mode* mode,
                                        int64_t* calls);
/* Column-major d^2 x M coordinate matrix. */
GR_API gr_status gr_result_columns(const gr_result* result, double* buffer, size_t len);
GR_API gr_status gr_result_write_json(const gr_result* result, const char* path);
GR_API void gr_result_free(gr_result* result);

/* Experiments. */
GR_API gr_status gr_experiment_read_json(const char* path, gr_experiment** out);
GR_API gr_status gr_experiment_set_runs(gr_experiment* experiment, int runs);
GR_API gr_status gr_experiment_set_workers(gr_experiment* experiment, int workers);
GR_API gr_status gr_experiment_set_format(gr_experiment* experiment, const char* format);
GR_API gr_status gr_experiment_set_output(gr_experiment* experiment, const char* path);
GR_API gr_status gr_experiment_set_bucket_width(gr_experiment* experiment, int width);
/* Output path and format as configured; path is "" when unset. */
GR_API const char* gr_experiment_output(const gr_experiment* experiment);
GR_API const char* gr_experiment_format(const gr_experiment* experiment);
GR_API int gr_experiment_bucket_width(const gr_experiment* experiment);
GR_API gr_status gr_experiment_run(const gr_experiment* experiment, gr_records** out);
GR_API void gr_experiment_free(gr_experiment* experiment);

/* Records. format is "csv" or "json". */
GR_API gr_status gr_records_read(const char* path, gr_records** out);
GR_API size_t gr_records_count(const gr_records* records);
GR_API size_t gr_records_failures(const gr_records* records);
GR_API gr_status gr_records_write(const gr_records* records, const char* path,
                                  const char* format);
GR_API gr_status gr_records_write_summary(const gr_records* records, const char* path,
                                          const char* format);
GR_API gr_status gr_records_write_histogram(const gr_records* records, int bucket_width,
                                            const char* path, const char* format);
GR_API void gr_records_free(gr_records* records);

#ifdef __cplusplus
}
#endif

#endif /* GRAM_REALIZE_H_ */
