/*
 * Copyright 2026 The ozo Authors.
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
 * C interface to the ozo zeroth-order optimizer.
 *
 * Every function that can fail returns an ozo_status. On failure a message is
 * available from ozo_last_error() until the next failing call on the same
 * thread. Strings returned through char** out-parameters are owned by the
 * caller and must be released with ozo_string_free().
 */

#ifndef OZO_OZO_H_
#define OZO_OZO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(OZO_BUILDING_LIBRARY)
#define OZO_API __attribute__((visibility("default")))
#else
#define OZO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ozo_status {
  OZO_OK = 0,
  OZO_ERR_CONFIG = 1,
  OZO_ERR_CONTRACT = 2,
  OZO_ERR_DEGENERATE = 3,
  OZO_ERR_DIVERGED = 4,
  OZO_ERR_INFEASIBLE = 5,
  OZO_ERR_UNAVAILABLE = 6,
  OZO_ERR_IO = 7,
  OZO_ERR_INTERNAL = 8,
  OZO_ERR_NULL_ARGUMENT = 9
} ozo_status;

typedef struct ozo_experiment ozo_experiment;
typedef struct ozo_problem ozo_problem;
typedef struct ozo_sampler ozo_sampler;
typedef struct ozo_run_config ozo_run_config;
typedef struct ozo_trace ozo_trace;

/* Objective callback. A non-finite return marks the run as diverged. */
typedef double (*ozo_objective_fn)(const double* x, size_t dim, void* user);
/* Gradient callback, writes dim entries to grad. */
typedef void (*ozo_gradient_fn)(const double* x, size_t dim, double* grad,
                                void* user);

typedef struct ozo_trace_row {
  uint64_t k;
  uint64_t fevals;
  double f;
  double best_f;
  double alpha;
  double h;
  double pg_norm2;
  double qd_lhs;
  double qd_rhs;
} ozo_trace_row;

OZO_API const char* ozo_version(void);
OZO_API const char* ozo_last_error(void);
OZO_API const char* ozo_status_string(ozo_status status);
OZO_API void ozo_string_free(char* s);

/* JSON array of {"name", "description"} objects. */
OZO_API ozo_status ozo_presets_list(char** out_json);

/* Experiments. `scale` is "desk" or "paper"; NULL means "desk". */
OZO_API ozo_status ozo_experiment_load(const char* path, const char* scale,
                                       ozo_experiment** out);
OZO_API ozo_status ozo_experiment_from_string(const char* toml, const char* scale,
                                              ozo_experiment** out);
OZO_API ozo_status ozo_experiment_from_preset(const char* name, const char* scale,
                                              ozo_experiment** out);
OZO_API ozo_status ozo_experiment_set_seed(ozo_experiment* e, uint64_t seed);
OZO_API ozo_status ozo_experiment_set_output_dir(ozo_experiment* e, const char* dir);
/* 0 uses every hardware thread. */
OZO_API ozo_status ozo_experiment_set_threads(ozo_experiment* e, size_t threads);
/* Problem constants, per-variant schedule, Λ, w, C, η and regime as JSON. */
OZO_API ozo_status ozo_experiment_describe(const ozo_experiment* e, char** out_json);
/* Runs every replicate and writes the outputs. `out_summary_path` may be NULL. */
OZO_API ozo_status ozo_experiment_run(ozo_experiment* e, char** out_summary_path);
OZO_API void ozo_experiment_free(ozo_experiment* e);

/* Test problems. */
OZO_API ozo_status ozo_problem_create_convex_pl(size_t d, size_t n, double lambda,
                                               size_t rank_deficiency, uint64_t seed,
                                               ozo_problem** out);
OZO_API ozo_status ozo_problem_create_nonconvex_pl(size_t d, double lambda,
                                                  uint64_t seed, ozo_problem** out);
OZO_API size_t ozo_problem_dim(const ozo_problem* p);
OZO_API double ozo_problem_lambda(const ozo_problem* p);
OZO_API double ozo_problem_gamma(const ozo_problem* p);
OZO_API ozo_status ozo_problem_value(const ozo_problem* p, const double* x,
                                     double* out);
OZO_API ozo_status ozo_problem_gradient(const ozo_problem* p, const double* x,
                                        double* out_grad);
OZO_API ozo_status ozo_problem_initial_point(const ozo_problem* p, uint64_t seed,
                                             double* out_x);
OZO_API void ozo_problem_free(ozo_problem* p);

/* Direction samplers. `tag` is "coordinate", "haar" or "hadamard". */
OZO_API ozo_status ozo_sampler_create(const char* tag, size_t d, size_t ell,
                                      uint64_t seed, ozo_sampler** out);
/* Writes the next d×ℓ matrix column-major (d·ℓ doubles). */
OZO_API ozo_status ozo_sampler_next(ozo_sampler* s, double* out);
OZO_API void ozo_sampler_free(ozo_sampler* s);

/* Single runs. */
OZO_API ozo_status ozo_run_config_create(size_t dim, ozo_run_config** out);
OZO_API ozo_status ozo_run_config_set_objective(ozo_run_config* c, ozo_objective_fn fn,
                                                void* user);
OZO_API ozo_status ozo_run_config_set_gradient(ozo_run_config* c, ozo_gradient_fn fn,
                                               void* user);
/* Copies the problem; sets objective, gradient and f*. */
OZO_API ozo_status ozo_run_config_set_problem(ozo_run_config* c, const ozo_problem* p);
OZO_API ozo_status ozo_run_config_set_sampler(ozo_run_config* c, const char* tag,
                                              size_t ell, uint64_t seed);
OZO_API ozo_status ozo_run_config_set_alpha_constant(ozo_run_config* c, double alpha);
OZO_API ozo_status ozo_run_config_set_alpha_power(ozo_run_config* c, double alpha,
                                                  double s);
OZO_API ozo_status ozo_run_config_set_h_constant(ozo_run_config* c, double h);
OZO_API ozo_status ozo_run_config_set_h_power(ozo_run_config* c, double h, double r);
OZO_API ozo_status ozo_run_config_set_h_expdecay(ozo_run_config* c, double eta,
                                                 double r, double scale);
/* "fd" or "exact". */
OZO_API ozo_status ozo_run_config_set_mode(ozo_run_config* c, const char* mode);
/* "cached" or "recount". */
OZO_API ozo_status ozo_run_config_set_fevals(ozo_run_config* c, const char* convention);
OZO_API ozo_status ozo_run_config_set_budget(ozo_run_config* c, uint64_t budget);
OZO_API ozo_status ozo_run_config_set_x0(ozo_run_config* c, const double* x0,
                                         size_t dim);
/* Records the quasi-descent columns; needs a gradient. */
OZO_API ozo_status ozo_run_config_set_diagnostics(ozo_run_config* c, double w,
                                                  double C);
OZO_API void ozo_run_config_free(ozo_run_config* c);

/* A diverged run still returns OZO_OK with ozo_trace_diverged() != 0. */
OZO_API ozo_status ozo_run(const ozo_run_config* c, ozo_trace** out);
OZO_API size_t ozo_trace_rows(const ozo_trace* t);
OZO_API ozo_status ozo_trace_row_at(const ozo_trace* t, size_t i, ozo_trace_row* out);
OZO_API int ozo_trace_diverged(const ozo_trace* t);
OZO_API const char* ozo_trace_message(const ozo_trace* t);
OZO_API uint64_t ozo_trace_oracle_calls(const ozo_trace* t);
OZO_API ozo_status ozo_trace_final_x(const ozo_trace* t, double* out, size_t dim);
OZO_API ozo_status ozo_trace_write_csv(const ozo_trace* t, const char* path);
OZO_API void ozo_trace_free(ozo_trace* t);

#ifdef __cplusplus
}
#endif

#endif /* OZO_OZO_H_ */
