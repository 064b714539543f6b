/*
 * C interface to the directional Gaussian smoothing optimizer.
 *
 * Every function returns a dgs_status; on failure a description of the most
 * recent error on the calling thread is available from dgs_last_error().
 * Handles are opaque and owned by the caller, who releases them with the
 * matching *_free function. Matrices are column-major.
 */
#ifndef DGS_DGS_H
#define DGS_DGS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DGS_BUILDING_LIBRARY)
#    define DGS_API __declspec(dllexport)
#  else
#    define DGS_API __declspec(dllimport)
#  endif
#else
#  define DGS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dgs_status {
  DGS_OK = 0,
  DGS_E_INVALID_ARGUMENT = 1,
  DGS_E_EVALUATION = 2,
  DGS_E_RANK_DEFICIENT = 3,
  DGS_E_DIVERGED = 4,
  DGS_E_CONFIG = 5,
  DGS_E_IO = 6,
  DGS_E_METRIC = 7,
  DGS_E_INTERNAL = 99
} dgs_status;

typedef enum dgs_method {
  DGS_METHOD_DGS = 0,
  DGS_METHOD_MC_GS = 1,
  DGS_METHOD_FD = 2,
  DGS_METHOD_NESTEROV = 3
} dgs_method;

typedef enum dgs_basis_update { DGS_BASIS_RESET = 0, DGS_BASIS_CUMULATIVE = 1 } dgs_basis_update;

DGS_API const char* dgs_version(void);
DGS_API const char* dgs_status_name(dgs_status status);
/* Message of the last failing call on this thread; "" if none. */
DGS_API const char* dgs_last_error(void);

/* ---- quadrature ---------------------------------------------------------- */

/* Writes `order` nodes and weights (ascending nodes). order >= 2. */
DGS_API dgs_status dgs_gauss_hermite(int order, double* nodes, double* weights);

/* ---- objectives ---------------------------------------------------------- */

typedef struct dgs_objective dgs_objective;

/* Return 0 and store F(x) in *value on success; any other value is reported
 * as an evaluation failure. Must be thread-safe when workers > 1. */
typedef int (*dgs_eval_fn)(const double* x, size_t dim, void* user, double* value);

DGS_API dgs_status dgs_objective_from_callback(size_t dim, dgs_eval_fn fn, void* user,
                                               dgs_objective** out);
/* name: Sphere, SharpRidge, Ackley, Rastrigin, Schaffer, Schwefel. */
DGS_API dgs_status dgs_objective_from_benchmark(const char* name, size_t dim, dgs_objective** out);
DGS_API void dgs_objective_free(dgs_objective* objective);
DGS_API size_t dgs_objective_dimension(const dgs_objective* objective);
DGS_API uint64_t dgs_objective_evaluations(const dgs_objective* objective);
DGS_API dgs_status dgs_objective_evaluate(dgs_objective* objective, const double* x, double* value);

/* Analytic gradient of a named benchmark (diagnostics only). */
DGS_API dgs_status dgs_benchmark_gradient(const char* name, size_t dim, const double* x,
                                          double* gradient);

/* ---- gradient estimators ------------------------------------------------- */

/* basis: d*d column-major orthonormal frame, or NULL for the identity.
 * sigmas: d radii. evaluations may be NULL. */
DGS_API dgs_status dgs_estimate_dgs(dgs_objective* objective, const double* x, const double* basis,
                                    const double* sigmas, int order, int share_center,
                                    double* gradient, uint64_t* evaluations);
DGS_API dgs_status dgs_estimate_mc_gs(dgs_objective* objective, const double* x, double sigma,
                                      size_t samples, uint64_t seed, double* gradient,
                                      uint64_t* evaluations);
/* step <= 0 selects the default 1e-6 * max(1, |x|_inf). */
DGS_API dgs_status dgs_estimate_fd(dgs_objective* objective, const double* x, double step,
                                   double* gradient, uint64_t* evaluations);
DGS_API dgs_status dgs_estimate_nesterov(dgs_objective* objective, const double* x, double step,
                                         uint64_t seed, double* gradient, uint64_t* evaluations);

/* ---- optimizers ---------------------------------------------------------- */

typedef struct dgs_schedule {
  double initial;
  double final_value;
  double power;
} dgs_schedule;

typedef struct dgs_optimizer_params {
  dgs_method method;
  size_t iterations;
  dgs_schedule learning_rate;
  dgs_schedule sigma; /* DGS mean radius r_t, MC-GS radius */
  int order;          /* DGS */
  double alpha;       /* DGS */
  double beta;        /* DGS */
  double gamma;       /* DGS */
  int perturb;        /* DGS */
  dgs_basis_update basis_update;
  int share_center; /* DGS */
  size_t samples;   /* MC-GS */
  double step;      /* FD / Nesterov, <= 0 for default */
  uint64_t seed;
  size_t workers;
} dgs_optimizer_params;

DGS_API void dgs_optimizer_params_default(dgs_method method, dgs_optimizer_params* params);

typedef struct dgs_trajectory dgs_trajectory;

/* On DGS_E_EVALUATION / DGS_E_DIVERGED, *out still receives the partial
 * trajectory when at least one record was completed (else NULL). */
DGS_API dgs_status dgs_minimize(dgs_objective* objective, const double* x0,
                                const dgs_optimizer_params* params, dgs_trajectory** out);
DGS_API void dgs_trajectory_free(dgs_trajectory* trajectory);
DGS_API size_t dgs_trajectory_size(const dgs_trajectory* trajectory);
DGS_API size_t dgs_trajectory_dimension(const dgs_trajectory* trajectory);
/* grad_norm is NaN on the terminal record. Any output pointer may be NULL. */
DGS_API dgs_status dgs_trajectory_record(const dgs_trajectory* trajectory, size_t index,
                                         size_t* iteration, double* loss, double* grad_norm,
                                         uint64_t* evaluations, int* perturbed);
DGS_API dgs_status dgs_trajectory_state(const dgs_trajectory* trajectory, size_t index,
                                        double* state);
DGS_API dgs_status dgs_trajectory_cos_dist(const dgs_trajectory* trajectory, const double* x_star,
                                           double* value);
DGS_API dgs_status dgs_trajectory_grad_norm_std(const dgs_trajectory* trajectory, double* value);

/* ---- experiments --------------------------------------------------------- */

typedef struct dgs_experiment dgs_experiment;

DGS_API dgs_status dgs_experiment_new(dgs_experiment** out);
DGS_API dgs_status dgs_experiment_load(const char* path, dgs_experiment** out);
DGS_API void dgs_experiment_free(dgs_experiment* experiment);
/* Same keys as the configuration file. */
DGS_API dgs_status dgs_experiment_set(dgs_experiment* experiment, const char* key,
                                      const char* value);
DGS_API dgs_status dgs_experiment_validate(const dgs_experiment* experiment);
/* First configured method only. Writes <output>/<method>.csv and
 * <output>/<method>_metrics.csv. */
DGS_API dgs_status dgs_experiment_run(dgs_experiment* experiment);
/* Every configured method (all four when none were named), paired seeds. */
DGS_API dgs_status dgs_experiment_compare(dgs_experiment* experiment);
/* Number of files written by the last run/compare, and their paths. */
DGS_API size_t dgs_experiment_output_count(const dgs_experiment* experiment);
DGS_API const char* dgs_experiment_output_path(const dgs_experiment* experiment, size_t index);

/* Aggregates <dir>/*_metrics.csv into <dir>/table.csv. If text is non-NULL it
 * receives a printable table to be released with dgs_string_free. */
DGS_API dgs_status dgs_aggregate_table(const char* results_dir, char** text);
DGS_API void dgs_string_free(char* text);

DGS_API size_t dgs_preset_count(void);
DGS_API const char* dgs_preset_name(size_t index);
DGS_API const char* dgs_preset_description(size_t index);

#ifdef __cplusplus
}
#endif

#endif /* DGS_DGS_H */
