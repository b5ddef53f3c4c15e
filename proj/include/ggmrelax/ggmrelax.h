/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the ggmrelax library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a ggm_status; on
 * failure the message is available from ggm_last_error() on the same thread
 * until the next failing call. Dense matrices are row-major double arrays.
 */
#ifndef GGMRELAX_H
#define GGMRELAX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GGMRELAX_BUILDING_LIBRARY)
#    define GGM_API __declspec(dllexport)
#  else
#    define GGM_API __declspec(dllimport)
#  endif
#else
#  define GGM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ggm_status {
  GGM_OK = 0,
  GGM_ERR_INVALID_ARGUMENT = 1,
  GGM_ERR_NOT_POSITIVE_DEFINITE = 2,
  GGM_ERR_SINGULAR = 3,
  GGM_ERR_NONCONVERGENCE = 4,
  GGM_ERR_IO = 5,
  GGM_ERR_CONFIG = 6,
  GGM_ERR_DIMENSION = 7,
  GGM_ERR_ASSERTION = 8,
  GGM_ERR_INTERNAL = 99
} ggm_status;

typedef struct ggm_graph ggm_graph;
typedef struct ggm_model ggm_model;
typedef struct ggm_estimate ggm_estimate;

typedef enum ggm_algorithm {
  GGM_ALGO_BLOCK_REGRESSION = 0,
  GGM_ALGO_PROJECTED_GRADIENT = 1
} ggm_algorithm;

typedef struct ggm_solver_config {
  ggm_algorithm algorithm;
  double tol_residual;
  int max_iter;
  double step_size;
  double ridge;
} ggm_solver_config;

typedef enum ggm_fisher_convention {
  GGM_FISHER_HESSIAN = 0,
  GGM_FISHER_AS_PRINTED = 1
} ggm_fisher_convention;

typedef struct ggm_hd_bound_info {
  double kappa_bar;
  double sigma_bar;
  long r_bar;
  long r;
  double bound;
  double min_T;
  double probability;
  int sample_condition_met;
  int vacuous;
} ggm_hd_bound_info;

/* Library */
GGM_API const char* ggm_version(void);
/* Message of the last failure on this thread; "" if none. */
GGM_API const char* ggm_last_error(void);

/* Graphs. Edges are given as 2*n_edges node indices. */
GGM_API ggm_status ggm_graph_create(int p, const int* edges, size_t n_edges, ggm_graph** out);
GGM_API ggm_status ggm_graph_read(const char* path, ggm_graph** out);
GGM_API ggm_status ggm_graph_write(const ggm_graph* g, const char* path);
GGM_API int ggm_graph_size(const ggm_graph* g);
GGM_API size_t ggm_graph_edge_count(const ggm_graph* g);
/* Copies min(capacity, 2*edge_count) indices of the canonical edge list. */
GGM_API ggm_status ggm_graph_edges(const ggm_graph* g, int* out, size_t capacity);
GGM_API ggm_status ggm_graph_diameter(const ggm_graph* g, int* out);
GGM_API void ggm_graph_free(ggm_graph* g);

/* Models */
GGM_API ggm_status ggm_model_knn(int p, int K, double decay, uint64_t seed, ggm_model** out);
GGM_API ggm_status ggm_model_lattice(int rows, int cols, double mean, double variance,
                                     uint64_t seed, ggm_model** out);
GGM_API ggm_status ggm_model_small_world(int p, int K, double beta, double weight_low,
                                         double weight_high, uint64_t seed, ggm_model** out);
/* Precision given as p*p row-major; entries off the graph support must be 0. */
GGM_API ggm_status ggm_model_create(const ggm_graph* g, const double* precision,
                                    ggm_model** out);
GGM_API ggm_status ggm_model_load(const char* graph_path, const char* precision_path,
                                  ggm_model** out);
GGM_API ggm_status ggm_model_save(const ggm_model* m, const char* graph_path,
                                  const char* precision_path);
GGM_API ggm_status ggm_model_perturb(const ggm_model* m, double magnitude, uint64_t seed,
                                     ggm_model** out);
GGM_API ggm_status ggm_model_ingest(const char* csv_path, int window, double target_sparsity,
                                    ggm_model** out);
GGM_API int ggm_model_size(const ggm_model* m);
/* The model's graph as a new handle. */
GGM_API ggm_status ggm_model_graph(const ggm_model* m, ggm_graph** out);
GGM_API ggm_status ggm_model_precision(const ggm_model* m, double* out_pxp);
GGM_API ggm_status ggm_model_covariance(const ggm_model* m, double* out_pxp);
/* T x p row-major samples. */
GGM_API ggm_status ggm_model_sample(const ggm_model* m, int T, uint64_t seed, double* out);
GGM_API void ggm_model_free(ggm_model* m);

/* T x p samples -> p x p sample covariance (no mean subtraction). */
GGM_API ggm_status ggm_sample_covariance(const double* samples, int T, int p, double* out_pxp);

/* Estimation */
GGM_API ggm_solver_config ggm_solver_default(ggm_algorithm algorithm);
GGM_API ggm_status ggm_solve_constrained(const double* sigma_hat, const ggm_graph* g,
                                         const ggm_solver_config* config, double* out_pxp,
                                         double* out_residual);
GGM_API ggm_status ggm_estimate_gml(const double* sigma_hat, int T, const ggm_graph* g,
                                    const ggm_solver_config* config, ggm_estimate** out);
/* hops >= 1; symmetrize != 0 applies one edge-averaging pass. */
GGM_API ggm_status ggm_estimate_rmml(const double* sigma_hat, int T, const ggm_graph* g,
                                     int hops, int symmetrize, const ggm_solver_config* config,
                                     int workers, ggm_estimate** out);
/* By estimator name: gml, loc, ave, rmml_k<N>, rmml_k<N>_asym. */
GGM_API ggm_status ggm_estimate_named(const char* name, const double* sigma_hat, int T,
                                      const ggm_graph* g, const ggm_solver_config* config,
                                      int workers, ggm_estimate** out);
GGM_API int ggm_estimate_size(const ggm_estimate* e);
GGM_API ggm_status ggm_estimate_dense(const ggm_estimate* e, double* out_pxp);
GGM_API ggm_status ggm_estimate_write(const ggm_estimate* e, const char* triplet_path);
GGM_API double ggm_estimate_max_asymmetry(const ggm_estimate* e);
GGM_API double ggm_estimate_max_residual(const ggm_estimate* e);
GGM_API double ggm_estimate_wall_time(const ggm_estimate* e);
GGM_API int ggm_estimate_positive_definite(const ggm_estimate* e);
GGM_API void ggm_estimate_free(ggm_estimate* e);

/* Analysis. hops == 0 selects the centralized estimator. */
GGM_API ggm_status ggm_asymptotic_mse(const ggm_model* m, int hops,
                                      ggm_fisher_convention convention, double* out);
/* Writes k_max + 1 predictions (hops 1..k_max, then the centralized value). */
GGM_API ggm_status ggm_monotonicity(const ggm_model* m, int k_max, double* out,
                                    int* out_non_increasing);
GGM_API ggm_status ggm_incoherence(const ggm_model* m, double* out);
GGM_API ggm_status ggm_hd_bound(const ggm_model* m, int hops, double C, long T,
                                ggm_hd_bound_info* out);
GGM_API ggm_status ggm_normalized_mse(const double* estimate, const double* truth, int p,
                                      double* out);

/* Experiments. Runs the JSON config and writes the results CSV to csv_path
 * (or to the config's output_path when csv_path is NULL). */
GGM_API ggm_status ggm_experiment_run(const char* config_json, const char* csv_path,
                                      int omit_timing, size_t* out_rows);

#ifdef __cplusplus
}
#endif

#endif /* GGMRELAX_H */
