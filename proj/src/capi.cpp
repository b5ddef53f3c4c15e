// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/ggmrelax.h"

#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <utility>

#include "ggmrelax/analysis.hpp"
#include "ggmrelax/harness.hpp"
#include "ggmrelax/io.hpp"

struct ggm_graph {
  ggm::Graph graph;
};
struct ggm_model {
  ggm::GgmModel model;
};
struct ggm_estimate {
  ggm::EstimateReport report;
};

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

thread_local std::string g_last_error;

ggm_status fail(ggm_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
ggm_status guarded(Fn&& fn) {
  try {
    fn();
    return GGM_OK;
  } catch (const ggm::Error& e) {
    return fail(static_cast<ggm_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GGM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GGM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GGM_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ggm::Error(ggm::ErrorCode::kInvalidArgument, what);
}

Eigen::MatrixXd from_row_major(const double* data, int rows, int cols) {
  return Eigen::Map<const RowMajor>(data, rows, cols);
}

void to_row_major(const Eigen::MatrixXd& m, double* out) {
  Eigen::Map<RowMajor>(out, m.rows(), m.cols()) = m;
}

ggm::SolverConfig convert(const ggm_solver_config* c) {
  ggm::SolverConfig out;
  if (!c) return out;
  switch (c->algorithm) {
    case GGM_ALGO_BLOCK_REGRESSION: out = ggm::SolverConfig::block_regression(); break;
    case GGM_ALGO_PROJECTED_GRADIENT: out = ggm::SolverConfig::projected_gradient(); break;
    default: throw ggm::Error(ggm::ErrorCode::kInvalidArgument, "unknown algorithm");
  }
  out.tol_residual = c->tol_residual;
  out.max_iter = c->max_iter;
  out.step_size = c->step_size;
  out.ridge = c->ridge;
  return out;
}

ggm::SampleCovariance covariance_arg(const double* sigma_hat, int T, const ggm_graph* g) {
  require(sigma_hat && g, "null argument");
  const int p = g->graph.size();
  return {from_row_major(sigma_hat, p, p), T};
}

ggm::FisherConvention convert(ggm_fisher_convention c) {
  switch (c) {
    case GGM_FISHER_HESSIAN: return ggm::FisherConvention::kHessian;
    case GGM_FISHER_AS_PRINTED: return ggm::FisherConvention::kAsPrinted;
  }
  throw ggm::Error(ggm::ErrorCode::kInvalidArgument, "unknown Fisher convention");
}

template <class T>
void emit(T** out, T&& value) {
  *out = new T(std::move(value));
}

}  // namespace

extern "C" {

const char* ggm_version(void) { return GGMRELAX_VERSION; }

const char* ggm_last_error(void) { return g_last_error.c_str(); }

ggm_status ggm_graph_create(int p, const int* edges, size_t n_edges, ggm_graph** out) {
  return guarded([&] {
    require(out && (edges || n_edges == 0), "null argument");
    std::vector<ggm::Pair> list;
    list.reserve(n_edges);
    for (size_t e = 0; e < n_edges; ++e) list.emplace_back(edges[2 * e], edges[2 * e + 1]);
    emit(out, ggm_graph{ggm::Graph(p, std::move(list))});
  });
}

ggm_status ggm_graph_read(const char* path, ggm_graph** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream in(path);
    if (!in) throw ggm::Error(ggm::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    emit(out, ggm_graph{ggm::read_edge_list(in)});
  });
}

ggm_status ggm_graph_write(const ggm_graph* g, const char* path) {
  return guarded([&] {
    require(g && path, "null argument");
    std::ofstream o(path);
    if (!o) throw ggm::Error(ggm::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    ggm::write_edge_list(o, g->graph);
  });
}

int ggm_graph_size(const ggm_graph* g) { return g ? g->graph.size() : 0; }

size_t ggm_graph_edge_count(const ggm_graph* g) { return g ? g->graph.edges().size() : 0; }

ggm_status ggm_graph_edges(const ggm_graph* g, int* out, size_t capacity) {
  return guarded([&] {
    require(g && (out || capacity == 0), "null argument");
    size_t k = 0;
    for (const auto& [i, j] : g->graph.edges()) {
      if (k + 2 > capacity) break;
      out[k++] = i;
      out[k++] = j;
    }
  });
}

ggm_status ggm_graph_diameter(const ggm_graph* g, int* out) {
  return guarded([&] {
    require(g && out, "null argument");
    *out = ggm::graph_diameter(g->graph);
  });
}

void ggm_graph_free(ggm_graph* g) { delete g; }

ggm_status ggm_model_knn(int p, int K, double decay, uint64_t seed, ggm_model** out) {
  return guarded([&] {
    require(out, "null argument");
    emit(out, ggm_model{ggm::knn_model(p, K, decay, seed)});
  });
}

ggm_status ggm_model_lattice(int rows, int cols, double mean, double variance, uint64_t seed,
                             ggm_model** out) {
  return guarded([&] {
    require(out, "null argument");
    emit(out, ggm_model{ggm::lattice_model(rows, cols, mean, variance, seed)});
  });
}

ggm_status ggm_model_small_world(int p, int K, double beta, double weight_low,
                                 double weight_high, uint64_t seed, ggm_model** out) {
  return guarded([&] {
    require(out, "null argument");
    emit(out, ggm_model{ggm::small_world_model(p, K, beta, weight_low, weight_high, seed)});
  });
}

ggm_status ggm_model_create(const ggm_graph* g, const double* precision, ggm_model** out) {
  return guarded([&] {
    require(g && precision && out, "null argument");
    const int p = g->graph.size();
    const Eigen::MatrixXd dense = from_row_major(precision, p, p);
    const ggm::PairSet support = ggm::tilde_edge_set(g->graph);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (dense(i, j) != 0.0 && !support.count({i, j}))
          throw ggm::Error(ggm::ErrorCode::kInvalidArgument,
                           "precision has entries off the graph support");
    emit(out, ggm_model{ggm::GgmModel(
                  g->graph, ggm::SparseSymmetricMatrix::from_dense(dense, support))});
  });
}

ggm_status ggm_model_load(const char* graph_path, const char* precision_path,
                          ggm_model** out) {
  return guarded([&] {
    require(graph_path && precision_path && out, "null argument");
    emit(out, ggm_model{ggm::load_model(graph_path, precision_path)});
  });
}

ggm_status ggm_model_save(const ggm_model* m, const char* graph_path,
                          const char* precision_path) {
  return guarded([&] {
    require(m && graph_path && precision_path, "null argument");
    ggm::save_model(m->model, graph_path, precision_path);
  });
}

ggm_status ggm_model_perturb(const ggm_model* m, double magnitude, uint64_t seed,
                             ggm_model** out) {
  return guarded([&] {
    require(m && out, "null argument");
    emit(out, ggm_model{ggm::perturb_nonedges(m->model, magnitude, seed)});
  });
}

ggm_status ggm_model_ingest(const char* csv_path, int window, double target_sparsity,
                            ggm_model** out) {
  return guarded([&] {
    require(csv_path && out, "null argument");
    emit(out, ggm_model{ggm::ingest_timeseries(std::string(csv_path), window, target_sparsity)});
  });
}

int ggm_model_size(const ggm_model* m) { return m ? m->model.size() : 0; }

ggm_status ggm_model_graph(const ggm_model* m, ggm_graph** out) {
  return guarded([&] {
    require(m && out, "null argument");
    emit(out, ggm_graph{m->model.graph()});
  });
}

ggm_status ggm_model_precision(const ggm_model* m, double* out_pxp) {
  return guarded([&] {
    require(m && out_pxp, "null argument");
    to_row_major(m->model.precision().to_dense(), out_pxp);
  });
}

ggm_status ggm_model_covariance(const ggm_model* m, double* out_pxp) {
  return guarded([&] {
    require(m && out_pxp, "null argument");
    to_row_major(m->model.covariance(), out_pxp);
  });
}

ggm_status ggm_model_sample(const ggm_model* m, int T, uint64_t seed, double* out) {
  return guarded([&] {
    require(m && out, "null argument");
    to_row_major(ggm::sample_gaussian(m->model, T, seed), out);
  });
}

void ggm_model_free(ggm_model* m) { delete m; }

ggm_status ggm_sample_covariance(const double* samples, int T, int p, double* out_pxp) {
  return guarded([&] {
    require(samples && out_pxp, "null argument");
    require(T >= 1 && p >= 1, "T and p must be >= 1");
    to_row_major(ggm::sample_covariance(from_row_major(samples, T, p)).matrix, out_pxp);
  });
}

ggm_solver_config ggm_solver_default(ggm_algorithm algorithm) {
  const ggm::SolverConfig c = algorithm == GGM_ALGO_PROJECTED_GRADIENT
                                  ? ggm::SolverConfig::projected_gradient()
                                  : ggm::SolverConfig::block_regression();
  return {algorithm, c.tol_residual, c.max_iter, c.step_size, c.ridge};
}

ggm_status ggm_solve_constrained(const double* sigma_hat, const ggm_graph* g,
                                 const ggm_solver_config* config, double* out_pxp,
                                 double* out_residual) {
  return guarded([&] {
    require(sigma_hat && g && out_pxp, "null argument");
    const int p = g->graph.size();
    const ggm::SolveReport r = ggm::solve_constrained_mle(
        from_row_major(sigma_hat, p, p), ggm::tilde_edge_set(g->graph), convert(config));
    to_row_major(r.solution.to_dense(), out_pxp);
    if (out_residual) *out_residual = r.final_residual;
  });
}

ggm_status ggm_estimate_gml(const double* sigma_hat, int T, const ggm_graph* g,
                            const ggm_solver_config* config, ggm_estimate** out) {
  return guarded([&] {
    require(out, "null argument");
    emit(out, ggm_estimate{ggm::gml_estimate(covariance_arg(sigma_hat, T, g), g->graph,
                                             convert(config))});
  });
}

ggm_status ggm_estimate_rmml(const double* sigma_hat, int T, const ggm_graph* g, int hops,
                             int symmetrize, const ggm_solver_config* config, int workers,
                             ggm_estimate** out) {
  return guarded([&] {
    require(out, "null argument");
    ggm::EstimateReport r = ggm::rmml_estimate(covariance_arg(sigma_hat, T, g), g->graph,
                                               hops, convert(config), workers);
    if (symmetrize) r = ggm::symmetrize(r, g->graph);
    emit(out, ggm_estimate{std::move(r)});
  });
}

ggm_status ggm_estimate_named(const char* name, const double* sigma_hat, int T,
                              const ggm_graph* g, const ggm_solver_config* config, int workers,
                              ggm_estimate** out) {
  return guarded([&] {
    require(name && out, "null argument");
    const auto spec = ggm::EstimatorSpec::parse(name);
    emit(out, ggm_estimate{ggm::run_estimator(spec, covariance_arg(sigma_hat, T, g), g->graph,
                                              convert(config), workers)});
  });
}

int ggm_estimate_size(const ggm_estimate* e) { return e ? e->report.estimate.dim() : 0; }

ggm_status ggm_estimate_dense(const ggm_estimate* e, double* out_pxp) {
  return guarded([&] {
    require(e && out_pxp, "null argument");
    to_row_major(e->report.estimate.to_dense(), out_pxp);
  });
}

ggm_status ggm_estimate_write(const ggm_estimate* e, const char* triplet_path) {
  return guarded([&] {
    require(e && triplet_path, "null argument");
    std::ofstream o(triplet_path);
    if (!o)
      throw ggm::Error(ggm::ErrorCode::kIo, std::string("cannot open '") + triplet_path + "'");
    ggm::write_triplets(o, e->report.estimate);
  });
}

double ggm_estimate_max_asymmetry(const ggm_estimate* e) {
  return e ? e->report.max_asymmetry : 0.0;
}
double ggm_estimate_max_residual(const ggm_estimate* e) {
  return e ? e->report.max_residual : 0.0;
}
double ggm_estimate_wall_time(const ggm_estimate* e) { return e ? e->report.wall_time : 0.0; }
int ggm_estimate_positive_definite(const ggm_estimate* e) {
  return e && e->report.positive_definite ? 1 : 0;
}

void ggm_estimate_free(ggm_estimate* e) { delete e; }

ggm_status ggm_asymptotic_mse(const ggm_model* m, int hops, ggm_fisher_convention convention,
                              double* out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = ggm::asymptotic_mse(m->model, hops, convert(convention));
  });
}

ggm_status ggm_monotonicity(const ggm_model* m, int k_max, double* out,
                            int* out_non_increasing) {
  return guarded([&] {
    require(m && out, "null argument");
    const auto report = ggm::monotonicity_report(m->model, k_max);
    for (size_t i = 0; i < report.predictions.size(); ++i) out[i] = report.predictions[i];
    if (out_non_increasing) *out_non_increasing = report.non_increasing ? 1 : 0;
  });
}

ggm_status ggm_incoherence(const ggm_model* m, double* out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = ggm::incoherence(m->model.covariance(), m->model.graph());
  });
}

ggm_status ggm_hd_bound(const ggm_model* m, int hops, double C, long T, ggm_hd_bound_info* out) {
  return guarded([&] {
    require(m && out, "null argument");
    const ggm::BoundInputs in = ggm::bound_inputs(m->model, hops, C);
    const ggm::HdBound b = ggm::hd_error_bound(in, m->model.size(), T);
    *out = {in.kappa_bar, in.sigma_bar,  in.R_bar,
            in.r,         b.bound,       b.min_T,
            b.probability, b.sample_condition_met ? 1 : 0, b.vacuous ? 1 : 0};
  });
}

ggm_status ggm_normalized_mse(const double* estimate, const double* truth, int p,
                              double* out) {
  return guarded([&] {
    require(estimate && truth && out, "null argument");
    *out = ggm::normalized_mse(from_row_major(estimate, p, p), from_row_major(truth, p, p));
  });
}

ggm_status ggm_experiment_run(const char* config_json, const char* csv_path, int omit_timing,
                              size_t* out_rows) {
  return guarded([&] {
    require(config_json, "null argument");
    const ggm::ExperimentConfig config = ggm::parse_experiment_config(config_json);
    const std::string path = csv_path ? csv_path : config.output_path;
    if (path.empty())
      throw ggm::Error(ggm::ErrorCode::kConfig, "config: no output path given");
    const auto rows = ggm::run_experiment(config);
    std::ofstream o(path);
    if (!o) throw ggm::Error(ggm::ErrorCode::kIo, "cannot open '" + path + "' for writing");
    ggm::write_results_csv(o, rows, omit_timing != 0);
    if (!o) throw ggm::Error(ggm::ErrorCode::kIo, "failed writing '" + path + "'");
    if (out_rows) *out_rows = rows.size();
  });
}

}  // extern "C"
