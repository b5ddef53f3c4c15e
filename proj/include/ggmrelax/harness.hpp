// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ggmrelax/estimators.hpp"
#include "ggmrelax/model.hpp"

namespace ggm {

inline constexpr int kResultsSchemaVersion = 1;

enum class Family { kKnn, kLattice, kSmallWorld, kFromFile };

/// A named estimator as used in configs and result rows:
///   gml, loc (1-hop, no averaging), ave (1-hop, averaged),
///   rmml_k<N> (N-hop, averaged), rmml_k<N>_asym (N-hop, no averaging).
struct EstimatorSpec {
  std::string name;
  /// 0 for the centralized estimator.
  int hops = 0;
  bool symmetrized = true;

  static EstimatorSpec parse(const std::string& name);
};

/// Runs one estimator on a sample covariance.
EstimateReport run_estimator(const EstimatorSpec& spec, const SampleCovariance& sigma_hat,
                             const Graph& graph, const SolverConfig& config = {},
                             int workers = 1);

struct ExperimentConfig {
  Family family = Family::kKnn;
  // Family parameters; which ones are read depends on `family`.
  Index p = 0;
  int K = 0;
  double decay = 0.5;
  int rows = 0;
  int cols = 0;
  double mean = 0.5;
  double variance = 0.2;
  double beta = 0.5;
  double weight_low = 0.2;
  double weight_high = 0.8;
  std::string graph_file;
  std::string precision_file;

  int n_models = 1;
  int n_reps_per_model = 1;
  std::vector<int> T_grid;
  std::vector<std::string> estimators;
  std::optional<double> perturbation;
  std::uint64_t master_seed = 0;
  /// Parallel (model, replicate) cells.
  int workers = 1;
  /// Parallel local solves inside each estimator run.
  int inner_workers = 1;
  std::string output_path;
};

/// Parses the JSON config; throws Error(kConfig) on unknown keys, missing
/// required keys, or invalid values.
ExperimentConfig parse_experiment_config(const std::string& json_text);
void validate(const ExperimentConfig& config);

struct ResultRow {
  int model_id = 0;
  int replicate = 0;
  int T = 0;
  std::string estimator;
  int k = 0;
  double normalized_mse = 0.0;
  double frobenius_error = 0.0;
  /// Edge asymmetry of the estimate before any averaging pass.
  double max_asymmetry = 0.0;
  double solver_residual = 0.0;
  double wall_time_sec = 0.0;
  bool pd_flag = false;
  /// Empty on success; "<code>: <message>" when the estimator failed.
  std::string error;
};

/// Ground-truth (nominal) model for one model index.
GgmModel experiment_model(const ExperimentConfig& config, int model_id);

/// All rows in canonical order: model, replicate, T (grid order), estimator
/// (config order). Output does not depend on worker counts.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       bool omit_timing = false);

/// Column names in file order.
const std::vector<std::string>& result_columns();

struct ScalingPoint {
  Index p = 0;
  double rmml_seconds = 0.0;
  double gml_seconds = 0.0;
};

/// Wall time of k-hop RMML (and optionally GML) on side x side lattice
/// models, for each side length.
std::vector<ScalingPoint> runtime_scaling(const std::vector<int>& sides, int hops, int T,
                                          int workers, std::uint64_t seed,
                                          bool include_gml);

/// Builds a ground-truth model from a T x p time-series CSV: fills gaps by
/// linear interpolation, removes a trailing moving average, inverts the
/// sample covariance, zeroes the smallest off-diagonal entries, and refits.
GgmModel ingest_timeseries(const std::string& csv_path, int window, double target_sparsity);
GgmModel ingest_timeseries(std::istream& csv, int window, double target_sparsity);

/// Missing cells are NaN on input.
Eigen::MatrixXd interpolate_missing(const Eigen::MatrixXd& series);
Eigen::MatrixXd detrend_trailing(const Eigen::MatrixXd& series, int window);

}  // namespace ggm
