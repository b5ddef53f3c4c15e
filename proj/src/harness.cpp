// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/harness.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "ggmrelax/analysis.hpp"
#include "ggmrelax/io.hpp"
#include "ggmrelax/parallel.hpp"
#include "ggmrelax/rng.hpp"

namespace ggm {

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfig, "config: " + what);
}

const char* code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotPositiveDefinite: return "not_positive_definite";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kNonConvergence: return "nonconvergence";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kAssertion: return "assertion";
  }
  return "error";
}

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return text;
}

}  // namespace

EstimatorSpec EstimatorSpec::parse(const std::string& name) {
  EstimatorSpec spec;
  spec.name = name;
  if (name == "gml") return spec;
  if (name == "loc") {
    spec.hops = 1;
    spec.symmetrized = false;
    return spec;
  }
  if (name == "ave") {
    spec.hops = 1;
    return spec;
  }
  const std::string prefix = "rmml_k";
  if (name.rfind(prefix, 0) == 0) {
    std::string rest = name.substr(prefix.size());
    const std::string asym = "_asym";
    if (rest.size() > asym.size() &&
        rest.compare(rest.size() - asym.size(), asym.size(), asym) == 0) {
      spec.symmetrized = false;
      rest.resize(rest.size() - asym.size());
    }
    if (!rest.empty() && rest.find_first_not_of("0123456789") == std::string::npos &&
        rest.size() < 6) {
      spec.hops = std::stoi(rest);
      if (spec.hops >= 1) return spec;
    }
  }
  throw Error(ErrorCode::kConfig, "unknown estimator '" + name + "'");
}

EstimateReport run_estimator(const EstimatorSpec& spec, const SampleCovariance& sigma_hat,
                             const Graph& graph, const SolverConfig& config, int workers) {
  if (spec.hops == 0) return gml_estimate(sigma_hat, graph, config);
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report = rmml_estimate(sigma_hat, graph, spec.hops, config, workers);
  if (spec.symmetrized) {
    report = symmetrize(report, graph);
    report.wall_time = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("top level must be an object");

  static const std::set<std::string> known = {
      "family", "p", "K", "decay", "rows", "cols", "mean", "variance", "beta", "weights",
      "graph_file", "precision_file", "n_models", "n_reps_per_model", "T_grid",
      "estimators", "perturbation", "master_seed", "workers", "inner_workers",
      "output_path"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) config_error("unknown key '" + key + "'");
  for (const char* key : {"family", "n_models", "n_reps_per_model", "T_grid", "estimators",
                          "master_seed"}) {
    if (!j.contains(key)) config_error(std::string("missing required key '") + key + "'");
  }

  ExperimentConfig c;
  try {
    const auto family = j.at("family").get<std::string>();
    if (family == "knn") c.family = Family::kKnn;
    else if (family == "lattice") c.family = Family::kLattice;
    else if (family == "small_world") c.family = Family::kSmallWorld;
    else if (family == "from_file") c.family = Family::kFromFile;
    else config_error("unknown family '" + family + "'");

    c.p = j.value("p", 0);
    c.K = j.value("K", 0);
    c.decay = j.value("decay", c.decay);
    c.rows = j.value("rows", 0);
    c.cols = j.value("cols", 0);
    c.mean = j.value("mean", c.mean);
    c.variance = j.value("variance", c.variance);
    c.beta = j.value("beta", c.beta);
    if (j.contains("weights")) {
      const auto w = j.at("weights").get<std::vector<double>>();
      if (w.size() != 2) config_error("'weights' must be [low, high]");
      c.weight_low = w[0];
      c.weight_high = w[1];
    }
    c.graph_file = j.value("graph_file", std::string());
    c.precision_file = j.value("precision_file", std::string());
    c.n_models = j.at("n_models").get<int>();
    c.n_reps_per_model = j.at("n_reps_per_model").get<int>();
    c.T_grid = j.at("T_grid").get<std::vector<int>>();
    c.estimators = j.at("estimators").get<std::vector<std::string>>();
    if (j.contains("perturbation") && !j.at("perturbation").is_null())
      c.perturbation = j.at("perturbation").get<double>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.workers = j.value("workers", 1);
    c.inner_workers = j.value("inner_workers", 1);
    c.output_path = j.value("output_path", std::string());
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("bad value: ") + e.what());
  }
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.n_models < 1 || c.n_reps_per_model < 1) config_error("counts must be >= 1");
  if (c.workers < 1 || c.inner_workers < 1) config_error("worker counts must be >= 1");
  if (c.T_grid.empty()) config_error("T_grid must not be empty");
  for (std::size_t i = 0; i < c.T_grid.size(); ++i) {
    if (c.T_grid[i] < 1) config_error("T values must be >= 1");
    if (i > 0 && c.T_grid[i] <= c.T_grid[i - 1]) config_error("T_grid must be ascending");
  }
  if (c.estimators.empty()) config_error("estimators must not be empty");
  for (const auto& name : c.estimators) EstimatorSpec::parse(name);
  if (c.perturbation && *c.perturbation < 0.0) config_error("perturbation must be >= 0");
  switch (c.family) {
    case Family::kKnn:
      if (c.p < 2 || c.K < 1 || c.K >= c.p) config_error("knn needs p >= 2 and 1 <= K < p");
      if (!(c.decay > 0.0)) config_error("knn needs decay > 0");
      break;
    case Family::kLattice:
      if (c.rows < 2 || c.cols < 2) config_error("lattice needs rows, cols >= 2");
      if (c.variance < 0.0) config_error("lattice needs variance >= 0");
      break;
    case Family::kSmallWorld:
      if (c.K < 2 || c.K % 2 || c.K >= c.p) config_error("small_world needs even 2 <= K < p");
      if (c.beta < 0.0 || c.beta > 1.0) config_error("small_world needs beta in [0,1]");
      if (c.weight_low > c.weight_high) config_error("weights must satisfy low <= high");
      break;
    case Family::kFromFile:
      if (c.graph_file.empty() || c.precision_file.empty())
        config_error("from_file needs graph_file and precision_file");
      break;
  }
}

GgmModel experiment_model(const ExperimentConfig& c, int model_id) {
  const std::uint64_t seed =
      derive_seed(c.master_seed, Stream::kModel, static_cast<std::uint64_t>(model_id));
  switch (c.family) {
    case Family::kKnn: return knn_model(c.p, c.K, c.decay, seed);
    case Family::kLattice: return lattice_model(c.rows, c.cols, c.mean, c.variance, seed);
    case Family::kSmallWorld:
      return small_world_model(c.p, c.K, c.beta, c.weight_low, c.weight_high, seed);
    case Family::kFromFile: return load_model(c.graph_file, c.precision_file);
  }
  throw Error(ErrorCode::kConfig, "unknown family");
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<EstimatorSpec> specs;
  for (const auto& name : config.estimators) specs.push_back(EstimatorSpec::parse(name));

  // Models first: a failure here aborts the whole sweep.
  std::vector<std::optional<GgmModel>> nominal(config.n_models), source(config.n_models);
  parallel_for(config.n_models, config.workers, [&](std::size_t m) {
    nominal[m] = experiment_model(config, static_cast<int>(m));
    if (config.perturbation) {
      source[m] = perturb_nonedges(
          *nominal[m], *config.perturbation,
          derive_seed(config.master_seed, Stream::kPerturbation, m));
    } else {
      source[m] = nominal[m];
    }
  });

  const std::size_t n_cells =
      static_cast<std::size_t>(config.n_models) * config.n_reps_per_model;
  const std::size_t per_cell = config.T_grid.size() * specs.size();
  std::vector<ResultRow> rows(n_cells * per_cell);

  parallel_for(n_cells, config.workers, [&](std::size_t cell) {
    const int m = static_cast<int>(cell / config.n_reps_per_model);
    const int rep = static_cast<int>(cell % config.n_reps_per_model);
    const GgmModel& truth_model = *nominal[m];
    const Graph& graph = truth_model.graph();
    const Eigen::MatrixXd truth = truth_model.precision().to_dense();
    std::size_t out = cell * per_cell;
    for (int T : config.T_grid) {
      const std::uint64_t sample_seed =
          derive_seed(config.master_seed, Stream::kSamples, cell, static_cast<std::uint64_t>(T));
      const SampleCovariance sigma_hat =
          sample_covariance(sample_gaussian(*source[m], T, sample_seed));
      for (const auto& spec : specs) {
        ResultRow& row = rows[out++];
        row.model_id = m;
        row.replicate = rep;
        row.T = T;
        row.estimator = spec.name;
        row.k = spec.hops;
        try {
          const EstimateReport report =
              run_estimator(spec, sigma_hat, graph, SolverConfig{}, config.inner_workers);
          const Eigen::MatrixXd est = report.estimate.to_dense();
          row.normalized_mse = normalized_mse(est, truth);
          row.frobenius_error = (est - truth).norm();
          row.max_asymmetry = report.asymmetric
                                  ? report.asymmetric->max_asymmetry()
                                  : report.max_asymmetry;
          row.solver_residual = report.max_residual;
          row.wall_time_sec = report.wall_time;
          row.pd_flag = report.positive_definite;
        } catch (const Error& e) {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          row.normalized_mse = row.frobenius_error = row.max_asymmetry = nan;
          row.solver_residual = row.wall_time_sec = nan;
          row.pd_flag = false;
          row.error = std::string(code_name(e.code())) + ": " + sanitize(e.what());
        }
      }
    }
  });
  return rows;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns = {
      "model_id", "replicate", "T", "estimator", "k", "normalized_mse", "frobenius_error",
      "max_asymmetry", "solver_residual", "wall_time_sec", "pd_flag", "error"};
  return columns;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       bool omit_timing) {
  out << "# ggmrelax results schema_version=" << kResultsSchemaVersion << '\n';
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << r.model_id << ',' << r.replicate << ',' << r.T << ',' << r.estimator << ','
        << r.k << ',' << format_number(r.normalized_mse) << ','
        << format_number(r.frobenius_error) << ',' << format_number(r.max_asymmetry) << ','
        << format_number(r.solver_residual) << ','
        << (omit_timing ? std::string("0") : format_number(r.wall_time_sec)) << ','
        << (r.pd_flag ? 1 : 0) << ',' << r.error << '\n';
  }
}

std::vector<ScalingPoint> runtime_scaling(const std::vector<int>& sides, int hops, int T,
                                          int workers, std::uint64_t seed,
                                          bool include_gml) {
  std::vector<ScalingPoint> out;
  for (int side : sides) {
    const GgmModel model = lattice_model(side, side, 0.5, 0.2, seed);
    const SampleCovariance sigma_hat =
        sample_covariance(sample_gaussian(model, T, derive_seed(seed, Stream::kSamples, side)));
    ScalingPoint pt;
    pt.p = model.size();
    pt.rmml_seconds = rmml_estimate(sigma_hat, model.graph(), hops, {}, workers).wall_time;
    if (include_gml) pt.gml_seconds = gml_estimate(sigma_hat, model.graph()).wall_time;
    out.push_back(pt);
  }
  return out;
}

}  // namespace ggm
