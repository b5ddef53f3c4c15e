// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggmrelax/ggmrelax.h"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

struct Failure {
  ggm_status status;
  std::string message;
};

void check(ggm_status s) {
  if (s != GGM_OK) throw Failure{s, ggm_last_error()};
}

int exit_code(ggm_status s) {
  switch (s) {
    case GGM_ERR_INVALID_ARGUMENT:
    case GGM_ERR_IO:
    case GGM_ERR_CONFIG:
    case GGM_ERR_DIMENSION:
      return kConfigError;
    default:
      return kNumericalError;
  }
}

struct ModelDeleter {
  void operator()(ggm_model* m) const { ggm_model_free(m); }
};
struct GraphDeleter {
  void operator()(ggm_graph* g) const { ggm_graph_free(g); }
};
struct EstimateDeleter {
  void operator()(ggm_estimate* e) const { ggm_estimate_free(e); }
};
using ModelPtr = std::unique_ptr<ggm_model, ModelDeleter>;
using GraphPtr = std::unique_ptr<ggm_graph, GraphDeleter>;
using EstimatePtr = std::unique_ptr<ggm_estimate, EstimateDeleter>;

ModelPtr load(const std::string& graph, const std::string& precision) {
  ggm_model* m = nullptr;
  check(ggm_model_load(graph.c_str(), precision.c_str(), &m));
  return ModelPtr(m);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{GGM_ERR_IO, "cannot open '" + path + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Headerless numeric CSV, T rows by p columns.
std::vector<double> read_samples(const std::string& path, int p, int& T) {
  std::ifstream in(path);
  if (!in) throw Failure{GGM_ERR_IO, "cannot open '" + path + "'"};
  std::vector<double> out;
  std::string line;
  T = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ls(line);
    std::string cell;
    int width = 0;
    while (std::getline(ls, cell, ',')) {
      try {
        out.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Failure{GGM_ERR_IO, "samples: non-numeric cell '" + cell + "'"};
      }
      ++width;
    }
    if (width != p)
      throw Failure{GGM_ERR_DIMENSION, "samples: row " + std::to_string(T + 1) + " has " +
                                           std::to_string(width) + " columns, expected " +
                                           std::to_string(p)};
    ++T;
  }
  if (T == 0) throw Failure{GGM_ERR_IO, "samples: no rows"};
  return out;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed covariance estimation for Gaussian graphical models"};
  app.set_version_flag("--version", std::string(ggm_version()));
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Emit a random model to graph/precision files");
  std::string family = "knn";
  int p = 20, K = 4, rows = 5, cols = 5;
  double decay = 0.5, mean = 0.5, variance = 0.2, beta = 0.5;
  std::vector<double> weights{0.2, 0.8};
  std::uint64_t seed = 1;
  std::string graph_path, precision_path;
  gen->add_option("--family", family, "knn, lattice or small_world")
      ->check(CLI::IsMember({"knn", "lattice", "small_world"}));
  gen->add_option("--p", p, "Number of nodes (knn, small_world)");
  gen->add_option("--K", K, "Neighbors per node");
  gen->add_option("--decay", decay, "Edge weight decay with distance (knn)");
  gen->add_option("--rows", rows, "Lattice rows");
  gen->add_option("--cols", cols, "Lattice columns");
  gen->add_option("--mean", mean, "Lattice weight mean");
  gen->add_option("--variance", variance, "Lattice weight variance");
  gen->add_option("--beta", beta, "Rewiring probability (small_world)");
  gen->add_option("--weights", weights, "Uniform weight range low high (small_world)")
      ->expected(2);
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--graph-out", graph_path, "Edge list output")->required();
  gen->add_option("--precision-out", precision_path, "Precision triplets output")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the precision matrix of one sample");
  std::string est_graph, est_precision, samples_path, estimator = "rmml_k2", est_out;
  std::string algorithm = "block";
  int est_T = 0, workers = 1;
  double ridge = 0.0;
  est->add_option("--graph", est_graph, "Edge list")->required();
  est->add_option("--precision", est_precision,
                  "Precision triplets to sample from (with --T and --seed)");
  est->add_option("--samples", samples_path, "T x p sample CSV (no header)");
  est->add_option("--T", est_T, "Number of samples to draw");
  est->add_option("--seed", seed, "Sampling seed");
  est->add_option("--estimator", estimator, "gml, loc, ave, rmml_k<N> or rmml_k<N>_asym");
  est->add_option("--algorithm", algorithm, "block or gradient")
      ->check(CLI::IsMember({"block", "gradient"}));
  est->add_option("--ridge", ridge, "Diagonal loading added before solving");
  est->add_option("--workers", workers, "Parallel local solves")->check(CLI::PositiveNumber);
  est->add_option("--out", est_out, "Estimate triplets output")->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo sweep from a JSON config");
  std::string config_path, exp_out;
  bool omit_timing = false;
  exp->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  exp->add_option("--out", exp_out, "CSV output (overrides output_path)");
  exp->add_flag("--omit-timing", omit_timing, "Write 0 for wall times (reproducible bytes)");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Asymptotic predictions and bounds for a model");
  std::string ana_graph, ana_precision, ana_out;
  int k_max = 3;
  double C = 1.5;
  long ana_T = 1000;
  ana->add_option("--graph", ana_graph, "Edge list")->required();
  ana->add_option("--precision", ana_precision, "Precision triplets")->required();
  ana->add_option("--k-max", k_max, "Largest hop count")->check(CLI::Range(2, 64));
  ana->add_option("--C", C, "Constant of the error bound (>= 1)");
  ana->add_option("--T", ana_T, "Sample size for the error bound");
  ana->add_option("--out", ana_out, "CSV output (stdout if omitted)");

  // ingest
  auto* ing = app.add_subcommand("ingest", "Build a model from a time-series CSV");
  std::string series_path;
  int window = 10;
  double sparsity = 0.7;
  ing->add_option("--csv", series_path, "T x p time series")->required();
  ing->add_option("--window", window, "Trailing detrend window");
  ing->add_option("--sparsity", sparsity, "Fraction of off-diagonal entries to zero");
  ing->add_option("--graph-out", graph_path, "Edge list output")->required();
  ing->add_option("--precision-out", precision_path, "Precision triplets output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) {
      ggm_model* raw = nullptr;
      if (family == "knn") check(ggm_model_knn(p, K, decay, seed, &raw));
      else if (family == "lattice") check(ggm_model_lattice(rows, cols, mean, variance, seed, &raw));
      else check(ggm_model_small_world(p, K, beta, weights[0], weights[1], seed, &raw));
      ModelPtr model(raw);
      check(ggm_model_save(model.get(), graph_path.c_str(), precision_path.c_str()));
    } else if (*est) {
      ggm_graph* graw = nullptr;
      check(ggm_graph_read(est_graph.c_str(), &graw));
      GraphPtr graph(graw);
      const int n = ggm_graph_size(graph.get());
      std::vector<double> samples;
      int T = 0;
      if (!samples_path.empty()) {
        samples = read_samples(samples_path, n, T);
      } else {
        if (est_precision.empty() || est_T < 1)
          throw Failure{GGM_ERR_CONFIG, "estimate needs --samples, or --precision with --T"};
        ModelPtr model = load(est_graph, est_precision);
        T = est_T;
        samples.resize(static_cast<size_t>(T) * n);
        check(ggm_model_sample(model.get(), T, seed, samples.data()));
      }
      std::vector<double> sigma(static_cast<size_t>(n) * n);
      check(ggm_sample_covariance(samples.data(), T, n, sigma.data()));
      ggm_solver_config config = ggm_solver_default(
          algorithm == "gradient" ? GGM_ALGO_PROJECTED_GRADIENT : GGM_ALGO_BLOCK_REGRESSION);
      config.ridge = ridge;
      ggm_estimate* eraw = nullptr;
      check(ggm_estimate_named(estimator.c_str(), sigma.data(), T, graph.get(), &config,
                               workers, &eraw));
      EstimatePtr estimate(eraw);
      check(ggm_estimate_write(estimate.get(), est_out.c_str()));
      std::cerr << "estimator=" << estimator << " residual="
                << num(ggm_estimate_max_residual(estimate.get()))
                << " max_asymmetry=" << num(ggm_estimate_max_asymmetry(estimate.get()))
                << " pd=" << ggm_estimate_positive_definite(estimate.get()) << '\n';
    } else if (*exp) {
      const std::string json = read_file(config_path);
      size_t n_rows = 0;
      check(ggm_experiment_run(json.c_str(), exp_out.empty() ? nullptr : exp_out.c_str(),
                               omit_timing ? 1 : 0, &n_rows));
      std::cerr << "wrote " << n_rows << " rows\n";
    } else if (*ana) {
      ModelPtr model = load(ana_graph, ana_precision);
      std::ofstream file;
      if (!ana_out.empty()) {
        file.open(ana_out);
        if (!file) throw Failure{GGM_ERR_IO, "cannot open '" + ana_out + "'"};
      }
      std::ostream& out = ana_out.empty() ? std::cout : file;
      out << "metric,k,value\n";
      for (int k = 0; k <= k_max; ++k) {
        double h = 0.0, a = 0.0;
        check(ggm_asymptotic_mse(model.get(), k, GGM_FISHER_HESSIAN, &h));
        // The literal printed form need not be positive definite; report nan then.
        if (ggm_asymptotic_mse(model.get(), k, GGM_FISHER_AS_PRINTED, &a) != GGM_OK) a = NAN;
        out << "asymptotic_mse_hessian," << k << ',' << num(h) << '\n';
        out << "asymptotic_mse_as_printed," << k << ',' << num(a) << '\n';
      }
      std::vector<double> seq(static_cast<size_t>(k_max) + 1);
      int non_increasing = 0;
      check(ggm_monotonicity(model.get(), k_max, seq.data(), &non_increasing));
      out << "monotone_non_increasing,," << non_increasing << '\n';
      double inc = 0.0;
      const ggm_status s = ggm_incoherence(model.get(), &inc);
      if (s == GGM_ERR_DIMENSION) inc = NAN;  // model too large for the dense form
      else check(s);
      out << "incoherence,," << num(inc) << '\n';
      for (int k = 1; k <= k_max; ++k) {
        ggm_hd_bound_info b{};
        check(ggm_hd_bound(model.get(), k, C, ana_T, &b));
        out << "hd_bound," << k << ',' << num(b.bound) << '\n';
        out << "hd_min_T," << k << ',' << num(b.min_T) << '\n';
        out << "hd_probability," << k << ',' << num(b.probability) << '\n';
        out << "hd_sample_condition_met," << k << ',' << b.sample_condition_met << '\n';
      }
    } else if (*ing) {
      ggm_model* raw = nullptr;
      check(ggm_model_ingest(series_path.c_str(), window, sparsity, &raw));
      ModelPtr model(raw);
      check(ggm_model_save(model.get(), graph_path.c_str(), precision_path.c_str()));
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return exit_code(f.status);
  }
  return kOk;
}
