// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/estimators.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Cholesky>

#include "ggmrelax/parallel.hpp"

namespace ggm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_dims(const SampleCovariance& sigma_hat, const Graph& graph) {
  if (sigma_hat.matrix.rows() != graph.size() || sigma_hat.matrix.cols() != graph.size()) {
    throw Error(ErrorCode::kDimension, "sample covariance does not match graph size");
  }
}

bool symmetric_part_pd(const SparseMatrix& m) {
  const Eigen::MatrixXd dense = m.to_dense();
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (dense + dense.transpose()));
  return llt.info() == Eigen::Success;
}

double edge_asymmetry(const SparseMatrix& m, const Graph& graph) {
  double worst = 0.0;
  for (const auto& [i, j] : graph.edges())
    worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

}  // namespace

EstimateReport gml_estimate(const SampleCovariance& sigma_hat, const Graph& graph,
                            const SolverConfig& config) {
  check_dims(sigma_hat, graph);
  const auto start = Clock::now();
  const SolveReport solve =
      solve_constrained_mle(sigma_hat.matrix, tilde_edge_set(graph), config);
  EstimateReport report;
  report.estimate = SparseMatrix::from_symmetric(solve.solution);
  report.max_residual = solve.final_residual;
  report.ridge_applied = solve.ridge_applied;
  report.per_neighborhood.push_back(
      {0, graph.size(), solve.iterations, solve.final_residual, false});
  report.max_asymmetry = 0.0;
  report.positive_definite = symmetric_part_pd(report.estimate);
  report.wall_time = seconds_since(start);
  return report;
}

Eigen::MatrixXd solve_neighborhood(const Eigen::MatrixXd& sigma_hat,
                                   const NeighborhoodDecomposition& hood,
                                   const SolverConfig& config,
                                   NeighborhoodSummary* summary) {
  const auto n = static_cast<Index>(hood.nodes.size());
  Eigen::MatrixXd block(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) block(a, b) = sigma_hat(hood.nodes[a], hood.nodes[b]);

  NeighborhoodSummary local{hood.center, n, 0, 0.0, false};
  Eigen::MatrixXd solution;
  if (hood.full_relaxation() && config.algorithm == SolverAlgorithm::kBlockRegression) {
    if (config.ridge > 0.0) block.diagonal().array() += config.ridge;
    solution = one_hop_closed_form(block);
    local.closed_form = true;
    local.residual = stationarity_residual(block, solution, hood.estimation_support());
  } else {
    const SolveReport solve = solve_constrained_mle(block, hood.estimation_support(), config);
    solution = solve.solution.to_dense();
    local.iterations = solve.iterations;
    local.residual = solve.final_residual;
  }
  if (summary) *summary = local;
  return solution;
}

EstimateReport rmml_estimate(const SampleCovariance& sigma_hat, const Graph& graph,
                             int hops, const SolverConfig& config, int workers) {
  check_dims(sigma_hat, graph);
  if (hops < 1) throw Error(ErrorCode::kInvalidArgument, "hop count must be >= 1");
  const auto start = Clock::now();
  const Index p = graph.size();

  // Each node writes only its own row, so rows can be filled concurrently.
  std::vector<std::vector<std::pair<Index, double>>> rows(p);
  std::vector<NeighborhoodSummary> summaries(p);
  parallel_for(static_cast<std::size_t>(p), workers, [&](std::size_t idx) {
    const auto i = static_cast<Index>(idx);
    const NeighborhoodDecomposition hood = decompose_neighborhood(graph, i, hops);
    const Eigen::MatrixXd local =
        solve_neighborhood(sigma_hat.matrix, hood, config, &summaries[i]);
    const Index li = hood.local_of(i);
    for (const auto& [row, col] : hood.row_params)
      rows[i].emplace_back(col, local(li, hood.local_of(col)));
  });

  EstimateReport report;
  report.estimate = SparseMatrix(p);
  for (Index i = 0; i < p; ++i)
    for (const auto& [j, value] : rows[i]) report.estimate.set(i, j, value);
  report.per_neighborhood = std::move(summaries);
  for (const auto& s : report.per_neighborhood)
    report.max_residual = std::max(report.max_residual, s.residual);
  report.ridge_applied = config.ridge > 0.0;
  report.max_asymmetry = edge_asymmetry(report.estimate, graph);
  report.positive_definite = symmetric_part_pd(report.estimate);
  report.wall_time = seconds_since(start);
  return report;
}

EstimateReport symmetrize(const EstimateReport& report, const Graph& graph) {
  EstimateReport out = report;
  if (!out.asymmetric) out.asymmetric = report.estimate;
  for (const auto& [i, j] : graph.edges()) {
    const double avg = 0.5 * (report.estimate(i, j) + report.estimate(j, i));
    out.estimate.set(i, j, avg);
    out.estimate.set(j, i, avg);
  }
  out.max_asymmetry = edge_asymmetry(out.estimate, graph);
  out.positive_definite = symmetric_part_pd(out.estimate);
  return out;
}

}  // namespace ggm
