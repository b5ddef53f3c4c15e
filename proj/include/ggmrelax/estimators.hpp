// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "ggmrelax/graph.hpp"
#include "ggmrelax/model.hpp"
#include "ggmrelax/solver.hpp"

namespace ggm {

struct NeighborhoodSummary {
  Index center = 0;
  int size = 0;
  int iterations = 0;
  double residual = 0.0;
  bool closed_form = false;
};

struct EstimateReport {
  /// Estimate over the augmented edge set. Before symmetrization the two
  /// orientations of an edge come from different local problems.
  SparseMatrix estimate;
  /// Pre-averaging estimate, retained by symmetrize().
  std::optional<SparseMatrix> asymmetric;
  std::vector<NeighborhoodSummary> per_neighborhood;
  /// max over edges of |J(i,j) - J(j,i)|.
  double max_asymmetry = 0.0;
  /// Largest solver residual among the solves that produced the estimate.
  double max_residual = 0.0;
  double wall_time = 0.0;
  /// Whether the symmetric part of the estimate is positive definite.
  bool positive_definite = false;
  bool ridge_applied = false;
};

/// Centralized maximum likelihood over the augmented edge set.
EstimateReport gml_estimate(const SampleCovariance& sigma_hat, const Graph& graph,
                            const SolverConfig& config = {});

/// k-hop relaxed marginal likelihood estimate, assembled row by row from the
/// p local solves (asymmetric; see symmetrize).
EstimateReport rmml_estimate(const SampleCovariance& sigma_hat, const Graph& graph,
                             int hops, const SolverConfig& config = {},
                             int workers = 1);

/// One pass of edge averaging: (J(i,j) + J(j,i)) / 2 on every edge.
EstimateReport symmetrize(const EstimateReport& report, const Graph& graph);

/// Local solve for one neighborhood; returns the dense local solution.
Eigen::MatrixXd solve_neighborhood(const Eigen::MatrixXd& sigma_hat,
                                   const NeighborhoodDecomposition& hood,
                                   const SolverConfig& config,
                                   NeighborhoodSummary* summary = nullptr);

}  // namespace ggm
