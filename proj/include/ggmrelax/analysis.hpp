// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ggmrelax/graph.hpp"
#include "ggmrelax/model.hpp"
#include "ggmrelax/sparse_matrix.hpp"

namespace ggm {

enum class FisherConvention {
  /// The three-case closed form exactly as it is usually printed. Singular
  /// at identity covariance; kept for comparison only.
  kAsPrinted,
  /// F(a,b) = tr(S E_a S E_b) / 2, the Hessian of the per-sample negative
  /// log-likelihood at the true parameter.
  kHessian,
};

struct FisherMatrix {
  /// Canonical (m <= n) parameters in lexicographic order, local indices.
  std::vector<Pair> params;
  Eigen::MatrixXd matrix;
  FisherConvention convention = FisherConvention::kHessian;
};

/// Canonical parameter list of a symmetric pair set.
std::vector<Pair> canonical_params(const PairSet& pairs);

FisherMatrix fisher_matrix(const Eigen::MatrixXd& sigma_block,
                           const PairSet& relaxed_edges,
                           FisherConvention convention = FisherConvention::kHessian);

/// Empirical covariance of per-sample scores at K = inv(sigma_block).
/// Independent Monte Carlo check on fisher_matrix.
FisherMatrix fisher_mc_oracle(const Eigen::MatrixXd& sigma_block,
                              const PairSet& relaxed_edges, int n_samples,
                              std::uint64_t seed);

/// Hop value that selects the centralized estimator in the predictors below.
inline constexpr int kGlobalHops = 0;

/// Predicted limit of T * E||J_hat - J*||_F^2 for the row-assembled k-hop
/// estimator (hops >= 1) or the centralized estimator (hops == kGlobalHops),
/// computed from the covariance `sigma` (exact or plug-in).
double asymptotic_mse(const Eigen::MatrixXd& sigma, const Graph& graph, int hops,
                      FisherConvention convention = FisherConvention::kHessian);

double asymptotic_mse(const GgmModel& model, int hops,
                      FisherConvention convention = FisherConvention::kHessian);

struct MonotonicityReport {
  /// Predictions for k = 1..k_max followed by the centralized value.
  std::vector<double> predictions;
  bool non_increasing = true;
};

/// Predictions for k = 1..k_max and the centralized estimator, with the
/// non-increasing check (relative slack 1e-9) recorded but not enforced.
MonotonicityReport monotonicity_report(const GgmModel& model, int k_max);

/// As monotonicity_report, but throws ErrorCode::kAssertion on a violation.
std::vector<double> check_monotonicity(const GgmModel& model, int k_max);

double normalized_mse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

struct BoundInputs {
  double kappa_bar = 0.0;  // largest eigenvalue of J*
  double sigma_bar = 0.0;  // largest variance
  long R_bar = 0;          // largest local relaxed edge set
  long r = 0;              // sum of local relaxed edge set sizes
  double C = 1.0;
};

struct HdBound {
  double bound = 0.0;
  double min_T = 0.0;
  double probability = 0.0;
  bool sample_condition_met = false;
  /// The stated success probability is not positive.
  bool vacuous = false;
};

BoundInputs bound_inputs(const GgmModel& model, int hops, double C);
HdBound hd_error_bound(const BoundInputs& inputs, Index p, long T);

/// Maximum cardinality of p for which incoherence() will run.
inline constexpr Index kIncoherenceMaxDim = 200;

/// Induced infinity norm of inv(G_EE) G_EEc with G = sigma (x) sigma, rows and
/// columns indexed by ordered pairs.
double incoherence(const Eigen::MatrixXd& sigma, const Graph& graph);

}  // namespace ggm
