// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ggmrelax/sparse_matrix.hpp"

namespace ggm {

enum class SolverAlgorithm { kBlockRegression, kProjectedGradient };

struct SolverConfig {
  SolverAlgorithm algorithm = SolverAlgorithm::kBlockRegression;
  /// Max-abs stationarity residual on the support required for success.
  double tol_residual = 1e-7;
  /// Sweeps (block regression) or gradient steps (projected gradient).
  int max_iter = 500;
  /// Initial step for projected gradient.
  double step_size = 0.1;
  /// Added to the covariance diagonal before solving when > 0.
  double ridge = 0.0;
  /// Keep the objective after every sweep/step in SolveReport.
  bool record_objective = false;

  static SolverConfig block_regression() { return {}; }
  static SolverConfig projected_gradient() {
    SolverConfig c;
    c.algorithm = SolverAlgorithm::kProjectedGradient;
    c.max_iter = 50000;
    return c;
  }
};

struct SolveReport {
  SparseSymmetricMatrix solution;
  int iterations = 0;
  double final_residual = 0.0;
  double objective = 0.0;
  bool ridge_applied = false;
  /// Objective at the start and after each accepted iteration (projected
  /// gradient always; block regression when record_objective is set).
  std::vector<double> objective_history;
};

/// Error carrying the residual reached when the iteration budget ran out.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : Error(ErrorCode::kNonConvergence, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Minimises <S, K> - log det K over positive definite K that vanish off
/// `support`. `support` must be symmetric and contain the full diagonal.
SolveReport solve_constrained_mle(const Eigen::MatrixXd& sigma_hat,
                                  const PairSet& support,
                                  const SolverConfig& config = {});

/// Plain gradient iteration on the support entries, with step halving
/// whenever a trial leaves the PD cone or fails to decrease the objective.
SolveReport projected_gradient_oracle(const Eigen::MatrixXd& sigma_hat,
                                      const PairSet& support, double step,
                                      int max_iter, double tol);

/// Inverse of a positive definite covariance block.
Eigen::MatrixXd one_hop_closed_form(const Eigen::MatrixXd& sigma_block);

/// <S, K> - log det K; +infinity when K is not positive definite.
double logdet_objective(const Eigen::MatrixXd& sigma_hat, const Eigen::MatrixXd& K);

/// max over support of |S(m,n) - inv(K)(m,n)|; +infinity if K is not PD.
double stationarity_residual(const Eigen::MatrixXd& sigma_hat,
                             const Eigen::MatrixXd& K, const PairSet& support);

}  // namespace ggm
