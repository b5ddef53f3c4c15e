// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

namespace ggm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Problem {
  Eigen::MatrixXd S;
  std::vector<std::vector<Index>> neighbors;  // off-diagonal support per row
  bool full = false;
  bool ridge_applied = false;
};

Problem prepare(const Eigen::MatrixXd& sigma_hat, const PairSet& support,
                double ridge) {
  const auto n = static_cast<Index>(sigma_hat.rows());
  if (n == 0 || sigma_hat.cols() != n) {
    throw Error(ErrorCode::kDimension, "covariance must be a non-empty square matrix");
  }
  if (ridge < 0.0) throw Error(ErrorCode::kInvalidArgument, "ridge must be >= 0");
  Problem pr;
  pr.S = sigma_hat;
  if (ridge > 0.0) {
    pr.S.diagonal().array() += ridge;
    pr.ridge_applied = true;
  }
  pr.neighbors.assign(n, {});
  for (const auto& [m, k] : support) {
    if (m < 0 || k < 0 || m >= n || k >= n) {
      throw Error(ErrorCode::kInvalidArgument, "support pair out of range");
    }
    if (!support.count({k, m})) {
      throw Error(ErrorCode::kInvalidArgument, "support is not symmetric");
    }
    if (m != k) pr.neighbors[m].push_back(k);
  }
  for (Index i = 0; i < n; ++i) {
    if (!support.count({i, i})) {
      throw Error(ErrorCode::kInvalidArgument,
                  "support is missing diagonal entry " + std::to_string(i));
    }
    if (!(pr.S(i, i) > 0.0)) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "covariance not positive definite: variance of variable " +
                      std::to_string(i) + " is not positive (set ridge)");
    }
  }
  pr.full = support.size() == static_cast<std::size_t>(n) * n;
  return pr;
}

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& dense, const PairSet& support) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dense.rows(), dense.cols());
  for (const auto& [m, n] : support) out(m, n) = dense(m, n);
  return out;
}

double support_residual(const Eigen::MatrixXd& S, const Eigen::MatrixXd& W,
                        const std::vector<std::vector<Index>>& neighbors) {
  double worst = 0.0;
  for (Index m = 0; m < static_cast<Index>(S.rows()); ++m) {
    worst = std::max(worst, std::abs(S(m, m) - W(m, m)));
    for (Index k : neighbors[m]) worst = std::max(worst, std::abs(S(m, k) - W(m, k)));
  }
  return worst;
}

SolveReport closed_form_report(const Problem& pr, const PairSet& support) {
  SolveReport report;
  const Eigen::MatrixXd K = one_hop_closed_form(pr.S);
  report.solution = SparseSymmetricMatrix::from_dense(K, support);
  report.final_residual = stationarity_residual(pr.S, K, support);
  report.objective = logdet_objective(pr.S, K);
  report.ridge_applied = pr.ridge_applied;
  return report;
}

// Exact block coordinate descent on the primal: each step re-optimises one
// row/column of K over its support with the rest held fixed, keeping
// W = inv(K) current through two rank-one corrections.
SolveReport block_regression(const Problem& pr, const PairSet& support,
                             const SolverConfig& config) {
  const Eigen::MatrixXd& S = pr.S;
  const auto n = static_cast<Index>(S.rows());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    K(i, i) = 1.0 / S(i, i);
    W(i, i) = S(i, i);
  }

  double residual = support_residual(S, W, pr.neighbors);
  int sweep = 0;
  std::vector<double> history;
  if (config.record_objective) history.push_back(logdet_objective(S, K));
  Eigen::VectorXd w(n), v(n);
  while (true) {
    if (residual <= config.tol_residual) {
      // Certify against a fresh inverse; the running W accumulates round-off.
      Eigen::LLT<Eigen::MatrixXd> llt(K);
      if (llt.info() == Eigen::Success) {
        W = llt.solve(Eigen::MatrixXd::Identity(n, n));
        residual = support_residual(S, W, pr.neighbors);
        if (residual <= config.tol_residual) break;
      }
    }
    if (sweep >= config.max_iter) {
      throw NonConvergenceError(
          "block regression did not converge in " + std::to_string(sweep) +
              " sweeps (residual " + std::to_string(residual) + ")",
          residual);
    }
    ++sweep;
    for (Index j = 0; j < n; ++j) {
      const auto& nb = pr.neighbors[j];
      const auto d = static_cast<Index>(nb.size());
      const double s22 = S(j, j);
      w = W.col(j);
      const double w22 = w(j);

      Eigen::MatrixXd M(d, d);
      Eigen::VectorXd rhs(d);
      for (Index a = 0; a < d; ++a) {
        rhs(a) = -S(nb[a], j) / s22;
        for (Index b = 0; b < d; ++b)
          M(a, b) = W(nb[a], nb[b]) - w(nb[a]) * w(nb[b]) / w22;
      }
      Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
      if (d > 0) {
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() != Eigen::Success) {
          throw Error(ErrorCode::kNotPositiveDefinite,
                      "block regression lost positive definiteness at row " +
                          std::to_string(j));
        }
        u = llt.solve(rhs);
      }

      double wu = 0.0;
      v.setZero();
      for (Index a = 0; a < d; ++a) {
        v.noalias() += W.col(nb[a]) * u(a);
        wu += w(nb[a]) * u(a);
      }
      v.noalias() -= w * (wu / w22);
      const double k22 = 1.0 / s22 + u.dot(M * u);

      W.noalias() -= (w / w22) * w.transpose();
      W.noalias() += (s22 * v) * v.transpose();
      W.col(j) = -s22 * v;
      W.row(j) = W.col(j).transpose();
      W(j, j) = s22;

      for (Index a = 0; a < d; ++a) {
        K(j, nb[a]) = u(a);
        K(nb[a], j) = u(a);
      }
      K(j, j) = k22;
    }
    residual = support_residual(S, W, pr.neighbors);
    if (config.record_objective) history.push_back(logdet_objective(S, K));
  }

  SolveReport report;
  report.solution = SparseSymmetricMatrix::from_dense(K, support);
  report.objective_history = std::move(history);
  report.iterations = sweep;
  report.final_residual = residual;
  report.objective = logdet_objective(S, K);
  report.ridge_applied = pr.ridge_applied;
  return report;
}

SolveReport gradient_descent(const Problem& pr, const PairSet& support,
                             double step, int max_iter, double tol) {
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step size must be > 0");
  const Eigen::MatrixXd& S = pr.S;
  const auto n = static_cast<Index>(S.rows());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) K(i, i) = 1.0 / S(i, i);

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  Eigen::MatrixXd Kinv = llt.solve(I);
  double f = logdet_objective(S, K);
  Eigen::MatrixXd G = restrict_to(S - Kinv, support);
  double residual = G.cwiseAbs().maxCoeff();
  double gamma = step;
  int iter = 0;
  std::vector<double> history{f};

  while (residual > tol) {
    if (iter >= max_iter) {
      throw NonConvergenceError(
          "projected gradient did not converge in " + std::to_string(iter) +
              " steps (residual " + std::to_string(residual) + ")",
          residual);
    }
    Eigen::MatrixXd trial;
    double f_trial = kInf;
    while (true) {
      trial = K - gamma * G;
      llt.compute(trial);
      if (llt.info() == Eigen::Success) {
        f_trial = logdet_objective(S, trial);
        // Slack for rounding in the objective near the optimum.
        if (f_trial <= f + 1e-13 * std::max(1.0, std::abs(f))) break;
      }
      gamma *= 0.5;
      if (gamma < 1e-300) {
        throw NonConvergenceError("projected gradient step underflow", residual);
      }
    }
    ++iter;
    Kinv = llt.solve(I);
    Eigen::MatrixXd G_next = restrict_to(S - Kinv, support);
    // Barzilai-Borwein proposal for the next trial step; halving above keeps
    // the accepted sequence monotone.
    const Eigen::MatrixXd s = trial - K;
    const Eigen::MatrixXd y = G_next - G;
    const double sy = (s.array() * y.array()).sum();
    if (sy > 0.0) gamma = std::clamp((s.array() * s.array()).sum() / sy, 1e-12, 1e12);

    K = std::move(trial);
    G = std::move(G_next);
    f = f_trial;
    history.push_back(f);
    residual = G.cwiseAbs().maxCoeff();
  }

  SolveReport report;
  report.solution = SparseSymmetricMatrix::from_dense(K, support);
  report.objective_history = std::move(history);
  report.iterations = iter;
  report.final_residual = residual;
  report.objective = f;
  report.ridge_applied = pr.ridge_applied;
  return report;
}

}  // namespace

double logdet_objective(const Eigen::MatrixXd& sigma_hat, const Eigen::MatrixXd& K) {
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) return kInf;
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return (sigma_hat.array() * K.array()).sum() - logdet;
}

double stationarity_residual(const Eigen::MatrixXd& sigma_hat,
                             const Eigen::MatrixXd& K, const PairSet& support) {
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) return kInf;
  const Eigen::MatrixXd W =
      llt.solve(Eigen::MatrixXd::Identity(K.rows(), K.cols()));
  double worst = 0.0;
  for (const auto& [m, n] : support)
    worst = std::max(worst, std::abs(sigma_hat(m, n) - W(m, n)));
  return worst;
}

Eigen::MatrixXd one_hop_closed_form(const Eigen::MatrixXd& sigma_block) {
  if (sigma_block.rows() == 0 || sigma_block.rows() != sigma_block.cols()) {
    throw Error(ErrorCode::kDimension, "covariance block must be square and non-empty");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_block);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingular,
                "singular local covariance; increase T or set ridge");
  }
  const Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(sigma_block.rows(), sigma_block.cols()));
  return 0.5 * (inv + inv.transpose());
}

SolveReport solve_constrained_mle(const Eigen::MatrixXd& sigma_hat,
                                  const PairSet& support,
                                  const SolverConfig& config) {
  if (!(config.tol_residual > 0.0) || config.max_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "solver needs tol_residual > 0 and max_iter >= 1");
  }
  const Problem pr = prepare(sigma_hat, support, config.ridge);
  if (config.algorithm == SolverAlgorithm::kProjectedGradient) {
    return gradient_descent(pr, support, config.step_size, config.max_iter,
                            config.tol_residual);
  }
  if (pr.full) {
    Eigen::LLT<Eigen::MatrixXd> llt(pr.S);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "covariance not positive definite (set ridge)");
    }
    return closed_form_report(pr, support);
  }
  return block_regression(pr, support, config);
}

SolveReport projected_gradient_oracle(const Eigen::MatrixXd& sigma_hat,
                                      const PairSet& support, double step,
                                      int max_iter, double tol) {
  if (!(tol > 0.0) || max_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument, "oracle needs tol > 0 and max_iter >= 1");
  }
  return gradient_descent(prepare(sigma_hat, support, 0.0), support, step,
                          max_iter, tol);
}

}  // namespace ggm
