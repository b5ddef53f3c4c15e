// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "ggmrelax/solver.hpp"
#include "support.hpp"

using namespace ggm;

namespace {

PairSet diagonal(Index n) {
  PairSet s;
  for (Index i = 0; i < n; ++i) s.insert({i, i});
  return s;
}

PairSet full(Index n) {
  PairSet s;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) s.insert({i, j});
  return s;
}

Eigen::MatrixXd sample_cov(const GgmModel& m, int T, std::uint64_t seed) {
  return sample_covariance(sample_gaussian(m, T, seed)).matrix;
}

}  // namespace

TEST_CASE("diagonal support decouples") {
  Eigen::MatrixXd S(2, 2);
  S << 2, 0.7, 0.7, 4;
  for (const auto& config : {SolverConfig::block_regression(), SolverConfig::projected_gradient()}) {
    const SolveReport r = solve_constrained_mle(S, diagonal(2), config);
    CHECK(r.solution(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.solution(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.solution(0, 1) == 0.0);
    CHECK(r.iterations == 0);
  }
}

TEST_CASE("full support gives the inverse") {
  const Eigen::MatrixXd S = testing::random_spd(6, 4);
  const Eigen::MatrixXd inv = S.inverse();
  for (const auto& config : {SolverConfig::block_regression(), SolverConfig::projected_gradient()}) {
    const SolveReport r = solve_constrained_mle(S, full(6), config);
    CHECK(testing::max_abs(r.solution.to_dense() - inv) < 1e-6);
  }
}

TEST_CASE("population covariance recovers the precision") {
  const GgmModel m = testing::random_model(testing::chain(3), 5);
  for (const auto& config : {SolverConfig::block_regression(), SolverConfig::projected_gradient()}) {
    const SolveReport r = solve_constrained_mle(m.covariance(), tilde_edge_set(m.graph()), config);
    CHECK(testing::max_abs(r.solution.to_dense() - m.precision().to_dense()) < 1e-6);
    CHECK(r.final_residual <= config.tol_residual);
  }
}

TEST_CASE("block regression and projected gradient agree") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GgmModel m = testing::random_model(testing::random_graph(10, 0.3, seed), seed + 100);
    const Eigen::MatrixXd S = sample_cov(m, 200, seed);
    const PairSet support = tilde_edge_set(m.graph());
    SolverConfig tight = SolverConfig::projected_gradient();
    tight.tol_residual = 1e-8;
    tight.max_iter = 500000;
    SolverConfig block = SolverConfig::block_regression();
    block.tol_residual = 1e-9;
    const auto a = solve_constrained_mle(S, support, block).solution.to_dense();
    const auto b = solve_constrained_mle(S, support, tight).solution.to_dense();
    CHECK(testing::max_abs(a - b) <= 1e-5);
  }
}

TEST_CASE("solution satisfies the optimality conditions") {
  const GgmModel m = testing::random_model(testing::random_graph(12, 0.3, 9), 3);
  const Eigen::MatrixXd S = sample_cov(m, 300, 4);
  const PairSet support = tilde_edge_set(m.graph());
  SolverConfig config;
  config.record_objective = true;
  const SolveReport r = solve_constrained_mle(S, support, config);
  const Eigen::MatrixXd K = r.solution.to_dense();
  CHECK(stationarity_residual(S, K, support) <= config.tol_residual);
  CHECK(r.objective == doctest::Approx(logdet_objective(S, K)));
  // The sweep objective never goes up.
  for (std::size_t i = 1; i < r.objective_history.size(); ++i)
    CHECK(r.objective_history[i] <= r.objective_history[i - 1] + 1e-12);

  // Local optimality: small feasible perturbations never decrease the objective.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z(0.0, 1e-4);
  const double f0 = logdet_objective(S, K);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(12, 12);
    for (const auto& [a, b] : support)
      if (a <= b) D(a, b) = D(b, a) = z(rng);
    CHECK(logdet_objective(S, K + D) >= f0 - 1e-14);
  }
}

TEST_CASE("objective gradient matches finite differences") {
  const Eigen::MatrixXd S = testing::random_spd(4, 3);
  const Eigen::MatrixXd K = testing::random_spd(4, 8).inverse();
  const Eigen::MatrixXd grad = S - K.inverse();
  const double h = 1e-6;
  for (Index a = 0; a < 4; ++a) {
    for (Index b = a; b < 4; ++b) {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(4, 4);
      E(a, b) = E(b, a) = 1.0;
      const double fd = (logdet_objective(S, K + h * E) - logdet_objective(S, K - h * E)) / (2 * h);
      const double analytic = a == b ? grad(a, a) : 2.0 * grad(a, b);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
    }
  }
  CHECK(std::isinf(logdet_objective(S, -Eigen::MatrixXd::Identity(4, 4))));
}

TEST_CASE("gradient oracle starting at the optimum") {
  const Eigen::MatrixXd S = testing::random_spd(5, 6);
  const SolveReport r = projected_gradient_oracle(S, diagonal(5), 0.1, 100, 1e-10);
  CHECK(r.iterations == 0);
  CHECK(r.final_residual <= 1e-10);
  for (Index i = 0; i < 5; ++i) CHECK(r.solution(i, i) == 1.0 / S(i, i));
}

TEST_CASE("one-hop closed form") {
  Eigen::MatrixXd s(1, 1);
  s << 4.0;
  CHECK(one_hop_closed_form(s)(0, 0) == doctest::Approx(0.25));
  CHECK(one_hop_closed_form(Eigen::MatrixXd::Identity(3, 3)) == Eigen::MatrixXd::Identity(3, 3));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::MatrixXd block = testing::random_spd(5, seed);
    SolverConfig config = SolverConfig::projected_gradient();
    config.tol_residual = 1e-10;
    const auto r = solve_constrained_mle(block, full(5), config);
    CHECK(testing::max_abs(one_hop_closed_form(block) - r.solution.to_dense()) <= 1e-8);
  }
  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(one_hop_closed_form(singular), Error);
}

TEST_CASE("solver input validation") {
  const Eigen::MatrixXd S = testing::random_spd(3, 1);
  PairSet asym = diagonal(3);
  asym.insert({0, 1});
  CHECK_THROWS_AS(solve_constrained_mle(S, asym), Error);
  PairSet no_diag{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(solve_constrained_mle(S, no_diag), Error);
  CHECK_THROWS_AS(solve_constrained_mle(testing::random_spd(4, 1), diagonal(3)), Error);

  Eigen::MatrixXd bad = S;
  bad(1, 1) = 0.0;
  try {
    solve_constrained_mle(bad, diagonal(3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotPositiveDefinite);
  }
}

TEST_CASE("ridge rescues a rank-deficient full-support problem") {
  const GgmModel m = testing::random_model(testing::random_graph(6, 0.5, 2), 3);
  const Eigen::MatrixXd S = sample_cov(m, 3, 1);  // rank 3 < 6
  try {
    solve_constrained_mle(S, full(6));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotPositiveDefinite);
  }
  SolverConfig config;
  config.ridge = 0.1;
  const auto r = solve_constrained_mle(S, full(6), config);
  CHECK(r.ridge_applied);
  const Eigen::MatrixXd loaded = S + 0.1 * Eigen::MatrixXd::Identity(6, 6);
  CHECK(testing::max_abs(r.solution.to_dense() - loaded.inverse()) < 1e-8);
}

TEST_CASE("sparse support tolerates fewer samples than nodes") {
  // A chain MLE exists as soon as every 2x2 edge block is positive definite.
  const GgmModel m = testing::random_model(testing::chain(8), 4);
  const Eigen::MatrixXd S = sample_cov(m, 4, 2);
  const auto r = solve_constrained_mle(S, tilde_edge_set(m.graph()));
  CHECK(r.final_residual <= 1e-7);
}

TEST_CASE("non-convergence is reported") {
  const GgmModel m = testing::random_model(testing::random_graph(10, 0.4, 5), 6);
  const Eigen::MatrixXd S = sample_cov(m, 100, 3);
  SolverConfig config;
  config.max_iter = 1;
  config.tol_residual = 1e-14;
  try {
    solve_constrained_mle(S, tilde_edge_set(m.graph()), config);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.code() == ErrorCode::kNonConvergence);
    CHECK(e.residual() > 1e-14);
  }
}
