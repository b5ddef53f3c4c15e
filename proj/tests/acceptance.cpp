// SPDX-License-Identifier: Apache-2.0
// Acceptance suite. Prints one PASS/FAIL line per criterion; exits non-zero
// if any criterion fails. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ggmrelax/analysis.hpp"
#include "ggmrelax/estimators.hpp"
#include "ggmrelax/harness.hpp"
#include "ggmrelax/rng.hpp"
#include "ggmrelax/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ggm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Mean of f(row) over successful rows matching an estimator and T.
double mean_over(const std::vector<ResultRow>& rows, const std::string& estimator, int T,
                 const std::function<double(const ResultRow&)>& f, int* failed = nullptr) {
  double sum = 0.0;
  int n = 0, bad = 0;
  for (const auto& r : rows) {
    if (r.estimator != estimator || r.T != T) continue;
    if (!r.error.empty()) {
      ++bad;
      continue;
    }
    sum += f(r);
    ++n;
  }
  if (failed) *failed = bad;
  return n ? sum / n : std::nan("");
}

int hardware_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

ExperimentConfig knn_config(Index p, int K, int models, int reps, std::vector<int> T_grid,
                            std::vector<std::string> estimators, std::uint64_t seed) {
  ExperimentConfig c;
  c.family = Family::kKnn;
  c.p = p;
  c.K = K;
  c.n_models = models;
  c.n_reps_per_model = reps;
  c.T_grid = std::move(T_grid);
  c.estimators = std::move(estimators);
  c.master_seed = seed;
  c.workers = hardware_workers();
  validate(c);
  return c;
}

// 1. Both solvers reach the stationarity residual on K-NN problems.
Outcome solver_optimality() {
  double worst_residual = 0.0, worst_time = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GgmModel m = knn_model(50, 4, 0.5, seed);
    const SampleCovariance S = sample_covariance(sample_gaussian(m, 500, seed + 1000));
    const PairSet support = tilde_edge_set(m.graph());
    for (const auto& config :
         {SolverConfig::block_regression(), SolverConfig::projected_gradient()}) {
      const auto start = Clock::now();
      const SolveReport r = solve_constrained_mle(S.matrix, support, config);
      worst_time = std::max(worst_time, seconds_since(start));
      // Independent check of the residual from the returned solution.
      const Eigen::MatrixXd inv = r.solution.to_dense().inverse();
      for (const auto& [i, j] : support)
        worst_residual = std::max(worst_residual, std::abs(S.matrix(i, j) - inv(i, j)));
    }
  }
  return {worst_residual <= 1e-6 && worst_time < 5.0,
          "max residual " + fmt("%.3g", worst_residual) + ", slowest solve " +
              fmt("%.3g", worst_time) + " s"};
}

// 2. One-hop estimate equals row extraction from local inverses; averaging
// equals a direct edge-averaging pass bit for bit.
Outcome one_hop_identities() {
  double worst = 0.0;
  bool bitwise = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GgmModel m = knn_model(40, 4, 0.5, seed);
    const SampleCovariance S = sample_covariance(sample_gaussian(m, 300, seed));
    const Graph& g = m.graph();
    const EstimateReport loc = rmml_estimate(S, g, 1);
    const Eigen::MatrixXd L = loc.estimate.to_dense();
    for (Index i = 0; i < g.size(); ++i) {
      std::vector<Index> nodes{i};
      for (Index j : g.neighbors(i)) nodes.push_back(j);
      std::sort(nodes.begin(), nodes.end());
      const auto n = static_cast<Index>(nodes.size());
      Eigen::MatrixXd block(n, n);
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) block(a, b) = S.matrix(nodes[a], nodes[b]);
      const Eigen::MatrixXd inv = block.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
      const Index c = std::find(nodes.begin(), nodes.end(), i) - nodes.begin();
      for (Index a = 0; a < n; ++a)
        worst = std::max(worst, std::abs(L(i, nodes[a]) - inv(c, a)));
    }
    const Eigen::MatrixXd avg = symmetrize(loc, g).estimate.to_dense();
    for (Index i = 0; i < g.size(); ++i) {
      if (avg(i, i) != L(i, i)) bitwise = false;
      for (Index j : g.neighbors(i))
        if (avg(i, j) != (L(i, j) + L(j, i)) / 2.0) bitwise = false;
    }
  }
  return {worst <= 1e-10 && bitwise, "max row deviation " + fmt("%.3g", worst) +
                                         (bitwise ? ", averaging bitwise equal"
                                                  : ", averaging differs")};
}

// 3. Population covariance returns the true precision.
Outcome population_exactness() {
  SolverConfig tight = SolverConfig::block_regression();
  tight.tol_residual = 1e-11;
  tight.max_iter = 5000;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Index p = 20 + static_cast<Index>(3 * seed);
    const GgmModel m = seed % 2 ? knn_model(p, 4, 0.5, seed)
                                : small_world_model(p, 4, 0.3, 0.2, 0.6, seed);
    const SampleCovariance S{m.covariance(), 0};
    const Eigen::MatrixXd J = m.precision().to_dense();
    worst = std::max(worst, (gml_estimate(S, m.graph(), tight).estimate.to_dense() - J).norm());
    for (int k : {1, 2}) {
      const EstimateReport r = rmml_estimate(S, m.graph(), k, tight);
      worst = std::max(worst, (r.estimate.to_dense() - J).norm());
      worst = std::max(worst, (symmetrize(r, m.graph()).estimate.to_dense() - J).norm());
    }
  }
  return {worst <= 1e-6, "max Frobenius error " + fmt("%.3g", worst)};
}

// 4. Empirical scaled MSE against the asymptotic predictor.
Outcome asymptotic_agreement() {
  const auto start = Clock::now();
  const ExperimentConfig c =
      knn_config(20, 4, 1, 1000, {640, 2560}, {"gml", "rmml_k1_asym", "rmml_k2_asym"}, 2024);
  const GgmModel m = experiment_model(c, 0);
  const auto rows = run_experiment(c);
  const std::map<std::string, double> predicted{
      {"gml", asymptotic_mse(m, kGlobalHops)},
      {"rmml_k1_asym", asymptotic_mse(m, 1)},
      {"rmml_k2_asym", asymptotic_mse(m, 2)}};
  bool ok = true;
  std::string detail;
  for (int T : c.T_grid) {
    for (const auto& [name, pred] : predicted) {
      int failed = 0;
      const double emp =
          T * mean_over(rows, name, T,
                        [](const ResultRow& r) { return r.frobenius_error * r.frobenius_error; },
                        &failed);
      const double rel = relative(emp, pred);
      ok = ok && failed == 0 && rel <= 0.15;
      detail += name + "@" + std::to_string(T) + " " + fmt("%.3g", emp) + "/" +
                fmt("%.3g", pred) + "; ";
    }
  }
  const double a1 = predicted.at("rmml_k1_asym"), a2 = predicted.at("rmml_k2_asym"),
               ag = predicted.at("gml");
  const bool between = a1 > a2 && a2 > ag;
  const double elapsed = seconds_since(start);
  ok = ok && between && elapsed < 600.0;
  return {ok, detail + (between ? "2-hop strictly between" : "2-hop not strictly between") +
                  ", " + fmt("%.1f", elapsed) + " s"};
}

// 5. Predicted MSE is non-increasing in k and ends at the centralized value.
Outcome monotonicity() {
  int violations = 0, checked = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::vector<GgmModel> models{
        knn_model(10 + static_cast<Index>(seed), 4, 0.5, seed),
        lattice_model(4 + static_cast<int>(seed % 2), 5 + static_cast<int>(seed % 2), 0.5, 0.2,
                      seed),
        small_world_model(15 + static_cast<Index>(seed % 10), 4, 0.3, 0.2, 0.6, seed)};
    for (const auto& m : models) {
      ++checked;
      const MonotonicityReport r = monotonicity_report(m, 3);
      const double g = asymptotic_mse(m, kGlobalHops);
      if (!r.non_increasing || relative(r.predictions.back(), g) > 1e-9) ++violations;
    }
  }
  return {violations == 0,
          std::to_string(checked - violations) + "/" + std::to_string(checked) + " models"};
}

// 6. Desk-scale sweep of normalized MSE on K-NN and lattice families.
Outcome desk_scale_sweep() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (int family = 0; family < 2; ++family) {
    ExperimentConfig c = knn_config(100, 4, 10, 5, {50, 100, 200, 400, 800},
                                    {"ave", "rmml_k2", "gml"}, 77 + family);
    if (family == 1) {
      c.family = Family::kLattice;
      c.rows = c.cols = 10;
      validate(c);
    }
    const auto rows = run_experiment(c);
    const auto nmse = [](const ResultRow& r) { return r.normalized_mse; };
    detail += family ? "lattice:" : "knn:";
    for (int T : c.T_grid) {
      int fa = 0, f2 = 0, fg = 0;
      const double ave = mean_over(rows, "ave", T, nmse, &fa);
      const double k2 = mean_over(rows, "rmml_k2", T, nmse, &f2);
      const double g = mean_over(rows, "gml", T, nmse, &fg);
      bool cell = fa + f2 + fg == 0 && ave >= k2 && k2 >= g;
      if (T >= 4 * 100) cell = cell && relative(k2, g) <= 0.10;
      ok = ok && cell;
      detail += " T" + std::to_string(T) + (cell ? " ok" : " FAIL") + "(" + fmt("%.3g", ave) +
                "/" + fmt("%.3g", k2) + "/" + fmt("%.3g", g) + ")";
    }
    detail += "; ";
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 1200.0;
  return {ok, detail + fmt("%.1f", elapsed) + " s"};
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y,
                    double* r2 = nullptr) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (r2) *r2 = sxy * sxy / (sxx * syy);
  return sxy / sxx;
}

// 7. Error rate in T.
Outcome rate_in_T() {
  std::vector<int> grid;
  for (int e = 7; e <= 13; ++e) grid.push_back(1 << e);
  const ExperimentConfig c = knn_config(50, 4, 1, 200, grid, {"rmml_k2", "gml"}, 7);
  const auto rows = run_experiment(c);
  bool ok = true;
  std::string detail;
  for (const std::string name : {"rmml_k2", "gml"}) {
    std::vector<double> x, y;
    int failed_total = 0;
    for (int T : grid) {
      int failed = 0;
      x.push_back(std::log(static_cast<double>(T)));
      y.push_back(std::log(
          mean_over(rows, name, T, [](const ResultRow& r) { return r.frobenius_error; }, &failed)));
      failed_total += failed;
    }
    const double slope = fitted_slope(x, y);
    ok = ok && failed_total == 0 && std::abs(slope + 0.5) <= 0.1;
    detail += name + " slope " + fmt("%.4f", slope) + "; ";
  }
  return {ok, detail};
}

// 8. Bias under non-edge perturbation at large T.
Outcome robustness() {
  ExperimentConfig c = knn_config(50, 4, 5, 10, {2500}, {"rmml_k2", "gml"}, 8);
  c.perturbation = 0.1;
  validate(c);
  const auto rows = run_experiment(c);
  int f2 = 0, fg = 0;
  const auto nmse = [](const ResultRow& r) { return r.normalized_mse; };
  const double k2 = mean_over(rows, "rmml_k2", 2500, nmse, &f2);
  const double g = mean_over(rows, "gml", 2500, nmse, &fg);
  const double ratio = k2 / g;
  return {f2 + fg == 0 && ratio >= 0.5 && ratio <= 2.0,
          "nMSE 2-hop " + fmt("%.4g", k2) + ", GML " + fmt("%.4g", g) + ", ratio " +
              fmt("%.4f", ratio)};
}

// 9. Fisher, incoherence and solver cross-checks against independent oracles.
Outcome oracle_suites() {
  double fd_worst = 0.0, mc_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    // A random 4-node neighborhood: the marginal covariance of four nodes of a
    // K-NN model, relaxed over the induced edges plus the diagonal.
    const GgmModel m = knn_model(20, 4, 0.5, seed);
    Rng rng = substream(seed, Stream::kOracle);
    std::vector<Index> order(20);
    for (Index i = 0; i < 20; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Index> nodes(order.begin(), order.begin() + 4);
    std::sort(nodes.begin(), nodes.end());
    Eigen::MatrixXd block(4, 4);
    PairSet R;
    for (Index a = 0; a < 4; ++a) {
      for (Index b = 0; b < 4; ++b) {
        block(a, b) = m.covariance()(nodes[a], nodes[b]);
        const auto& nb = m.graph().neighbors(nodes[a]);
        if (a == b || std::find(nb.begin(), nb.end(), nodes[b]) != nb.end() || seed % 2 == 0)
          R.insert({a, b});
      }
    }
    const FisherMatrix F = fisher_matrix(block, R, FisherConvention::kHessian);
    fd_worst = std::max(fd_worst, oracles::relative_error(F.matrix, oracles::fd_fisher(block, F.params)));

    // Monte Carlo: Frobenius deviation of the batch mean measured in units of
    // its standard error (root of the summed per-entry variances).
    const int batches = 30;
    std::vector<Eigen::MatrixXd> est;
    for (int b = 0; b < batches; ++b)
      est.push_back(fisher_mc_oracle(block, R, 20000, seed * 1000 + b).matrix);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(F.matrix.rows(), F.matrix.cols());
    for (const auto& e : est) mean += e / batches;
    double var_sum = 0.0;
    for (const auto& e : est) var_sum += (e - mean).squaredNorm() / (batches - 1);
    mc_worst = std::max(mc_worst, (mean - F.matrix).norm() / std::sqrt(var_sum / batches));
  }

  double inc_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GgmModel m = testing::random_model(testing::random_graph(5, 0.4, seed), seed + 7);
    inc_worst = std::max(inc_worst, std::abs(incoherence(m.covariance(), m.graph()) -
                                             oracles::dense_incoherence(m.covariance(), m.graph())));
  }

  double solver_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GgmModel m = testing::random_model(testing::random_graph(10, 0.3, seed), seed + 100);
    const SampleCovariance S = sample_covariance(sample_gaussian(m, 200, seed));
    const PairSet support = tilde_edge_set(m.graph());
    const auto a = solve_constrained_mle(S.matrix, support, SolverConfig::block_regression());
    const auto b = solve_constrained_mle(S.matrix, support, SolverConfig::projected_gradient());
    solver_worst = std::max(solver_worst,
                            testing::max_abs(a.solution.to_dense() - b.solution.to_dense()));
  }
  const bool ok = fd_worst <= 1e-4 && mc_worst <= 3.0 && inc_worst <= 1e-10 && solver_worst <= 1e-5;
  return {ok, "FD rel " + fmt("%.3g", fd_worst) + ", MC " + fmt("%.2f", mc_worst) +
                  " SE, incoherence " + fmt("%.3g", inc_worst) + ", solvers " +
                  fmt("%.3g", solver_worst)};
}

// 10. Worker-count determinism and runtime scaling.
Outcome parallel_scaling() {
  ExperimentConfig c =
      knn_config(30, 4, 2, 3, {100, 400}, {"gml", "ave", "loc", "rmml_k2"}, 10);
  std::string csv[2];
  int w[2] = {1, 8};
  for (int i = 0; i < 2; ++i) {
    c.workers = c.inner_workers = w[i];
    std::ostringstream out;
    write_results_csv(out, run_experiment(c), true);
    csv[i] = out.str();
  }
  const bool identical = csv[0] == csv[1];

  const std::vector<int> sides{10, 20, 30};
  const auto serial = runtime_scaling(sides, 2, 1000, 1, 10, false);
  const auto parallel = runtime_scaling(sides, 2, 1000, 4, 10, false);
  std::vector<double> x, y;
  for (const auto& s : serial) {
    x.push_back(static_cast<double>(s.p));
    y.push_back(s.rmml_seconds);
  }
  double r2 = 0.0;
  fitted_slope(x, y, &r2);
  const double speedup = serial.back().rmml_seconds / parallel.back().rmml_seconds;
  const bool ok = identical && r2 >= 0.9 && speedup >= 2.0;
  return {ok, std::string(identical ? "CSV identical" : "CSV differs") + ", R^2 " +
                  fmt("%.4f", r2) + ", speedup at 4 workers " + fmt("%.2f", speedup) + " (" +
                  std::to_string(std::thread::hardware_concurrency()) + " hardware threads)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, solver_optimality}, {2, one_hop_identities}, {3, population_exactness},
      {4, asymptotic_agreement}, {5, monotonicity}, {6, desk_scale_sweep},
      {7, rate_in_T}, {8, robustness}, {9, oracle_suites}, {10, parallel_scaling}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
