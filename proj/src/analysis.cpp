// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ggmrelax/rng.hpp"

namespace ggm {

std::vector<Pair> canonical_params(const PairSet& pairs) {
  std::vector<Pair> out;
  for (const auto& pr : pairs)
    if (pr.first <= pr.second) out.push_back(pr);
  return out;  // std::set iteration is already lexicographic
}

namespace {

double hessian_entry(const Eigen::MatrixXd& S, const Pair& a, const Pair& b) {
  const auto [m, n] = a;
  const auto [l, k] = b;
  const bool a_diag = m == n;
  const bool b_diag = l == k;
  if (a_diag && b_diag) return 0.5 * S(m, l) * S(m, l);
  if (a_diag) return S(m, l) * S(m, k);
  if (b_diag) return S(l, m) * S(l, n);
  return S(m, l) * S(n, k) + S(m, k) * S(n, l);
}

double printed_entry(const Eigen::MatrixXd& S, const Pair& a, const Pair& b) {
  const auto [m, n] = a;
  const auto [l, k] = b;
  if (m == n && l == k) return 2.0 * S(m, l) * S(m, l);
  if ((m == n) != (l == k)) return 2.0 * S(m, k) * S(l, n);
  return S(m, k) * S(n, l);
}

void check_block(const Eigen::MatrixXd& sigma_block, const PairSet& relaxed) {
  const auto n = sigma_block.rows();
  if (n == 0 || sigma_block.cols() != n) {
    throw Error(ErrorCode::kDimension, "covariance block must be square and non-empty");
  }
  for (Index i = 0; i < n; ++i) {
    if (!relaxed.count({i, i})) {
      throw Error(ErrorCode::kInvalidArgument, "relaxed edge set must contain the diagonal");
    }
  }
  for (const auto& [m, k] : relaxed) {
    if (m < 0 || k < 0 || m >= n || k >= n || !relaxed.count({k, m})) {
      throw Error(ErrorCode::kInvalidArgument,
                  "relaxed edge set must be symmetric and within the block");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_block);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingular, "covariance block is singular or indefinite");
  }
}

Eigen::VectorXd inverse_diagonal(const Eigen::MatrixXd& F) {
  Eigen::LLT<Eigen::MatrixXd> llt(F);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingular, "degenerate model: Fisher matrix is singular");
  }
  return llt.solve(Eigen::MatrixXd::Identity(F.rows(), F.cols())).diagonal();
}

}  // namespace

FisherMatrix fisher_matrix(const Eigen::MatrixXd& sigma_block,
                           const PairSet& relaxed_edges, FisherConvention convention) {
  check_block(sigma_block, relaxed_edges);
  FisherMatrix out;
  out.convention = convention;
  out.params = canonical_params(relaxed_edges);
  const auto d = static_cast<Index>(out.params.size());
  out.matrix.resize(d, d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = a; b < d; ++b) {
      const double v = convention == FisherConvention::kHessian
                           ? hessian_entry(sigma_block, out.params[a], out.params[b])
                           : printed_entry(sigma_block, out.params[a], out.params[b]);
      out.matrix(a, b) = v;
      out.matrix(b, a) = v;
    }
  }
  return out;
}

FisherMatrix fisher_mc_oracle(const Eigen::MatrixXd& sigma_block,
                              const PairSet& relaxed_edges, int n_samples,
                              std::uint64_t seed) {
  check_block(sigma_block, relaxed_edges);
  if (n_samples < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 samples");
  FisherMatrix out;
  out.convention = FisherConvention::kHessian;
  out.params = canonical_params(relaxed_edges);
  const auto d = static_cast<Index>(out.params.size());
  const auto n = static_cast<Index>(sigma_block.rows());

  Eigen::LLT<Eigen::MatrixXd> llt(sigma_block);
  const Eigen::MatrixXd L = llt.matrixL();
  auto rng = substream(seed, Stream::kOracle);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::VectorXd z(n), x(n), score(d), mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  // Welford-style accumulation keeps the estimate stable for large n.
  for (int s = 0; s < n_samples; ++s) {
    for (Index i = 0; i < n; ++i) z(i) = normal(rng);
    x = L * z;
    for (Index a = 0; a < d; ++a) {
      const auto [m, k] = out.params[a];
      score(a) = m == k ? 0.5 * (sigma_block(m, m) - x(m) * x(m))
                        : sigma_block(m, k) - x(m) * x(k);
    }
    const Eigen::VectorXd delta = score - mean;
    mean += delta / static_cast<double>(s + 1);
    scatter.noalias() += delta * (score - mean).transpose();
  }
  out.matrix = scatter / static_cast<double>(n_samples - 1);
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

double asymptotic_mse(const Eigen::MatrixXd& sigma, const Graph& graph, int hops,
                      FisherConvention convention) {
  const Index p = graph.size();
  if (sigma.rows() != p || sigma.cols() != p) {
    throw Error(ErrorCode::kDimension, "covariance does not match graph size");
  }
  if (hops < 0) throw Error(ErrorCode::kInvalidArgument, "hop count must be >= 0");

  if (hops == kGlobalHops) {
    const FisherMatrix F = fisher_matrix(sigma, tilde_edge_set(graph), convention);
    const Eigen::VectorXd var = inverse_diagonal(F.matrix);
    double total = 0.0;
    // Every off-diagonal parameter fills two entries of the matrix.
    for (std::size_t a = 0; a < F.params.size(); ++a)
      total += (F.params[a].first == F.params[a].second ? 1.0 : 2.0) * var(a);
    return total;
  }

  double total = 0.0;
  for (Index i = 0; i < p; ++i) {
    const NeighborhoodDecomposition hood = decompose_neighborhood(graph, i, hops);
    const auto n = static_cast<Index>(hood.nodes.size());
    Eigen::MatrixXd block(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) block(a, b) = sigma(hood.nodes[a], hood.nodes[b]);
    const FisherMatrix F = fisher_matrix(block, hood.estimation_support(), convention);
    const Eigen::VectorXd var = inverse_diagonal(F.matrix);
    for (const auto& [row, col] : hood.row_params) {
      const Pair key = canonical(hood.local_of(row), hood.local_of(col));
      const auto it = std::lower_bound(F.params.begin(), F.params.end(), key);
      total += var(it - F.params.begin());
    }
  }
  return total;
}

double asymptotic_mse(const GgmModel& model, int hops, FisherConvention convention) {
  return asymptotic_mse(model.covariance(), model.graph(), hops, convention);
}

MonotonicityReport monotonicity_report(const GgmModel& model, int k_max) {
  if (k_max < 2) throw Error(ErrorCode::kInvalidArgument, "k_max must be >= 2");
  MonotonicityReport report;
  for (int k = 1; k <= k_max; ++k) report.predictions.push_back(asymptotic_mse(model, k));
  report.predictions.push_back(asymptotic_mse(model, kGlobalHops));
  for (std::size_t i = 1; i < report.predictions.size(); ++i) {
    const double prev = report.predictions[i - 1];
    if (report.predictions[i] > prev + 1e-9 * std::max(1.0, std::abs(prev)))
      report.non_increasing = false;
  }
  return report;
}

std::vector<double> check_monotonicity(const GgmModel& model, int k_max) {
  MonotonicityReport report = monotonicity_report(model, k_max);
  if (!report.non_increasing) {
    std::string seq;
    for (double v : report.predictions) seq += " " + std::to_string(v);
    throw Error(ErrorCode::kAssertion,
                "asymptotic MSE predictions are not non-increasing:" + seq);
  }
  return std::move(report.predictions);
}

double normalized_mse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw Error(ErrorCode::kDimension, "estimate and truth differ in shape");
  }
  const double denom = truth.squaredNorm();
  if (denom == 0.0) throw Error(ErrorCode::kInvalidArgument, "truth matrix is zero");
  return (estimate - truth).squaredNorm() / denom;
}

BoundInputs bound_inputs(const GgmModel& model, int hops, double C) {
  if (hops < 1) throw Error(ErrorCode::kInvalidArgument, "hop count must be >= 1");
  BoundInputs in;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.precision().to_dense(),
                                                     Eigen::EigenvaluesOnly);
  in.kappa_bar = eig.eigenvalues().maxCoeff();
  in.sigma_bar = model.covariance().diagonal().maxCoeff();
  for (Index i = 0; i < model.size(); ++i) {
    const auto size = static_cast<long>(
        decompose_neighborhood(model.graph(), i, hops).estimation_support().size());
    in.R_bar = std::max(in.R_bar, size);
    in.r += size;
  }
  in.C = C;
  return in;
}

HdBound hd_error_bound(const BoundInputs& in, Index p, long T) {
  if (T < 1 || p < 2) throw Error(ErrorCode::kInvalidArgument, "need T >= 1 and p >= 2");
  if (!(in.kappa_bar > 0.0) || !(in.sigma_bar > 0.0) || in.R_bar < 1 || in.r < in.R_bar ||
      in.C < 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "bound inputs need kappa_bar, sigma_bar > 0, r >= R_bar >= 1, C >= 1");
  }
  const double log_p = std::log(static_cast<double>(p));
  HdBound out;
  out.bound = 720.0 * in.C * in.kappa_bar * in.kappa_bar * in.sigma_bar *
              std::sqrt(static_cast<double>(in.r) * log_p / static_cast<double>(T));
  const double m = std::min(1.0 / (9.0 * in.kappa_bar * std::sqrt(static_cast<double>(in.R_bar))),
                            40.0 * in.sigma_bar);
  const double c1 = 6400.0 * in.sigma_bar * in.sigma_bar / (m * m);
  out.min_T = in.C * in.C * c1 * log_p;
  out.probability =
      1.0 - 4.0 / std::pow(static_cast<double>(p), 2.0 * (in.C * in.C - 1.0));
  out.sample_condition_met = static_cast<double>(T) >= out.min_T;
  out.vacuous = out.probability <= 0.0;
  return out;
}

double incoherence(const Eigen::MatrixXd& sigma, const Graph& graph) {
  const Index p = graph.size();
  if (sigma.rows() != p || sigma.cols() != p) {
    throw Error(ErrorCode::kDimension, "covariance does not match graph size");
  }
  if (p > kIncoherenceMaxDim) {
    throw Error(ErrorCode::kDimension, "incoherence is limited to p <= " +
                                           std::to_string(kIncoherenceMaxDim));
  }
  const PairSet tilde = tilde_edge_set(graph);
  std::vector<Pair> on(tilde.begin(), tilde.end());
  std::vector<Pair> off;
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j)
      if (!tilde.count({i, j})) off.emplace_back(i, j);
  if (off.empty()) return 0.0;

  const auto e = static_cast<Index>(on.size());
  auto gamma = [&](const Pair& r, const Pair& c) {
    return sigma(r.first, c.first) * sigma(r.second, c.second);
  };
  Eigen::MatrixXd A(e, e);
  for (Index a = 0; a < e; ++a)
    for (Index b = 0; b < e; ++b) A(a, b) = gamma(on[a], on[b]);
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingular, "edge block of sigma (x) sigma is singular");
  }

  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(e);
  constexpr Index kChunk = 512;
  const auto total = static_cast<Index>(off.size());
  for (Index start = 0; start < total; start += kChunk) {
    const Index width = std::min(kChunk, total - start);
    Eigen::MatrixXd B(e, width);
    for (Index a = 0; a < e; ++a)
      for (Index c = 0; c < width; ++c) B(a, c) = gamma(on[a], off[start + c]);
    row_sums += llt.solve(B).cwiseAbs().rowwise().sum();
  }
  return row_sums.maxCoeff();
}

}  // namespace ggm
