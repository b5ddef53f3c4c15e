// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/model.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ggmrelax/rng.hpp"

namespace ggm {

struct GgmModel::Cache {
  std::once_flag once;
  Eigen::MatrixXd covariance;
};

GgmModel::GgmModel(Graph graph, SparseSymmetricMatrix precision)
    : graph_(std::move(graph)),
      precision_(std::move(precision)),
      cache_(std::make_shared<Cache>()) {
  if (precision_.dim() != graph_.size()) {
    throw Error(ErrorCode::kDimension, "precision dimension " +
                                           std::to_string(precision_.dim()) +
                                           " does not match graph size " +
                                           std::to_string(graph_.size()));
  }
  for (const auto& [pair, value] : precision_.entries()) {
    if (pair.first != pair.second && !graph_.has_edge(pair.first, pair.second) &&
        value != 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "precision entry (" + std::to_string(pair.first) + "," +
                      std::to_string(pair.second) + ") is not a graph edge");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(precision_.to_dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "precision matrix is not positive definite");
  }
}

const Eigen::MatrixXd& GgmModel::covariance() const {
  std::call_once(cache_->once, [this] {
    const Eigen::MatrixXd J = precision_.to_dense();
    Eigen::LLT<Eigen::MatrixXd> llt(J);
    Eigen::MatrixXd sigma =
        llt.solve(Eigen::MatrixXd::Identity(J.rows(), J.cols()));
    cache_->covariance = 0.5 * (sigma + sigma.transpose());
  });
  return cache_->covariance;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric,
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

SparseSymmetricMatrix ensure_pd(const SparseSymmetricMatrix& J, double floor) {
  if (!(floor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "PD floor must be positive");
  }
  const double lambda_min = min_eigenvalue(J.to_dense());
  if (lambda_min >= floor) return J;
  SparseSymmetricMatrix out = J;
  const double shift = floor - lambda_min;
  for (Index i = 0; i < J.dim(); ++i) out.set(i, i, J(i, i) + shift);
  return out;
}

namespace {

GgmModel finish_model(Graph graph, SparseSymmetricMatrix J) {
  for (Index i = 0; i < graph.size(); ++i)
    if (!J.in_support(i, i)) J.set(i, i, 0.0);
  return GgmModel(std::move(graph), ensure_pd(J, kDefaultPdFloor));
}

}  // namespace

Graph knn_graph(const std::vector<Point2>& points, int K) {
  const auto p = static_cast<Index>(points.size());
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "K-NN graph needs p >= 2");
  if (K < 1 || K >= p) {
    throw Error(ErrorCode::kInvalidArgument,
                "K-NN graph needs 1 <= K < p (K=" + std::to_string(K) + ")");
  }
  std::vector<Pair> edges;
  std::vector<Index> order(p);
  for (Index i = 0; i < p; ++i) {
    std::iota(order.begin(), order.end(), 0);
    auto dist2 = [&](Index j) {
      const double dx = points[i].x - points[j].x;
      const double dy = points[i].y - points[j].y;
      return dx * dx + dy * dy;
    };
    order.erase(order.begin() + i);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double da = dist2(a), db = dist2(b);
      return da < db || (da == db && a < b);
    });
    for (int k = 0; k < K; ++k) edges.emplace_back(i, order[k]);
    order.resize(p);
  }
  return Graph(p, std::move(edges));
}

GgmModel knn_model(const std::vector<Point2>& points, int K, double decay,
                   std::uint64_t seed) {
  if (!(decay > 0.0)) throw Error(ErrorCode::kInvalidArgument, "decay must be > 0");
  Graph graph = knn_graph(points, K);
  auto rng = substream(seed, Stream::kSigns);
  std::bernoulli_distribution coin(0.5);
  SparseSymmetricMatrix J(graph.size());
  for (const auto& [i, j] : graph.edges()) {
    const double d = std::hypot(points[i].x - points[j].x, points[i].y - points[j].y);
    const double sign = coin(rng) ? 1.0 : -1.0;
    J.set(i, j, sign * std::exp(-decay * d));
  }
  return finish_model(std::move(graph), std::move(J));
}

GgmModel knn_model(Index p, int K, double decay, std::uint64_t seed) {
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "K-NN model needs p >= 2");
  if (K >= p) throw Error(ErrorCode::kInvalidArgument, "K-NN model needs K < p");
  auto rng = substream(seed, Stream::kPositions);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point2> points(p);
  for (auto& pt : points) {
    pt.x = unit(rng);
    pt.y = unit(rng);
  }
  return knn_model(points, K, decay, seed);
}

Graph lattice_graph(int rows, int cols) {
  if (rows < 2 || cols < 2) {
    throw Error(ErrorCode::kInvalidArgument, "lattice needs rows, cols >= 2");
  }
  std::vector<Pair> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Index v = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(v, v + 1);
      if (r + 1 < rows) edges.emplace_back(v, v + cols);
    }
  }
  return Graph(rows * cols, std::move(edges));
}

GgmModel lattice_model(int rows, int cols, double mean, double variance,
                       std::uint64_t seed) {
  if (variance < 0.0) throw Error(ErrorCode::kInvalidArgument, "variance must be >= 0");
  Graph graph = lattice_graph(rows, cols);
  auto rng = substream(seed, Stream::kWeights);
  std::normal_distribution<double> normal(mean, std::sqrt(variance));
  SparseSymmetricMatrix J(graph.size());
  for (const auto& [i, j] : graph.edges()) J.set(i, j, std::min(normal(rng), 1.0));
  return finish_model(std::move(graph), std::move(J));
}

Graph small_world_graph(Index p, int K, double beta, std::uint64_t seed) {
  if (K < 2 || K % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "small-world K must be even and >= 2");
  }
  if (K >= p) throw Error(ErrorCode::kInvalidArgument, "small-world K must be < p");
  if (beta < 0.0 || beta > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "rewiring probability must be in [0,1]");
  }
  std::vector<std::set<Index>> adj(p);
  for (Index i = 0; i < p; ++i) {
    for (int j = 1; j <= K / 2; ++j) {
      const Index t = (i + j) % p;
      adj[i].insert(t);
      adj[t].insert(i);
    }
  }
  auto rng = substream(seed, Stream::kRewiring);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Index> pick(0, p - 1);
  // Watts-Strogatz: one lap per ring offset, moving the far endpoint.
  for (int j = 1; j <= K / 2; ++j) {
    for (Index i = 0; i < p; ++i) {
      const Index t = (i + j) % p;
      if (!adj[i].count(t)) continue;  // already rewired away
      if (unit(rng) >= beta) continue;
      if (static_cast<Index>(adj[i].size()) >= p - 1) continue;
      Index target;
      do {
        target = pick(rng);
      } while (target == i || adj[i].count(target));
      adj[i].erase(t);
      adj[t].erase(i);
      adj[i].insert(target);
      adj[target].insert(i);
    }
  }
  std::vector<Pair> edges;
  for (Index i = 0; i < p; ++i)
    for (Index t : adj[i])
      if (i < t) edges.emplace_back(i, t);
  return Graph(p, std::move(edges));
}

GgmModel small_world_model(Index p, int K, double beta, double weight_low,
                           double weight_high, std::uint64_t seed) {
  if (!(weight_low <= weight_high)) {
    throw Error(ErrorCode::kInvalidArgument, "weight interval is empty");
  }
  Graph graph = small_world_graph(p, K, beta, seed);
  auto rng = substream(seed, Stream::kWeights);
  std::uniform_real_distribution<double> weight(weight_low, weight_high);
  SparseSymmetricMatrix J(graph.size());
  for (const auto& [i, j] : graph.edges()) J.set(i, j, weight(rng));
  return finish_model(std::move(graph), std::move(J));
}

GgmModel perturb_nonedges(const GgmModel& model, double magnitude,
                          std::uint64_t seed, double floor) {
  if (magnitude < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation magnitude must be >= 0");
  }
  const Index p = model.size();
  if (magnitude == 0.0) {
    return GgmModel(model.graph(), ensure_pd(model.precision(), floor));
  }
  auto rng = substream(seed, Stream::kPerturbation);
  std::bernoulli_distribution coin(0.5);
  SparseSymmetricMatrix J = model.precision();
  for (Index m = 0; m < p; ++m) {
    for (Index n = m + 1; n < p; ++n) {
      if (model.graph().has_edge(m, n)) continue;
      J.set(m, n, coin(rng) ? magnitude : -magnitude);
    }
  }
  return GgmModel(Graph::complete(p), ensure_pd(J, floor));
}

Eigen::MatrixXd sample_gaussian(const GgmModel& model, int T, std::uint64_t seed) {
  if (T < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  const Eigen::MatrixXd& sigma = model.covariance();
  const Index p = model.size();
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    llt.compute(sigma + 1e-10 * Eigen::MatrixXd::Identity(p, p));
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "covariance not positive definite; cannot sample");
    }
  }
  auto rng = substream(seed, Stream::kSamples);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(T, p);
  for (int t = 0; t < T; ++t)
    for (Index j = 0; j < p; ++j) z(t, j) = normal(rng);
  return z * llt.matrixL().transpose();
}

SampleCovariance sample_covariance(const Eigen::MatrixXd& samples) {
  if (samples.rows() < 1 || samples.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "empty sample set");
  }
  SampleCovariance out;
  out.sample_count = static_cast<int>(samples.rows());
  Eigen::MatrixXd s = (samples.transpose() * samples) / static_cast<double>(samples.rows());
  out.matrix = 0.5 * (s + s.transpose());
  return out;
}

}  // namespace ggm
