// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ggmrelax/graph.hpp"
#include "ggmrelax/sparse_matrix.hpp"

namespace ggm {

/// Default eigenvalue floor used by the generators' diagonal loading.
inline constexpr double kDefaultPdFloor = 0.1;

/// Ground-truth Gaussian graphical model: a graph and a positive definite
/// precision matrix supported on the graph's augmented edge set. The
/// covariance is computed on first use and shared between copies.
class GgmModel {
 public:
  GgmModel(Graph graph, SparseSymmetricMatrix precision);

  const Graph& graph() const { return graph_; }
  const SparseSymmetricMatrix& precision() const { return precision_; }
  Index size() const { return graph_.size(); }
  const Eigen::MatrixXd& covariance() const;

 private:
  struct Cache;

  Graph graph_;
  SparseSymmetricMatrix precision_;
  std::shared_ptr<Cache> cache_;
};

struct SampleCovariance {
  Eigen::MatrixXd matrix;
  int sample_count = 0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Union-symmetrized K-nearest-neighbor graph; distance ties go to the lower
/// node index.
Graph knn_graph(const std::vector<Point2>& points, int K);

GgmModel knn_model(Index p, int K, double decay, std::uint64_t seed);

/// K-NN model over caller-supplied points (signs still drawn from `seed`).
GgmModel knn_model(const std::vector<Point2>& points, int K, double decay,
                   std::uint64_t seed);

GgmModel lattice_model(int rows, int cols, double mean, double variance,
                       std::uint64_t seed);

Graph lattice_graph(int rows, int cols);

GgmModel small_world_model(Index p, int K, double beta, double weight_low,
                           double weight_high, std::uint64_t seed);

Graph small_world_graph(Index p, int K, double beta, std::uint64_t seed);

/// Shifts the diagonal so that the smallest eigenvalue is at least `floor`.
SparseSymmetricMatrix ensure_pd(const SparseSymmetricMatrix& J, double floor);

/// Adds +-magnitude (random sign) to every pair outside the augmented edge
/// set, then reloads the diagonal. The returned model's graph is the support
/// of the perturbed precision (complete whenever magnitude > 0).
GgmModel perturb_nonedges(const GgmModel& model, double magnitude,
                          std::uint64_t seed, double floor = kDefaultPdFloor);

/// T x p matrix of zero-mean draws with covariance model.covariance().
Eigen::MatrixXd sample_gaussian(const GgmModel& model, int T,
                                std::uint64_t seed);

SampleCovariance sample_covariance(const Eigen::MatrixXd& samples);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace ggm
