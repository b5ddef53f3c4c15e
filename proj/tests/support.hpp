// SPDX-License-Identifier: Apache-2.0
// Small helpers shared by the unit tests.

#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ggmrelax/graph.hpp"
#include "ggmrelax/model.hpp"
#include "ggmrelax/sparse_matrix.hpp"

namespace testing {

inline ggm::Graph chain(ggm::Index n) {
  std::vector<ggm::Pair> e;
  for (ggm::Index i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return ggm::Graph(n, e);
}

inline ggm::Graph cycle(ggm::Index n) {
  std::vector<ggm::Pair> e;
  for (ggm::Index i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return ggm::Graph(n, e);
}

inline ggm::Graph random_graph(ggm::Index n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::vector<ggm::Pair> e;
  for (ggm::Index i = 0; i < n; ++i)
    for (ggm::Index j = i + 1; j < n; ++j)
      if (keep(rng)) e.emplace_back(i, j);
  return ggm::Graph(n, e);
}

/// Random precision supported on the graph, made comfortably positive
/// definite by diagonal dominance.
inline ggm::GgmModel random_model(const ggm::Graph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.2, 0.9);
  std::bernoulli_distribution sign(0.5);
  ggm::SparseSymmetricMatrix J(g.size());
  std::vector<double> row(g.size(), 0.0);
  for (const auto& [i, j] : g.edges()) {
    const double v = sign(rng) ? w(rng) : -w(rng);
    J.set(i, j, v);
    row[i] += std::abs(v);
    row[j] += std::abs(v);
  }
  for (ggm::Index i = 0; i < g.size(); ++i) J.set(i, i, row[i] + 0.5 + w(rng));
  return ggm::GgmModel(g, J);
}

/// Random SPD matrix: A A^T / n + I.
inline Eigen::MatrixXd random_spd(ggm::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (ggm::Index i = 0; i < n; ++i)
    for (ggm::Index j = 0; j < n; ++j) A(i, j) = z(rng);
  return A * A.transpose() / static_cast<double>(n) + Eigen::MatrixXd::Identity(n, n);
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
