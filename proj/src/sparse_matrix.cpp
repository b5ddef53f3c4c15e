// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/sparse_matrix.hpp"

#include <cmath>
#include <string>

namespace ggm {

void SparseSymmetricMatrix::check(Index m, Index n) const {
  if (m < 0 || n < 0 || m >= dim_ || n >= dim_) {
    throw Error(ErrorCode::kInvalidArgument,
                "index (" + std::to_string(m) + "," + std::to_string(n) +
                    ") out of range for dimension " + std::to_string(dim_));
  }
}

double SparseSymmetricMatrix::operator()(Index m, Index n) const {
  check(m, n);
  auto it = values_.find(canonical(m, n));
  return it == values_.end() ? 0.0 : it->second;
}

bool SparseSymmetricMatrix::in_support(Index m, Index n) const {
  check(m, n);
  return values_.count(canonical(m, n)) > 0;
}

void SparseSymmetricMatrix::set(Index m, Index n, double value) {
  check(m, n);
  values_[canonical(m, n)] = value;
}

PairSet SparseSymmetricMatrix::support() const {
  PairSet out;
  for (const auto& [pair, value] : values_) {
    out.emplace(pair.first, pair.second);
    out.emplace(pair.second, pair.first);
  }
  return out;
}

Eigen::MatrixXd SparseSymmetricMatrix::to_dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& [pair, value] : values_) {
    out(pair.first, pair.second) = value;
    out(pair.second, pair.first) = value;
  }
  return out;
}

SparseSymmetricMatrix SparseSymmetricMatrix::from_dense(
    const Eigen::MatrixXd& dense, const PairSet& support) {
  SparseSymmetricMatrix out(static_cast<Index>(dense.rows()));
  for (const auto& [m, n] : support) {
    if (m <= n) out.set(m, n, dense(m, n));
  }
  return out;
}

double SparseMatrix::operator()(Index m, Index n) const {
  auto it = values_.find({m, n});
  return it == values_.end() ? 0.0 : it->second;
}

void SparseMatrix::set(Index m, Index n, double value) {
  if (m < 0 || n < 0 || m >= dim_ || n >= dim_) {
    throw Error(ErrorCode::kInvalidArgument, "sparse matrix index out of range");
  }
  values_[{m, n}] = value;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& [pair, value] : values_) out(pair.first, pair.second) = value;
  return out;
}

double SparseMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (const auto& [pair, value] : values_) {
    if (pair.first >= pair.second) continue;
    worst = std::max(worst, std::abs(value - (*this)(pair.second, pair.first)));
  }
  for (const auto& [pair, value] : values_) {
    // Entries whose mirror is absent count against symmetry too.
    if (pair.first > pair.second && !values_.count({pair.second, pair.first}))
      worst = std::max(worst, std::abs(value));
  }
  return worst;
}

SparseMatrix SparseMatrix::from_symmetric(const SparseSymmetricMatrix& s) {
  SparseMatrix out(s.dim());
  for (const auto& [pair, value] : s.entries()) {
    out.set(pair.first, pair.second, value);
    out.set(pair.second, pair.first, value);
  }
  return out;
}

}  // namespace ggm
