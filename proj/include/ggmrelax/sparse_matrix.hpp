// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>

#include <Eigen/Dense>

#include "ggmrelax/common.hpp"

namespace ggm {

/// Symmetric matrix with an explicit support. Values are stored once per
/// canonical pair (m <= n); reads off the support return exactly zero.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix() = default;
  explicit SparseSymmetricMatrix(Index dim) : dim_(dim) {}

  Index dim() const { return dim_; }
  double operator()(Index m, Index n) const;
  bool in_support(Index m, Index n) const;
  void set(Index m, Index n, double value);

  const std::map<Pair, double>& entries() const { return values_; }
  /// Support with both orientations of every off-diagonal pair.
  PairSet support() const;

  Eigen::MatrixXd to_dense() const;
  /// Copies dense entries on `support` (either orientation is accepted).
  static SparseSymmetricMatrix from_dense(const Eigen::MatrixXd& dense,
                                          const PairSet& support);

 private:
  void check(Index m, Index n) const;

  Index dim_ = 0;
  std::map<Pair, double> values_;
};

/// General sparse matrix keyed by ordered pair; used for estimates that may be
/// asymmetric before the averaging pass.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(Index dim) : dim_(dim) {}

  Index dim() const { return dim_; }
  double operator()(Index m, Index n) const;
  void set(Index m, Index n, double value);
  const std::map<Pair, double>& entries() const { return values_; }

  Eigen::MatrixXd to_dense() const;
  /// max |A(m,n) - A(n,m)| over stored pairs.
  double max_asymmetry() const;

  static SparseMatrix from_symmetric(const SparseSymmetricMatrix& s);

 private:
  Index dim_ = 0;
  std::map<Pair, double> values_;
};

}  // namespace ggm
