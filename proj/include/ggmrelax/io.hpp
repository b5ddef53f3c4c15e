// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "ggmrelax/model.hpp"
#include "ggmrelax/sparse_matrix.hpp"

namespace ggm {

// Triplet text format: one "i j value" line per stored entry.
// Symmetric matrices are written once per canonical pair (i <= j) and
// mirrored on read.
void write_triplets(std::ostream& out, const SparseSymmetricMatrix& m);
void write_triplets(std::ostream& out, const SparseMatrix& m);
SparseSymmetricMatrix read_symmetric_triplets(std::istream& in, Index dim);

void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m);
/// Numeric CSV without header. Every row must have the same width.
Eigen::MatrixXd read_dense_csv(std::istream& in);

void save_model(const GgmModel& model, const std::string& graph_path,
                const std::string& precision_path);
GgmModel load_model(const std::string& graph_path, const std::string& precision_path);

/// Formats with %.12g; non-finite values become "nan"/"inf"/"-inf".
std::string format_number(double value);

}  // namespace ggm
