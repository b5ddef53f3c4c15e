// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ggm {

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_triplets(std::ostream& out, const SparseSymmetricMatrix& m) {
  for (const auto& [pair, value] : m.entries())
    out << pair.first << ' ' << pair.second << ' ' << exact(value) << '\n';
}

void write_triplets(std::ostream& out, const SparseMatrix& m) {
  for (const auto& [pair, value] : m.entries())
    out << pair.first << ' ' << pair.second << ' ' << exact(value) << '\n';
}

SparseSymmetricMatrix read_symmetric_triplets(std::istream& in, Index dim) {
  SparseSymmetricMatrix out(dim);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) {
      throw Error(ErrorCode::kIo, "triplets: malformed line " + std::to_string(line_no));
    }
    if (i < 0 || j < 0 || i >= dim || j >= dim) {
      throw Error(ErrorCode::kIo, "triplets: index out of range on line " +
                                      std::to_string(line_no));
    }
    if (out.in_support(i, j) && out(i, j) != v) {
      throw Error(ErrorCode::kIo, "triplets: conflicting values for (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
    }
    out.set(i, j, v);
  }
  return out;
}

void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << exact(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_dense_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kIo, "csv: non-numeric cell '" + cell + "' on row " +
                                        std::to_string(rows.size() + 1));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kIo, "csv: ragged row " + std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kIo, "csv: no data rows");
  Eigen::MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) out(r, c) = rows[r][c];
  return out;
}

void save_model(const GgmModel& model, const std::string& graph_path,
                const std::string& precision_path) {
  auto g = open_out(graph_path);
  write_edge_list(g, model.graph());
  auto t = open_out(precision_path);
  write_triplets(t, model.precision());
  if (!g || !t) throw Error(ErrorCode::kIo, "failed writing model files");
}

GgmModel load_model(const std::string& graph_path, const std::string& precision_path) {
  auto g = open_in(graph_path);
  Graph graph = read_edge_list(g);
  auto t = open_in(precision_path);
  SparseSymmetricMatrix J = read_symmetric_triplets(t, graph.size());
  return GgmModel(std::move(graph), std::move(J));
}

}  // namespace ggm
