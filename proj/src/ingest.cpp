// SPDX-License-Identifier: Apache-2.0
// Time-series to ground-truth model pipeline.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "ggmrelax/harness.hpp"
#include "ggmrelax/solver.hpp"

namespace ggm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_missing_token(const std::string& t) {
  return t.empty() || t == "nan" || t == "NaN" || t == "NA" || t == "null";
}

// Returns false if the token is neither numeric nor a missing marker.
bool parse_cell(const std::string& raw, double& out) {
  const std::string t = trim(raw);
  if (is_missing_token(t)) {
    out = kNaN;
    return true;
  }
  try {
    std::size_t used = 0;
    out = std::stod(t, &used);
    return used == t.size();
  } catch (const std::exception&) {
    return false;
  }
}

Eigen::MatrixXd read_series(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      double v = 0.0;
      numeric = parse_cell(cell, v) && numeric;
      row.push_back(v);
    }
    if (!line.empty() && line.back() == ',') row.push_back(kNaN);
    if (!numeric) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw Error(ErrorCode::kIo, "timeseries: non-numeric cell on data row " +
                                      std::to_string(rows.size() + 1));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::kIo, "timeseries: ragged row " + std::to_string(rows.size() + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kIo, "timeseries: no data rows");
  Eigen::MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) out(r, c) = rows[r][c];
  return out;
}

}  // namespace

Eigen::MatrixXd interpolate_missing(const Eigen::MatrixXd& series) {
  Eigen::MatrixXd out = series;
  const Eigen::Index T = series.rows();
  for (Eigen::Index c = 0; c < series.cols(); ++c) {
    std::vector<Eigen::Index> valid;
    for (Eigen::Index t = 0; t < T; ++t)
      if (std::isfinite(series(t, c))) valid.push_back(t);
    if (valid.empty())
      throw Error(ErrorCode::kInvalidArgument,
                  "column " + std::to_string(c) + " has no valid cells");
    for (Eigen::Index t = 0; t < valid.front(); ++t) out(t, c) = series(valid.front(), c);
    for (Eigen::Index t = valid.back() + 1; t < T; ++t) out(t, c) = series(valid.back(), c);
    for (std::size_t v = 0; v + 1 < valid.size(); ++v) {
      const Eigen::Index a = valid[v], b = valid[v + 1];
      for (Eigen::Index t = a + 1; t < b; ++t) {
        const double w = static_cast<double>(t - a) / static_cast<double>(b - a);
        out(t, c) = (1.0 - w) * series(a, c) + w * series(b, c);
      }
    }
  }
  return out;
}

Eigen::MatrixXd detrend_trailing(const Eigen::MatrixXd& series, int window) {
  if (window < 2) throw Error(ErrorCode::kInvalidArgument, "window must be >= 2");
  if (window > series.rows())
    throw Error(ErrorCode::kInvalidArgument, "window exceeds series length");
  // Trailing average over the last `window` samples including the current
  // one; the first rows use however many samples exist so far.
  Eigen::MatrixXd out(series.rows(), series.cols());
  Eigen::RowVectorXd running = Eigen::RowVectorXd::Zero(series.cols());
  for (Eigen::Index t = 0; t < series.rows(); ++t) {
    running += series.row(t);
    if (t >= window) running -= series.row(t - window);
    const double n = static_cast<double>(std::min<Eigen::Index>(t + 1, window));
    out.row(t) = series.row(t) - running / n;
  }
  return out;
}

GgmModel ingest_timeseries(std::istream& csv, int window, double target_sparsity) {
  if (!(target_sparsity > 0.0 && target_sparsity < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "target_sparsity must be in (0,1)");
  if (window < 2) throw Error(ErrorCode::kInvalidArgument, "window must be >= 2");
  const Eigen::MatrixXd raw = read_series(csv);
  const Index p = static_cast<Index>(raw.cols());
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two series");

  const Eigen::MatrixXd clean = detrend_trailing(interpolate_missing(raw), window);
  const Eigen::MatrixXd S = sample_covariance(clean).matrix;

  Eigen::LLT<Eigen::MatrixXd> llt(S);
  const double scale = std::max(S.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  if (llt.info() != Eigen::Success || S.diagonal().minCoeff() <= 1e-12 * scale)
    throw Error(ErrorCode::kSingular, "covariance singular after detrending");
  Eigen::MatrixXd K = llt.solve(Eigen::MatrixXd::Identity(p, p));
  K = 0.5 * (K + K.transpose());

  std::vector<Pair> off;
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j) off.emplace_back(i, j);
  std::stable_sort(off.begin(), off.end(), [&](const Pair& a, const Pair& b) {
    return std::abs(K(a.first, a.second)) < std::abs(K(b.first, b.second));
  });
  const auto n_zero = static_cast<std::size_t>(
      std::ceil(target_sparsity * static_cast<double>(off.size()) - 1e-9));
  std::vector<Pair> kept(off.begin() + static_cast<std::ptrdiff_t>(n_zero), off.end());

  Graph graph(p, kept);
  const PairSet support = tilde_edge_set(graph);
  SolveReport fit = solve_constrained_mle(S, support, SolverConfig::block_regression());
  return GgmModel(std::move(graph), std::move(fit.solution));
}

GgmModel ingest_timeseries(const std::string& csv_path, int window, double target_sparsity) {
  std::ifstream in(csv_path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + csv_path + "' for reading");
  return ingest_timeseries(in, window, target_sparsity);
}

}  // namespace ggm
