// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

namespace ggm {

namespace {
Index checked_size(Index p) {
  if (p <= 0) throw Error(ErrorCode::kInvalidArgument, "graph needs p >= 1");
  return p;
}
}  // namespace

Graph::Graph(Index p, std::vector<Pair> edges) : p_(checked_size(p)), adjacency_(p_) {
  for (auto& e : edges) {
    if (e.first < 0 || e.first >= p || e.second < 0 || e.second >= p) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(e.first) + "," +
                      std::to_string(e.second) + ") out of range");
    }
    if (e.first == e.second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop at node " + std::to_string(e.first));
    }
    e = canonical(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (const auto& [i, j] : edges_) {
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

bool Graph::has_edge(Index i, Index j) const {
  if (i == j) return false;
  const auto& adj = adjacency_.at(i);
  return std::binary_search(adj.begin(), adj.end(), j);
}

Graph Graph::complete(Index p) {
  std::vector<Pair> edges;
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j) edges.emplace_back(i, j);
  return Graph(p, std::move(edges));
}

PairSet tilde_edge_set(const Graph& graph) {
  PairSet out;
  for (Index i = 0; i < graph.size(); ++i) out.emplace(i, i);
  for (const auto& [i, j] : graph.edges()) {
    out.emplace(i, j);
    out.emplace(j, i);
  }
  return out;
}

namespace {

std::vector<int> bfs_distances(const Graph& graph, Index source, int limit) {
  std::vector<int> dist(graph.size(), -1);
  std::queue<Index> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    if (limit >= 0 && dist[u] >= limit) continue;
    for (Index v : graph.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

void check_center(const Graph& graph, Index center) {
  if (center < 0 || center >= graph.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "center " + std::to_string(center) + " out of range [0, " +
                    std::to_string(graph.size()) + ")");
  }
}

}  // namespace

NodeSet khop_nodes(const Graph& graph, Index center, int k) {
  check_center(graph, center);
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "hop count must be >= 0");
  const auto dist = bfs_distances(graph, center, k);
  NodeSet out;
  for (Index v = 0; v < graph.size(); ++v)
    if (dist[v] >= 0) out.push_back(v);
  return out;
}

Index NeighborhoodDecomposition::local_of(Index global) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), global);
  if (it == nodes.end() || *it != global) {
    throw Error(ErrorCode::kInvalidArgument,
                "node " + std::to_string(global) + " not in neighborhood");
  }
  return static_cast<Index>(it - nodes.begin());
}

PairSet NeighborhoodDecomposition::to_global(const PairSet& local_pairs) const {
  PairSet out;
  for (const auto& [a, b] : local_pairs) out.emplace(nodes[a], nodes[b]);
  return out;
}

PairSet NeighborhoodDecomposition::estimation_support() const {
  if (hops != 1) return relaxed_edges;
  PairSet out;
  const auto n = static_cast<Index>(nodes.size());
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) out.emplace(a, b);
  return out;
}

NeighborhoodDecomposition decompose_neighborhood(const Graph& graph,
                                                 Index center, int k) {
  check_center(graph, center);
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "hop count must be >= 1");

  NeighborhoodDecomposition d;
  d.center = center;
  d.hops = k;
  d.nodes = khop_nodes(graph, center, k);

  const auto n = static_cast<Index>(d.nodes.size());
  std::vector<bool> inside(graph.size(), false);
  for (Index v : d.nodes) inside[v] = true;

  std::vector<bool> is_buffer(n, false);
  for (Index a = 0; a < n; ++a) {
    for (Index w : graph.neighbors(d.nodes[a])) {
      if (!inside[w]) {
        is_buffer[a] = true;
        break;
      }
    }
    (is_buffer[a] ? d.buffer : d.protected_nodes).push_back(d.nodes[a]);
  }

  for (Index a = 0; a < n; ++a) {
    d.relaxed_edges.emplace(a, a);
    if (!is_buffer[a]) d.protected_edges.emplace(a, a);
  }
  for (Index a = 0; a < n; ++a) {
    for (Index w : graph.neighbors(d.nodes[a])) {
      if (!inside[w]) continue;
      const Index b = d.local_of(w);
      if (!is_buffer[a] || !is_buffer[b]) {
        d.protected_edges.emplace(a, b);
        d.relaxed_edges.emplace(a, b);
      }
    }
  }
  // Fill-in candidates: every buffer pair, edge or not.
  for (Index a = 0; a < n; ++a) {
    if (!is_buffer[a]) continue;
    for (Index b = 0; b < n; ++b)
      if (is_buffer[b]) d.relaxed_edges.emplace(a, b);
  }

  d.row_params.emplace_back(center, center);
  for (Index j : graph.neighbors(center)) d.row_params.emplace_back(center, j);
  std::sort(d.row_params.begin(), d.row_params.end());
  return d;
}

int graph_diameter(const Graph& graph) {
  int diameter = 0;
  for (Index s = 0; s < graph.size(); ++s) {
    for (int d : bfs_distances(graph, s, -1)) diameter = std::max(diameter, d);
  }
  return diameter;
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  Index p = -1;
  std::vector<Pair> edges;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (p < 0) {
      std::string tag;
      if (!(ls >> tag >> p) || tag != "p" || p <= 0) {
        throw Error(ErrorCode::kIo, "edge list: expected 'p <count>' on line " +
                                        std::to_string(line_no));
      }
      continue;
    }
    Index i = 0, j = 0;
    if (!(ls >> i >> j)) {
      throw Error(ErrorCode::kIo,
                  "edge list: malformed pair on line " + std::to_string(line_no));
    }
    edges.emplace_back(i, j);
  }
  if (p < 0) throw Error(ErrorCode::kIo, "edge list: missing 'p <count>' header");
  return Graph(p, std::move(edges));
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << "p " << graph.size() << '\n';
  for (const auto& [i, j] : graph.edges()) out << i << ' ' << j << '\n';
}

}  // namespace ggm
