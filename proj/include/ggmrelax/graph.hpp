// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <vector>

#include "ggmrelax/common.hpp"

namespace ggm {

/// Undirected simple graph on nodes 0..p-1. Edges are kept once each in
/// canonical (i < j) order, sorted.
class Graph {
 public:
  Graph() = default;
  Graph(Index p, std::vector<Pair> edges);

  Index size() const { return p_; }
  const std::vector<Pair>& edges() const { return edges_; }
  /// Sorted adjacency list of node i.
  const std::vector<Index>& neighbors(Index i) const { return adjacency_.at(i); }
  bool has_edge(Index i, Index j) const;

  static Graph complete(Index p);

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.p_ == b.p_ && a.edges_ == b.edges_;
  }

 private:
  Index p_ = 0;
  std::vector<Pair> edges_;
  std::vector<std::vector<Index>> adjacency_;
};

/// E plus the diagonal, with both orientations of every edge.
PairSet tilde_edge_set(const Graph& graph);

/// Nodes within graph distance k of center (breadth first), sorted.
NodeSet khop_nodes(const Graph& graph, Index center, int k);

/// Index-set bookkeeping for one local relaxed problem.
///
/// Pair sets are expressed in local indices (positions in `nodes`); node sets
/// and `row_params` are in global indices. Use `to_global` / `local_of` to
/// move between the two.
struct NeighborhoodDecomposition {
  Index center = 0;
  int hops = 0;
  NodeSet nodes;
  NodeSet buffer;
  NodeSet protected_nodes;
  PairSet protected_edges;
  PairSet relaxed_edges;
  std::vector<Pair> row_params;

  Index local_of(Index global) const;
  Index global_of(Index local) const { return nodes.at(local); }
  PairSet to_global(const PairSet& local_pairs) const;
  /// Support of the local problem actually solved. One-hop neighborhoods
  /// use every pair over N (a protected neighbor can leave gaps in
  /// relaxed_edges, but the one-hop estimator is the plain local inverse).
  PairSet estimation_support() const;
  /// True when the local problem is unconstrained over the neighborhood.
  bool full_relaxation() const {
    return hops == 1 || relaxed_edges.size() == nodes.size() * nodes.size();
  }
};

NeighborhoodDecomposition decompose_neighborhood(const Graph& graph,
                                                 Index center, int k);

/// Longest shortest-path length over all connected pairs.
int graph_diameter(const Graph& graph);

// Edge-list text format: "p <count>" then one "i j" line per edge.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& graph);

}  // namespace ggm
