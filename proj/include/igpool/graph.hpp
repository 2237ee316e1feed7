#pragma once

#include <vector>

#include "igpool/types.hpp"

namespace igpool {

/// Undirected attributed graph. The adjacency matrix is symmetric with a
/// zero diagonal and nonnegative weights; features holds one row per node.
struct Graph {
  static constexpr int kNoLabel = -1;

  SpMat adjacency;       // n x n
  MatX features;         // n x d
  int label = kNoLabel;  // optional class index

  Index num_nodes() const { return adjacency.rows(); }
  Index feature_dim() const { return features.cols(); }
  bool has_label() const { return label != kNoLabel; }
};

/// One undirected edge; endpoints are interpreted against the index base
/// declared by the caller (0 or 1).
struct Edge {
  Index u = 0;
  Index v = 0;
  Scalar w = 1.0;
};

/// Builds a Graph from 0-indexed triplets. Each entry is mirrored to the
/// opposite orientation, self-loops are dropped, duplicate coordinates
/// collapse to their maximum weight and explicit zeros are pruned.
/// Throws std::invalid_argument on negative/non-finite weights, indices
/// outside [0, n) or a feature row count different from n.
Graph make_graph(Index n, const std::vector<Triplet>& edges, MatX features,
                 int label = Graph::kNoLabel);

/// Same contract as make_graph for an Edge list with a declared index base.
Graph graph_from_edge_list(Index n, const std::vector<Edge>& edges, int base,
                           MatX features, int label = Graph::kNoLabel);

}  // namespace igpool
