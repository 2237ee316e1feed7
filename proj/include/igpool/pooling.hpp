#pragma once

#include <vector>

#include "igpool/graph.hpp"

namespace igpool {

enum class PoolingMode { Global, Local };

struct PoolingConfig {
  int k = 1;            // prediction hop count, >= 1
  int s = 1;            // adjacency expansion power, 1 or 2
  double ratio = 0.5;   // kept-node fraction in (0, 1]
  PoolingMode mode = PoolingMode::Global;
  bool weighted = false;  // keep expanded edge weights instead of binarizing
};

/// Throws std::invalid_argument when a field is outside its domain.
void validate(const PoolingConfig& config);

struct PoolingResult {
  VecX gains;                   // selection scores, one per input node
  std::vector<Index> selected;  // kept original node indices, ascending
  SpMat coarsening;             // n' x n 0/1 selection matrix
  Graph coarse;
};

/// Per-node neighborhood prediction: row i is the average over hops
/// h = 1..k of the h-hop-transition-weighted mean of the other nodes'
/// features. Nodes without h-hop neighbors receive no contribution from
/// that hop.
MatX predict(const Graph& graph, int k);

/// l1 distance between each node's features and their neighborhood
/// prediction; nonnegative, zero when the prediction is exact.
VecX information_gain(const Graph& graph, int k);

/// Gain of each node divided by the transition-weighted average gain of
/// its neighborhood. A zero denominator yields 0 for uninformative nodes
/// and +inf (ranks first) for informative ones.
VecX normalized_gain(const Graph& graph, const VecX& gains);

/// Indices of the max(1, ceil(ratio*n)) largest scores, ties broken by
/// smaller index; returned ascending.
std::vector<Index> select_nodes(const VecX& scores, double ratio);

/// s-step reachability adjacency. s=1 returns the adjacency unchanged;
/// s=2 connects nodes joined by a 2-edge path, with weight 1 (unweighted)
/// or the corresponding entry of the squared adjacency (weighted). The
/// diagonal is always removed.
SpMat expand_adjacency(const Graph& graph, int s, bool weighted);

/// n' x n matrix with row r holding a single 1 in column selected[r].
SpMat selection_matrix(const std::vector<Index>& selected, Index n);

/// Full pooling step: score nodes (globally or locally normalized), keep
/// the top fraction, and assemble the coarse graph over the expanded
/// adjacency. Coarse features are the selected nodes' feature rows in
/// ascending original order.
PoolingResult coarsen(const Graph& graph, const PoolingConfig& config);

/// Coarsening with an externally fixed node choice (ascending original
/// indices); gains are left empty. Used where the selection must not be
/// recomputed, e.g. when differentiating through a network.
PoolingResult coarsen_with_selection(const Graph& graph,
                                     std::vector<Index> selected,
                                     const PoolingConfig& config);

}  // namespace igpool
