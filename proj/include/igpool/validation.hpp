#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "igpool/graph.hpp"

namespace igpool {

/// Product-Laplace model of a node's features conditioned on its
/// neighborhood: independent components sharing one scale, centered on the
/// neighborhood prediction.
struct LaplaceNeighborhoodModel {
  int dim = 1;
  double scale = 1.0;  // > 0
  VecX mean;           // length dim
};

/// Entropy estimate implied by one observed gain value:
/// gain/scale + dim * ln(2*scale). Throws on scale <= 0.
double entropy_estimate_from_gain(double gain, double scale, int dim);

/// Differential entropy of the product-Laplace model, dim*(1 + ln(2*scale)).
double laplace_entropy(double scale, int dim);

struct EntropyCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  double relative_error = 0.0;
};

/// Draws `samples` vectors from the model, turns each sample's l1
/// deviation into an entropy estimate and compares the average against the
/// analytic entropy.
EntropyCheck monte_carlo_entropy_check(const LaplaceNeighborhoodModel& model,
                                       long samples, std::uint64_t seed);

/// Relabels nodes by `perm`: node i becomes perm[i] in the returned graph,
/// with adjacency coordinates and feature rows moved accordingly.
Graph permute_graph(const Graph& graph, const std::vector<Index>& perm);

/// Seeded uniformly random relabeling of a graph; returns the permuted
/// graph and the permutation that produced it.
std::pair<Graph, std::vector<Index>> generate_isomorphic_pair(
    const Graph& graph, std::uint64_t seed);

}  // namespace igpool
