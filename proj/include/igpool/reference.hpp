#pragma once

#include "igpool/graph.hpp"
#include "igpool/rng.hpp"

// Dense, loop-based reference implementations. These deliberately share no
// code with the sparse production path; the verification suites and tests
// compare the two routes against each other.

namespace igpool::reference {

/// Dense h-th power by repeated O(n^3) multiplication.
MatX dense_power(const MatX& a, int h);

/// Dense counterpart of off_diagonal_transition.
MatX dense_off_diagonal_transition(const MatX& a, int h);

/// Per-node neighborhood prediction as an explicit loop over hops,
/// neighbors and feature dimensions.
MatX predict_loop(const MatX& adjacency, const MatX& features, int k);

/// Per-node information gain computed entry by entry from predict_loop.
VecX gain_loop(const MatX& adjacency, const MatX& features, int k);

/// Erdos-Renyi style random attributed graph; at least one edge is forced
/// so fixtures are never degenerate. Weighted graphs draw weights from
/// [0.5, 2).
Graph random_graph(Index n, Index d, double edge_prob, Rng& rng,
                   bool weighted = false);

}  // namespace igpool::reference
