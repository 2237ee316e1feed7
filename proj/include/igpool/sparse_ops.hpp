#pragma once

#include "igpool/types.hpp"

namespace igpool {

/// Row sums of a square sparse matrix; the node degrees of an adjacency.
/// Isolated nodes yield degree 0.
VecX degree_vector(const SpMat& adjacency);

/// Row-stochastic transition matrix D^{-1} A. Rows of zero-degree nodes
/// stay identically zero instead of raising an error.
SpMat transition_matrix(const SpMat& adjacency);

/// Exact h-th sparse power, h >= 1, computed by repeated multiplication
/// with coordinate merging; no small-value thresholding.
SpMat matrix_power(const SpMat& adjacency, int h);

/// Copy of m with all diagonal entries removed.
SpMat strip_diagonal(const SpMat& m);

/// Divides every nonzero row of a nonnegative matrix by its row sum;
/// zero rows are preserved.
SpMat row_normalized(const SpMat& m);

/// h-hop transition matrix with h-hop circles excised: strips the diagonal
/// of A^h and row-normalizes the remainder. Every row of the result sums
/// to 1 or is all-zero and the diagonal is empty.
SpMat off_diagonal_transition(const SpMat& adjacency, int h);

}  // namespace igpool
