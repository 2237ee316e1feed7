#pragma once

#include <string>
#include <vector>

#include "igpool/dataset.hpp"
#include "igpool/graph.hpp"

namespace igpool {

/// Reads comma-separated 1-indexed edge lines: "u, v" or "u, v, w".
std::vector<Edge> read_edge_list(const std::string& path);

/// Reads a dense matrix of whitespace-separated rows; all rows must have
/// the same width.
MatX read_dense_matrix(const std::string& path);

/// Formats every stored entry as a 1-indexed comma-separated edge line
/// (both orientations, the dataset-interoperable convention). Weights are
/// appended as a third field only when some weight differs from 1.
std::string format_edge_list(const SpMat& adjacency);

std::string format_dense_matrix(const MatX& m);
std::string format_vector(const VecX& v);
std::string format_index_list(const std::vector<Index>& indices);

/// Writes via a temporary file in the same directory plus rename, so the
/// destination is never observed half-written.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace igpool
