#include "igpool/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace igpool {

Graph make_graph(Index n, const std::vector<Triplet>& edges, MatX features,
                 int label) {
  if (n < 0) throw std::invalid_argument("make_graph: negative node count");
  if (features.rows() != n)
    throw std::invalid_argument("make_graph: feature rows (" +
                                std::to_string(features.rows()) +
                                ") != node count (" + std::to_string(n) + ")");
  if (!features.allFinite())
    throw std::invalid_argument("make_graph: non-finite feature entry");

  std::vector<Triplet> mirrored;
  mirrored.reserve(2 * edges.size());
  for (const auto& t : edges) {
    if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n)
      throw std::invalid_argument("make_graph: edge endpoint out of range");
    if (!std::isfinite(t.value()) || t.value() < 0.0)
      throw std::invalid_argument("make_graph: edge weight must be finite and >= 0");
    if (t.row() == t.col()) continue;  // self-loops stripped at construction
    mirrored.emplace_back(t.row(), t.col(), t.value());
    mirrored.emplace_back(t.col(), t.row(), t.value());
  }

  SpMat adjacency(n, n);
  adjacency.setFromTriplets(mirrored.begin(), mirrored.end(),
                            [](Scalar a, Scalar b) { return std::max(a, b); });
  adjacency.prune([](Index, Index, Scalar v) { return v != Scalar(0); });
  adjacency.makeCompressed();

  Graph g;
  g.adjacency = std::move(adjacency);
  g.features = std::move(features);
  g.label = label;
  return g;
}

Graph graph_from_edge_list(Index n, const std::vector<Edge>& edges, int base,
                           MatX features, int label) {
  if (base != 0 && base != 1)
    throw std::invalid_argument("graph_from_edge_list: index base must be 0 or 1");
  std::vector<Triplet> triplets;
  triplets.reserve(edges.size());
  for (const auto& e : edges) {
    const Index u = e.u - base;
    const Index v = e.v - base;
    if (u < 0 || v < 0)
      throw std::invalid_argument("graph_from_edge_list: endpoint below index base");
    triplets.emplace_back(static_cast<int>(u), static_cast<int>(v), e.w);
  }
  return make_graph(n, triplets, std::move(features), label);
}

}  // namespace igpool
