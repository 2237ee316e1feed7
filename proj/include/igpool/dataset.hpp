#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "igpool/graph.hpp"

namespace igpool {

enum class FeatureKind { OneHotNodeLabels, ConstantOne, ContinuousAttributes };

struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  int num_classes = 0;
  FeatureKind feature_kind = FeatureKind::ConstantOne;

  Index feature_dim() const {
    return graphs.empty() ? 0 : graphs.front().feature_dim();
  }
  std::vector<Index> class_counts() const;
  double average_node_count() const;
  double average_edge_count() const;
};

/// Parse or consistency failure in an input file; carries the offending
/// file and 1-based line (0 when the whole file is the problem).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, long line, const std::string& message);

  const std::string& file() const { return file_; }
  long line() const { return line_; }

 private:
  std::string file_;
  long line_;
};

/// Loads a graph-classification dataset laid out as
///   <dir>/<name>_A.txt               comma-separated 1-indexed edge pairs
///   <dir>/<name>_graph_indicator.txt 1-indexed graph id per node line
///   <dir>/<name>_graph_labels.txt    one label per graph line
///   <dir>/<name>_node_labels.txt     optional, categorical node labels
///   <dir>/<name>_node_attributes.txt optional, comma-separated reals
/// Graph labels are remapped to contiguous [0, num_classes). Node labels
/// become one-hot features (attributes appended when both exist); without
/// either, every node gets the constant feature 1. Duplicate edges and
/// self-loops are dropped and the adjacency is symmetrized.
Dataset load_tu_dataset(const std::string& directory, const std::string& name);

}  // namespace igpool
