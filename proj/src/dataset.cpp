#include "igpool/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace igpool {

std::vector<Index> Dataset::class_counts() const {
  std::vector<Index> counts(static_cast<std::size_t>(num_classes), 0);
  for (const auto& g : graphs)
    if (g.has_label()) ++counts[static_cast<std::size_t>(g.label)];
  return counts;
}

double Dataset::average_node_count() const {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& g : graphs) total += static_cast<double>(g.num_nodes());
  return total / static_cast<double>(graphs.size());
}

double Dataset::average_edge_count() const {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& g : graphs)
    total += static_cast<double>(g.adjacency.nonZeros()) / 2.0;
  return total / static_cast<double>(graphs.size());
}

ParseError::ParseError(std::string file, long line, const std::string& message)
    : std::runtime_error(line > 0
                             ? file + ":" + std::to_string(line) + ": " + message
                             : file + ": " + message),
      file_(std::move(file)),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  // trailing blank lines are tolerated
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

long parse_long(const std::string& token, const std::string& file, long line) {
  try {
    std::size_t used = 0;
    const long value = std::stol(trim(token), &used);
    if (used != trim(token).size())
      throw ParseError(file, line, "trailing characters after integer");
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected an integer, got '" + trim(token) + "'");
  }
}

double parse_double(const std::string& token, const std::string& file,
                    long line) {
  try {
    std::size_t used = 0;
    const double value = std::stod(trim(token), &used);
    if (used != trim(token).size())
      throw ParseError(file, line, "trailing characters after number");
    if (!std::isfinite(value))
      throw ParseError(file, line, "non-finite value");
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected a number, got '" + trim(token) + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) fields.push_back(field);
  return fields;
}

}  // namespace

Dataset load_tu_dataset(const std::string& directory, const std::string& name) {
  namespace fs = std::filesystem;
  const std::string prefix = (fs::path(directory) / name).string() + "_";
  const std::string a_file = prefix + "A.txt";
  const std::string indicator_file = prefix + "graph_indicator.txt";
  const std::string graph_labels_file = prefix + "graph_labels.txt";
  const std::string node_labels_file = prefix + "node_labels.txt";
  const std::string node_attributes_file = prefix + "node_attributes.txt";

  for (const auto& required : {a_file, indicator_file, graph_labels_file})
    if (!fs::exists(required))
      throw ParseError(required, 0, "mandatory dataset file is missing");

  // node -> graph assignment (1-indexed in the file)
  const auto indicator_lines = read_lines(indicator_file);
  const long num_nodes = static_cast<long>(indicator_lines.size());
  if (num_nodes == 0) throw ParseError(indicator_file, 0, "no nodes declared");
  std::vector<long> graph_of_node(static_cast<std::size_t>(num_nodes));
  long num_graphs = 0;
  for (long i = 0; i < num_nodes; ++i) {
    const long gid =
        parse_long(indicator_lines[static_cast<std::size_t>(i)], indicator_file,
                   i + 1);
    if (gid < 1)
      throw ParseError(indicator_file, i + 1,
                       "graph ids are 1-indexed, got " + std::to_string(gid));
    graph_of_node[static_cast<std::size_t>(i)] = gid - 1;
    num_graphs = std::max(num_graphs, gid);
  }

  // graph labels, remapped to contiguous [0, num_classes)
  const auto label_lines = read_lines(graph_labels_file);
  if (static_cast<long>(label_lines.size()) != num_graphs)
    throw ParseError(graph_labels_file, 0,
                     "expected " + std::to_string(num_graphs) + " labels, got " +
                         std::to_string(label_lines.size()));
  std::vector<long> raw_labels(static_cast<std::size_t>(num_graphs));
  std::map<long, int> label_map;
  for (long g = 0; g < num_graphs; ++g) {
    const long raw = parse_long(label_lines[static_cast<std::size_t>(g)],
                                graph_labels_file, g + 1);
    raw_labels[static_cast<std::size_t>(g)] = raw;
    label_map.emplace(raw, 0);
  }
  int next_class = 0;
  for (auto& [raw, mapped] : label_map) mapped = next_class++;

  // optional per-node categorical labels -> one-hot columns
  std::vector<long> node_labels;
  std::map<long, Index> node_label_map;
  const bool has_node_labels = fs::exists(node_labels_file);
  if (has_node_labels) {
    const auto lines = read_lines(node_labels_file);
    if (static_cast<long>(lines.size()) != num_nodes)
      throw ParseError(node_labels_file, 0,
                       "expected " + std::to_string(num_nodes) +
                           " node labels, got " + std::to_string(lines.size()));
    node_labels.resize(static_cast<std::size_t>(num_nodes));
    for (long i = 0; i < num_nodes; ++i) {
      const long value = parse_long(lines[static_cast<std::size_t>(i)],
                                    node_labels_file, i + 1);
      node_labels[static_cast<std::size_t>(i)] = value;
      node_label_map.emplace(value, 0);
    }
    Index next = 0;
    for (auto& [value, column] : node_label_map) column = next++;
  }

  // optional continuous attributes
  MatX attributes;
  const bool has_attributes = fs::exists(node_attributes_file);
  if (has_attributes) {
    const auto lines = read_lines(node_attributes_file);
    if (static_cast<long>(lines.size()) != num_nodes)
      throw ParseError(node_attributes_file, 0,
                       "expected " + std::to_string(num_nodes) +
                           " attribute rows, got " +
                           std::to_string(lines.size()));
    Index width = -1;
    for (long i = 0; i < num_nodes; ++i) {
      const auto fields = split(lines[static_cast<std::size_t>(i)], ',');
      if (width < 0) {
        width = static_cast<Index>(fields.size());
        attributes.resize(num_nodes, width);
      } else if (static_cast<Index>(fields.size()) != width) {
        throw ParseError(node_attributes_file, i + 1, "ragged attribute row");
      }
      for (Index z = 0; z < width; ++z)
        attributes(i, z) = parse_double(fields[static_cast<std::size_t>(z)],
                                        node_attributes_file, i + 1);
    }
  }

  // global feature matrix
  const Index one_hot_dim = static_cast<Index>(node_label_map.size());
  const Index attr_dim = has_attributes ? attributes.cols() : 0;
  const Index feature_dim =
      (has_node_labels || has_attributes) ? one_hot_dim + attr_dim : 1;
  MatX features = MatX::Zero(num_nodes, feature_dim);
  if (has_node_labels) {
    for (long i = 0; i < num_nodes; ++i)
      features(i, node_label_map.at(node_labels[static_cast<std::size_t>(i)])) =
          1.0;
  }
  if (has_attributes) {
    features.rightCols(attr_dim) = attributes;
  }
  if (!has_node_labels && !has_attributes) features.setOnes();

  // edges, grouped per graph
  const auto edge_lines = read_lines(a_file);
  std::vector<std::vector<Triplet>> edges_per_graph(
      static_cast<std::size_t>(num_graphs));

  // local node ids follow the global order within each graph
  std::vector<Index> local_id(static_cast<std::size_t>(num_nodes));
  std::vector<Index> nodes_per_graph(static_cast<std::size_t>(num_graphs), 0);
  for (long i = 0; i < num_nodes; ++i) {
    const auto g = static_cast<std::size_t>(graph_of_node[i]);
    local_id[static_cast<std::size_t>(i)] = nodes_per_graph[g]++;
  }
  for (long g = 0; g < num_graphs; ++g)
    if (nodes_per_graph[static_cast<std::size_t>(g)] == 0)
      throw ParseError(indicator_file, 0,
                       "graph " + std::to_string(g + 1) + " has no nodes");

  for (long ln = 0; ln < static_cast<long>(edge_lines.size()); ++ln) {
    const std::string line = trim(edge_lines[static_cast<std::size_t>(ln)]);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(a_file, ln + 1, "expected 'u, v' or 'u, v, w'");
    const long u = parse_long(fields[0], a_file, ln + 1);
    const long v = parse_long(fields[1], a_file, ln + 1);
    if (u < 1 || u > num_nodes || v < 1 || v > num_nodes)
      throw ParseError(a_file, ln + 1,
                       "node index out of range [1, " +
                           std::to_string(num_nodes) + "]");
    const long gu = graph_of_node[static_cast<std::size_t>(u - 1)];
    const long gv = graph_of_node[static_cast<std::size_t>(v - 1)];
    if (gu != gv)
      throw ParseError(a_file, ln + 1,
                       "edge joins nodes of different graphs (" +
                           std::to_string(gu + 1) + " and " +
                           std::to_string(gv + 1) + ")");
    const double w =
        fields.size() == 3 ? parse_double(fields[2], a_file, ln + 1) : 1.0;
    if (w < 0.0)
      throw ParseError(a_file, ln + 1, "negative edge weight");
    edges_per_graph[static_cast<std::size_t>(gu)].emplace_back(
        static_cast<int>(local_id[static_cast<std::size_t>(u - 1)]),
        static_cast<int>(local_id[static_cast<std::size_t>(v - 1)]), w);
  }

  Dataset dataset;
  dataset.name = name;
  dataset.num_classes = next_class;
  if (has_node_labels)
    dataset.feature_kind = FeatureKind::OneHotNodeLabels;
  else if (has_attributes)
    dataset.feature_kind = FeatureKind::ContinuousAttributes;
  else
    dataset.feature_kind = FeatureKind::ConstantOne;

  std::vector<std::vector<Index>> global_ids(
      static_cast<std::size_t>(num_graphs));
  for (long i = 0; i < num_nodes; ++i)
    global_ids[static_cast<std::size_t>(graph_of_node[static_cast<std::size_t>(i)])]
        .push_back(static_cast<Index>(i));

  dataset.graphs.reserve(static_cast<std::size_t>(num_graphs));
  for (long g = 0; g < num_graphs; ++g) {
    const auto& ids = global_ids[static_cast<std::size_t>(g)];
    MatX x(static_cast<Index>(ids.size()), feature_dim);
    for (std::size_t r = 0; r < ids.size(); ++r)
      x.row(static_cast<Index>(r)) = features.row(ids[r]);
    dataset.graphs.push_back(
        make_graph(static_cast<Index>(ids.size()),
                   edges_per_graph[static_cast<std::size_t>(g)], std::move(x),
                   label_map.at(raw_labels[static_cast<std::size_t>(g)])));
  }
  return dataset;
}

}  // namespace igpool
