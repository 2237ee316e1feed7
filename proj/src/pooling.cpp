#include "igpool/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "igpool/sparse_ops.hpp"

namespace igpool {

namespace {
constexpr Scalar kZeroEps = 1e-12;
}

void validate(const PoolingConfig& config) {
  if (config.k < 1)
    throw std::invalid_argument("pooling: k must be >= 1");
  if (config.s != 1 && config.s != 2)
    throw std::invalid_argument("pooling: s must be 1 or 2");
  if (!(config.ratio > 0.0 && config.ratio <= 1.0))
    throw std::invalid_argument("pooling: ratio must be in (0, 1]");
}

MatX predict(const Graph& graph, int k) {
  if (k < 1) throw std::invalid_argument("predict: k must be >= 1");
  const Index n = graph.num_nodes();
  MatX acc = MatX::Zero(n, graph.feature_dim());
  SpMat power = graph.adjacency;
  for (int h = 1; h <= k; ++h) {
    if (h > 1) power = power * graph.adjacency;
    acc += row_normalized(strip_diagonal(power)) * graph.features;
  }
  return acc / static_cast<Scalar>(k);
}

VecX information_gain(const Graph& graph, int k) {
  return (graph.features - predict(graph, k)).cwiseAbs().rowwise().sum();
}

VecX normalized_gain(const Graph& graph, const VecX& gains) {
  if (gains.size() != graph.num_nodes())
    throw std::invalid_argument("normalized_gain: gain vector length mismatch");
  const VecX neighborhood = transition_matrix(graph.adjacency) * gains;
  VecX out(gains.size());
  for (Index i = 0; i < gains.size(); ++i) {
    if (neighborhood[i] > kZeroEps) {
      out[i] = gains[i] / neighborhood[i];
    } else {
      // informative nodes with an uninformative neighborhood rank first
      out[i] = gains[i] > kZeroEps
                   ? std::numeric_limits<Scalar>::infinity()
                   : Scalar(0);
    }
  }
  return out;
}

std::vector<Index> select_nodes(const VecX& scores, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw std::invalid_argument("select_nodes: ratio must be in (0, 1]");
  const Index n = scores.size();
  if (n == 0) return {};
  const Index keep = std::min<Index>(
      n, std::max<Index>(1, static_cast<Index>(
                                std::ceil(ratio * static_cast<double>(n)))));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), [&scores](Index a, Index b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(static_cast<std::size_t>(keep));
  std::sort(order.begin(), order.end());
  return order;
}

SpMat expand_adjacency(const Graph& graph, int s, bool weighted) {
  if (s != 1 && s != 2)
    throw std::invalid_argument("expand_adjacency: s must be 1 or 2");
  if (s == 1) return graph.adjacency;
  SpMat expanded = strip_diagonal(matrix_power(graph.adjacency, s));
  if (!weighted && expanded.nonZeros() > 0)
    Eigen::Map<Eigen::ArrayXd>(expanded.valuePtr(), expanded.nonZeros())
        .setOnes();
  return expanded;
}

SpMat selection_matrix(const std::vector<Index>& selected, Index n) {
  std::vector<Triplet> entries;
  entries.reserve(selected.size());
  for (std::size_t r = 0; r < selected.size(); ++r) {
    if (selected[r] < 0 || selected[r] >= n)
      throw std::invalid_argument("selection_matrix: index out of range");
    entries.emplace_back(static_cast<int>(r), static_cast<int>(selected[r]),
                         Scalar(1));
  }
  SpMat c(static_cast<Index>(selected.size()), n);
  c.setFromTriplets(entries.begin(), entries.end());
  c.makeCompressed();
  return c;
}

PoolingResult coarsen_with_selection(const Graph& graph,
                                     std::vector<Index> selected,
                                     const PoolingConfig& config) {
  validate(config);
  if (graph.num_nodes() == 0)
    throw std::invalid_argument("coarsen: graph must be nonempty");

  SpMat c = selection_matrix(selected, graph.num_nodes());
  const SpMat expanded = expand_adjacency(graph, config.s, config.weighted);
  SpMat half = c * expanded;
  SpMat ct = c.transpose();
  SpMat coarse_adj = strip_diagonal(SpMat(half * ct));

  MatX coarse_x(static_cast<Index>(selected.size()), graph.feature_dim());
  for (std::size_t r = 0; r < selected.size(); ++r)
    coarse_x.row(static_cast<Index>(r)) = graph.features.row(selected[r]);

  PoolingResult result;
  result.selected = std::move(selected);
  result.coarsening = std::move(c);
  result.coarse.adjacency = std::move(coarse_adj);
  result.coarse.features = std::move(coarse_x);
  result.coarse.label = graph.label;
  return result;
}

PoolingResult coarsen(const Graph& graph, const PoolingConfig& config) {
  validate(config);
  if (graph.num_nodes() == 0)
    throw std::invalid_argument("coarsen: graph must be nonempty");

  VecX gains = information_gain(graph, config.k);
  if (config.mode == PoolingMode::Local)
    gains = normalized_gain(graph, gains);

  PoolingResult result = coarsen_with_selection(
      graph, select_nodes(gains, config.ratio), config);
  result.gains = std::move(gains);
  return result;
}

}  // namespace igpool
