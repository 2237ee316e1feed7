#include "igpool/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace igpool::reference {

MatX dense_power(const MatX& a, int h) {
  if (h < 1) throw std::invalid_argument("dense_power: h must be >= 1");
  const Index n = a.rows();
  MatX result = a;
  for (int p = 1; p < h; ++p) {
    MatX next = MatX::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Index m = 0; m < n; ++m) acc += result(i, m) * a(m, j);
        next(i, j) = acc;
      }
    result = next;
  }
  return result;
}

MatX dense_off_diagonal_transition(const MatX& a, int h) {
  MatX power = dense_power(a, h);
  const Index n = power.rows();
  for (Index i = 0; i < n; ++i) power(i, i) = 0.0;
  for (Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Index j = 0; j < n; ++j) row_sum += power(i, j);
    if (row_sum > 0.0)
      for (Index j = 0; j < n; ++j) power(i, j) /= row_sum;
  }
  return power;
}

MatX predict_loop(const MatX& adjacency, const MatX& features, int k) {
  const Index n = adjacency.rows();
  const Index d = features.cols();
  MatX prediction = MatX::Zero(n, d);
  for (int h = 1; h <= k; ++h) {
    const MatX hop = dense_off_diagonal_transition(adjacency, h);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (hop(i, j) != 0.0)
          for (Index z = 0; z < d; ++z)
            prediction(i, z) += hop(i, j) * features(j, z);
  }
  return prediction / static_cast<double>(k);
}

VecX gain_loop(const MatX& adjacency, const MatX& features, int k) {
  const MatX prediction = predict_loop(adjacency, features, k);
  VecX gains(adjacency.rows());
  for (Index i = 0; i < adjacency.rows(); ++i) {
    double acc = 0.0;
    for (Index z = 0; z < features.cols(); ++z)
      acc += std::abs(features(i, z) - prediction(i, z));
    gains[i] = acc;
  }
  return gains;
}

Graph random_graph(Index n, Index d, double edge_prob, Rng& rng,
                   bool weighted) {
  std::vector<Triplet> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (uniform01(rng) < edge_prob) {
        const Scalar w = weighted ? uniform(rng, 0.5, 2.0) : Scalar(1);
        edges.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
      }
  if (edges.empty() && n >= 2) {
    const Scalar w = weighted ? uniform(rng, 0.5, 2.0) : Scalar(1);
    edges.emplace_back(0, 1, w);
  }
  MatX features(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index z = 0; z < d; ++z) features(i, z) = uniform(rng, -1.0, 1.0);
  return make_graph(n, edges, std::move(features));
}

}  // namespace igpool::reference
