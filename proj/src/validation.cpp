#include "igpool/validation.hpp"

#include <cmath>
#include <stdexcept>

#include "igpool/rng.hpp"

namespace igpool {

double entropy_estimate_from_gain(double gain, double scale, int dim) {
  if (scale <= 0.0)
    throw std::invalid_argument("entropy_estimate_from_gain: scale must be > 0");
  return gain / scale + static_cast<double>(dim) * std::log(2.0 * scale);
}

double laplace_entropy(double scale, int dim) {
  if (scale <= 0.0)
    throw std::invalid_argument("laplace_entropy: scale must be > 0");
  return static_cast<double>(dim) * (1.0 + std::log(2.0 * scale));
}

namespace {

// Inverse-CDF Laplace draw centered at `mean`.
double sample_laplace(double mean, double scale, Rng& rng) {
  const double u = uniform01(rng) - 0.5;
  const double arg = std::max(1.0 - 2.0 * std::abs(u), 1e-300);
  return mean - scale * (u < 0.0 ? -1.0 : 1.0) * std::log(arg);
}

}  // namespace

EntropyCheck monte_carlo_entropy_check(const LaplaceNeighborhoodModel& model,
                                       long samples, std::uint64_t seed) {
  if (model.scale <= 0.0)
    throw std::invalid_argument("monte_carlo_entropy_check: scale must be > 0");
  if (model.dim < 1 || model.mean.size() != model.dim)
    throw std::invalid_argument("monte_carlo_entropy_check: bad dimension");
  if (samples < 1)
    throw std::invalid_argument("monte_carlo_entropy_check: samples must be >= 1");

  Rng rng(seed);
  double gain_sum = 0.0;
  for (long s = 0; s < samples; ++s) {
    double gain = 0.0;
    for (int z = 0; z < model.dim; ++z) {
      const double x = sample_laplace(model.mean[z], model.scale, rng);
      gain += std::abs(x - model.mean[z]);
    }
    gain_sum += gain;
  }
  const double mean_gain = gain_sum / static_cast<double>(samples);

  EntropyCheck check;
  check.empirical = entropy_estimate_from_gain(mean_gain, model.scale, model.dim);
  check.analytic = laplace_entropy(model.scale, model.dim);
  check.relative_error =
      std::abs(check.empirical - check.analytic) / std::abs(check.analytic);
  return check;
}

Graph permute_graph(const Graph& graph, const std::vector<Index>& perm) {
  const Index n = graph.num_nodes();
  if (static_cast<Index>(perm.size()) != n)
    throw std::invalid_argument("permute_graph: permutation length mismatch");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(graph.adjacency.nonZeros()));
  for (Index i = 0; i < graph.adjacency.outerSize(); ++i)
    for (SpMat::InnerIterator it(graph.adjacency, i); it; ++it)
      entries.emplace_back(static_cast<int>(perm[it.row()]),
                           static_cast<int>(perm[it.col()]), it.value());
  SpMat adjacency(n, n);
  adjacency.setFromTriplets(entries.begin(), entries.end());
  adjacency.makeCompressed();

  MatX features(n, graph.feature_dim());
  for (Index i = 0; i < n; ++i) features.row(perm[i]) = graph.features.row(i);

  Graph permuted;
  permuted.adjacency = std::move(adjacency);
  permuted.features = std::move(features);
  permuted.label = graph.label;
  return permuted;
}

std::pair<Graph, std::vector<Index>> generate_isomorphic_pair(
    const Graph& graph, std::uint64_t seed) {
  if (graph.num_nodes() == 0)
    throw std::invalid_argument("generate_isomorphic_pair: graph must be nonempty");
  Rng rng(seed);
  std::vector<Index> perm = random_permutation(graph.num_nodes(), rng);
  return {permute_graph(graph, perm), std::move(perm)};
}

}  // namespace igpool
