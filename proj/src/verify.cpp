#include "igpool/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <tuple>

#include "igpool/gnn.hpp"
#include "igpool/pooling.hpp"
#include "igpool/reference.hpp"
#include "igpool/sparse_ops.hpp"
#include "igpool/validation.hpp"

namespace igpool {

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

void print_report(const SuiteReport& report, std::ostream& out) {
  for (const auto& check : report.checks) {
    out << "[" << report.suite << "] " << check.name << ": "
        << (check.passed ? "PASS" : "FAIL") << "  measured=" << check.measured
        << "  bound=" << check.bound;
    if (!check.detail.empty()) out << "  (" << check.detail << ")";
    out << "\n";
  }
  out << "[" << report.suite << "] " << (report.passed() ? "PASS" : "FAIL")
      << " in " << report.seconds << " s\n";
}

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

CheckResult make_check(std::string name, double measured, double bound,
                       std::string detail = "") {
  CheckResult check;
  check.name = std::move(name);
  check.measured = measured;
  check.bound = bound;
  check.passed = measured < bound;
  check.detail = std::move(detail);
  return check;
}

// strictly-below comparison is wrong for counters; exact-zero check
CheckResult make_count_check(std::string name, long failures,
                             std::string detail = "") {
  CheckResult check;
  check.name = std::move(name);
  check.measured = static_cast<double>(failures);
  check.bound = 0.0;
  check.passed = failures == 0;
  check.detail = std::move(detail);
  return check;
}

bool pairwise_distinct(const VecX& values, double min_gap) {
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!(sorted[i] - sorted[i - 1] > min_gap)) return false;  // nan-safe
  return true;
}

using EdgeTuple = std::tuple<Index, Index, Scalar>;

std::vector<EdgeTuple> relabeled_edges(const SpMat& m,
                                       const std::vector<Index>& relabel) {
  std::vector<EdgeTuple> edges;
  edges.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Index i = 0; i < m.outerSize(); ++i)
    for (SpMat::InnerIterator it(m, i); it; ++it)
      edges.emplace_back(relabel[static_cast<std::size_t>(it.row())],
                         relabel[static_cast<std::size_t>(it.col())],
                         it.value());
  std::sort(edges.begin(), edges.end(),
            [](const EdgeTuple& a, const EdgeTuple& b) {
              if (std::get<0>(a) != std::get<0>(b))
                return std::get<0>(a) < std::get<0>(b);
              return std::get<1>(a) < std::get<1>(b);
            });
  return edges;
}

std::vector<Index> identity_relabel(Index n) {
  std::vector<Index> id(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
  return id;
}

// Structural violations of the selection-matrix shape: every row must hold
// exactly one 1 and every column at most one nonzero.
long coarsening_shape_violations(const SpMat& c) {
  long violations = 0;
  std::vector<int> column_hits(static_cast<std::size_t>(c.cols()), 0);
  for (Index i = 0; i < c.outerSize(); ++i) {
    int row_entries = 0;
    for (SpMat::InnerIterator it(c, i); it; ++it) {
      ++row_entries;
      if (it.value() != Scalar(1)) ++violations;
      ++column_hits[static_cast<std::size_t>(it.col())];
    }
    if (row_entries != 1) ++violations;
  }
  for (int hits : column_hits)
    if (hits > 1) ++violations;
  return violations;
}

}  // namespace

SuiteReport run_oracle_suite(int graphs, std::uint64_t seed) {
  Timer timer;
  SuiteReport report;
  report.suite = "oracle";

  Rng rng(mix_seed(seed, 1));
  double max_gain_err = 0.0;
  double max_row_sum_err = 0.0;
  long diagonal_entries = 0;
  for (int g = 0; g < graphs; ++g) {
    const Index n = 2 + static_cast<Index>(uniform_below(rng, 29));  // [2, 30]
    const Index d = 1 + static_cast<Index>(uniform_below(rng, 8));   // [1, 8]
    const double p = uniform(rng, 0.15, 0.6);
    const bool weighted = (g % 2) == 1;
    const int k = 1 + static_cast<int>(uniform_below(rng, 2));  // {1, 2}

    const Graph graph = reference::random_graph(n, d, p, rng, weighted);
    const VecX fast = information_gain(graph, k);
    const VecX slow =
        reference::gain_loop(MatX(graph.adjacency), graph.features, k);
    max_gain_err = std::max(max_gain_err, (fast - slow).cwiseAbs().maxCoeff());

    for (int h = 1; h <= k; ++h) {
      const SpMat hop = off_diagonal_transition(graph.adjacency, h);
      for (Index i = 0; i < hop.outerSize(); ++i) {
        Scalar row_sum = 0.0;
        for (SpMat::InnerIterator it(hop, i); it; ++it) {
          row_sum += it.value();
          if (it.row() == it.col()) ++diagonal_entries;
        }
        if (row_sum != 0.0)
          max_row_sum_err = std::max(max_row_sum_err, std::abs(row_sum - 1.0));
      }
    }
  }

  report.checks.push_back(make_check(
      "gain: sparse route vs per-node loop", max_gain_err, 1e-9,
      std::to_string(graphs) + " random graphs, n<=30, d<=8, k in {1,2}"));
  report.checks.push_back(make_check("hop transition row sums in {0,1}",
                                     max_row_sum_err, 1e-12));
  report.checks.push_back(
      make_count_check("hop transition diagonal entries", diagonal_entries));
  report.seconds = timer.seconds();
  return report;
}

SuiteReport run_props_suite(int pairs, std::uint64_t seed) {
  Timer timer;
  SuiteReport report;
  report.suite = "props";

  Rng rng(mix_seed(seed, 1));
  double max_gain_err = 0.0;
  double max_weight_err = 0.0;
  long selection_failures = 0;
  long isomorphism_failures = 0;
  long shape_violations = 0;
  long coarsenings = 0;

  const double ratios[] = {0.3, 0.5, 2.0 / 3.0};

  int pair = 0;
  for (int attempts = 0; pair < pairs && attempts < 20 * pairs; ++attempts) {
    const Index n = 4 + static_cast<Index>(uniform_below(rng, 17));  // [4, 20]
    const Index d = 1 + static_cast<Index>(uniform_below(rng, 4));
    const bool weighted = (pair % 2) == 1;
    const int k = 1 + static_cast<int>(uniform_below(rng, 2));

    // resample features until both score vectors are pairwise distinct
    Graph graph = reference::random_graph(n, d, uniform(rng, 0.2, 0.5), rng,
                                          weighted);
    bool distinct = false;
    for (int resample = 0; resample < 200 && !distinct; ++resample) {
      const VecX gains = information_gain(graph, k);
      distinct = pairwise_distinct(gains, 1e-6) &&
                 pairwise_distinct(normalized_gain(graph, gains), 1e-6);
      if (!distinct)
        for (Index i = 0; i < graph.features.rows(); ++i)
          for (Index z = 0; z < graph.features.cols(); ++z)
            graph.features(i, z) = uniform(rng, -1.0, 1.0);
    }
    if (!distinct) continue;  // try a fresh topology
    ++pair;

    const auto [permuted, perm] =
        generate_isomorphic_pair(graph, mix_seed(seed, 7000 + pair));

    // gain equivariance, independent of the pooling mode
    const VecX gains = information_gain(graph, k);
    const VecX gains_perm = information_gain(permuted, k);
    for (Index i = 0; i < n; ++i)
      max_gain_err =
          std::max(max_gain_err,
                   std::abs(gains_perm[perm[static_cast<std::size_t>(i)]] -
                            gains[i]));

    for (PoolingMode mode : {PoolingMode::Global, PoolingMode::Local}) {
      PoolingConfig config;
      config.k = k;
      config.s = 1 + static_cast<int>(uniform_below(rng, 2));
      config.ratio = ratios[pair % 3];
      config.mode = mode;
      config.weighted = weighted;

      const PoolingResult base = coarsen(graph, config);
      const PoolingResult other = coarsen(permuted, config);
      coarsenings += 2;
      shape_violations += coarsening_shape_violations(base.coarsening);
      shape_violations += coarsening_shape_violations(other.coarsening);

      // selected sets must correspond through the permutation
      std::vector<Index> mapped;
      mapped.reserve(base.selected.size());
      for (Index s : base.selected)
        mapped.push_back(perm[static_cast<std::size_t>(s)]);
      std::sort(mapped.begin(), mapped.end());
      if (mapped != other.selected) {
        ++selection_failures;
        continue;
      }

      // coarse graphs must be isomorphic under the induced relabeling
      std::vector<Index> position(static_cast<std::size_t>(n), -1);
      for (std::size_t j = 0; j < other.selected.size(); ++j)
        position[static_cast<std::size_t>(other.selected[j])] =
            static_cast<Index>(j);
      std::vector<Index> induced(base.selected.size());
      for (std::size_t r = 0; r < base.selected.size(); ++r)
        induced[r] = position[static_cast<std::size_t>(
            perm[static_cast<std::size_t>(base.selected[r])])];

      const auto lhs = relabeled_edges(base.coarse.adjacency, induced);
      const auto rhs = relabeled_edges(
          other.coarse.adjacency,
          identity_relabel(other.coarse.adjacency.rows()));
      if (lhs.size() != rhs.size()) {
        ++isomorphism_failures;
        continue;
      }
      bool coords_match = true;
      for (std::size_t e = 0; e < lhs.size(); ++e) {
        if (std::get<0>(lhs[e]) != std::get<0>(rhs[e]) ||
            std::get<1>(lhs[e]) != std::get<1>(rhs[e])) {
          coords_match = false;
          break;
        }
        max_weight_err =
            std::max(max_weight_err,
                     std::abs(std::get<2>(lhs[e]) - std::get<2>(rhs[e])));
      }
      if (!coords_match) {
        ++isomorphism_failures;
        continue;
      }
      for (std::size_t r = 0; r < base.selected.size(); ++r)
        if ((base.coarse.features.row(static_cast<Index>(r)).array() !=
             other.coarse.features.row(induced[r]).array())
                .any()) {
          ++isomorphism_failures;
          break;
        }
    }
  }

  report.checks.push_back(
      make_count_check("distinct-gain fixtures missing", pairs - pair,
                       std::to_string(pair) + " of " + std::to_string(pairs) +
                           " pairs generated"));
  report.checks.push_back(
      make_check("gain equivariance under relabeling", max_gain_err, 1e-12,
                 std::to_string(pair) + " pairs"));
  report.checks.push_back(
      make_count_check("selection correspondence", selection_failures,
                       "both modes, distinct gains"));
  report.checks.push_back(
      make_count_check("coarse graph isomorphism", isomorphism_failures));
  report.checks.push_back(make_check("coarse edge weight agreement",
                                     max_weight_err, 1e-12));
  report.checks.push_back(make_count_check(
      "coarsening matrix shape", shape_violations,
      std::to_string(coarsenings) + " coarsenings checked"));
  report.seconds = timer.seconds();
  return report;
}

SuiteReport run_entropy_suite(long samples, std::uint64_t seed) {
  Timer timer;
  SuiteReport report;
  report.suite = "entropy";

  int point = 0;
  for (int dim : {1, 4, 16}) {
    for (double scale : {0.25, 0.5, 2.0}) {
      LaplaceNeighborhoodModel model;
      model.dim = dim;
      model.scale = scale;
      model.mean.resize(dim);
      Rng mean_rng(mix_seed(seed, 100 + point));
      for (Index z = 0; z < model.mean.size(); ++z)
        model.mean[z] = uniform(mean_rng, -1.0, 1.0);

      const EntropyCheck check =
          monte_carlo_entropy_check(model, samples, mix_seed(seed, point));
      report.checks.push_back(make_check(
          "entropy relation d=" + std::to_string(dim) +
              " b=" + std::to_string(scale),
          check.relative_error, 0.02,
          "empirical=" + std::to_string(check.empirical) +
              " analytic=" + std::to_string(check.analytic)));
      ++point;
    }
  }
  report.seconds = timer.seconds();
  return report;
}

namespace {

double max_gradient_error(const Graph& graph, const NetConfig& net,
                          ModelParams& params, double weight_decay) {
  const std::vector<const Graph*> batch{&graph};
  const std::vector<LayerSelections> frozen{
      forward(graph, params, net).selections()};

  const LossResult analytic =
      loss_and_gradients(batch, params, net, weight_decay,
                         /*training=*/false, nullptr, &frozen);
  auto views = parameter_views(params);
  auto grad_views = gradient_views(analytic.grads);

  const double step = 1e-5;
  double max_rel = 0.0;
  for (std::size_t t = 0; t < views.size(); ++t) {
    for (Index i = 0; i < views[t].size(); ++i) {
      const double original = views[t][i];
      views[t][i] = original + step;
      const double up = batch_loss(batch, params, net, weight_decay, &frozen);
      views[t][i] = original - step;
      const double down = batch_loss(batch, params, net, weight_decay, &frozen);
      views[t][i] = original;
      const double numeric = (up - down) / (2.0 * step);
      const double exact = grad_views[t][i];
      const double rel = std::abs(exact - numeric) /
                         std::max({std::abs(exact), std::abs(numeric), 1e-8});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace

SuiteReport run_gradients_suite(std::uint64_t seed) {
  Timer timer;
  SuiteReport report;
  report.suite = "gradients";

  Rng rng(mix_seed(seed, 1));
  Graph graph = reference::random_graph(8, 3, 0.4, rng);
  graph.label = 1;

  {
    NetConfig net;
    net.depth = Depth::Plain1;
    net.readout = ReadoutMode::Sum;
    ModelParams params =
        init_params(graph.feature_dim(), 5, 2, net.depth, mix_seed(seed, 2));
    report.checks.push_back(
        make_check("plain-1 analytic vs central differences",
                   max_gradient_error(graph, net, params, 1e-3), 1e-4,
                   "8-node graph, all parameters, step 1e-5"));
  }
  {
    NetConfig net;
    net.depth = Depth::Pooled2;
    net.readout = ReadoutMode::Mean;
    net.pool.k = 2;
    net.pool.s = 2;
    net.pool.ratio = 0.5;
    net.pool.mode = PoolingMode::Local;
    ModelParams params =
        init_params(graph.feature_dim(), 3, 2, net.depth, mix_seed(seed, 3));
    report.checks.push_back(
        make_check("pooled-2 (frozen choices) analytic vs central differences",
                   max_gradient_error(graph, net, params, 3e-5), 1e-4,
                   "8-node graph, all parameters, step 1e-5"));
  }
  report.seconds = timer.seconds();
  return report;
}

SuiteReport run_scaling_suite(int graphs, std::uint64_t seed) {
  Timer timer;
  SuiteReport report;
  report.suite = "scaling";

  Rng rng(mix_seed(seed, 1));
  const double ratios[] = {0.25, 0.5, 2.0 / 3.0};
  long selection_failures = 0;
  double max_homogeneity_err = 0.0;
  double max_normalized_err = 0.0;

  for (int g = 0; g < graphs; ++g) {
    const Index n = 3 + static_cast<Index>(uniform_below(rng, 23));
    const Index d = 1 + static_cast<Index>(uniform_below(rng, 6));
    const Graph graph = reference::random_graph(n, d, uniform(rng, 0.2, 0.5),
                                                rng, (g % 2) == 1);
    const int k = 1 + static_cast<int>(uniform_below(rng, 2));
    const double ratio = ratios[g % 3];

    const VecX gains = information_gain(graph, k);
    const VecX local = normalized_gain(graph, gains);
    const auto selected_global = select_nodes(gains, ratio);
    const auto selected_local = select_nodes(local, ratio);

    for (double c : {0.1, 3.0, 1000.0}) {
      Graph scaled = graph;
      scaled.features *= c;
      const VecX gains_c = information_gain(scaled, k);
      const VecX local_c = normalized_gain(scaled, gains_c);

      if (select_nodes(gains_c, ratio) != selected_global)
        ++selection_failures;
      if (select_nodes(local_c, ratio) != selected_local)
        ++selection_failures;

      max_homogeneity_err = std::max(
          max_homogeneity_err, (gains_c / c - gains).cwiseAbs().maxCoeff());
      for (Index i = 0; i < local.size(); ++i) {
        if (std::isinf(local[i]) && std::isinf(local_c[i])) continue;
        max_normalized_err =
            std::max(max_normalized_err, std::abs(local_c[i] - local[i]) /
                                             std::max(1.0, std::abs(local[i])));
      }
    }
  }

  report.checks.push_back(make_count_check(
      "selection invariance under positive scaling", selection_failures,
      std::to_string(graphs) + " graphs, c in {0.1, 3, 1000}, both modes"));
  report.checks.push_back(make_check("gain homogeneity |gain(cX)/c - gain(X)|",
                                     max_homogeneity_err, 1e-9));
  report.checks.push_back(make_check(
      "normalized gain invariance", max_normalized_err, 1e-9));
  report.seconds = timer.seconds();
  return report;
}

}  // namespace igpool
