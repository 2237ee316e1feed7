#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "igpool/pooling.hpp"
#include "igpool/reference.hpp"
#include "igpool/validation.hpp"

using namespace igpool;

TEST_CASE("entropy estimate from a gain value") {
  SUBCASE("zero gain at scale one half") {
    CHECK(entropy_estimate_from_gain(0.0, 0.5, 1) == doctest::Approx(0.0));
  }
  SUBCASE("the expected gain recovers the analytic entropy") {
    for (const auto [d, b] : {std::pair{1, 0.7}, {3, 0.25}, {8, 2.0}}) {
      const double expected_gain = d * b;  // mean l1 deviation of the model
      CHECK(entropy_estimate_from_gain(expected_gain, b, d) ==
            doctest::Approx(laplace_entropy(b, d)).epsilon(1e-12));
    }
  }
  SUBCASE("worked example") {
    CHECK(entropy_estimate_from_gain(2.0, 0.5, 4) == doctest::Approx(4.0));
  }
  SUBCASE("scale must be positive") {
    CHECK_THROWS_AS(entropy_estimate_from_gain(1.0, 0.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(entropy_estimate_from_gain(1.0, -2.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(laplace_entropy(0.0, 1), std::invalid_argument);
  }
}

TEST_CASE("monte carlo entropy check") {
  SUBCASE("scale e/2 in one dimension has entropy exactly two") {
    CHECK(laplace_entropy(std::exp(1.0) / 2.0, 1) ==
          doctest::Approx(2.0).epsilon(1e-12));
    LaplaceNeighborhoodModel model;
    model.dim = 1;
    model.scale = std::exp(1.0) / 2.0;
    model.mean = VecX::Zero(1);
    const EntropyCheck check = monte_carlo_entropy_check(model, 100000, 4);
    CHECK(check.analytic == doctest::Approx(2.0));
    CHECK(check.relative_error < 0.02);
  }
  SUBCASE("hundred-thousand-sample run lands within two percent") {
    LaplaceNeighborhoodModel model;
    model.dim = 4;
    model.scale = 0.5;
    model.mean = VecX::Constant(4, 0.3);
    const EntropyCheck check = monte_carlo_entropy_check(model, 100000, 5);
    CHECK(check.relative_error < 0.02);
  }
  SUBCASE("error shrinks with more samples on average") {
    LaplaceNeighborhoodModel model;
    model.dim = 4;
    model.scale = 0.5;
    model.mean = VecX::Zero(4);
    double small_err = 0.0, large_err = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      small_err += monte_carlo_entropy_check(model, 1000, seed).relative_error;
      large_err +=
          monte_carlo_entropy_check(model, 100000, seed).relative_error;
    }
    CHECK(large_err / 5.0 < small_err / 5.0);
  }
  SUBCASE("bad arguments are rejected") {
    LaplaceNeighborhoodModel model;
    model.dim = 2;
    model.scale = 1.0;
    model.mean = VecX::Zero(2);
    CHECK_THROWS_AS(monte_carlo_entropy_check(model, 0, 1),
                    std::invalid_argument);
    model.mean = VecX::Zero(3);  // dimension mismatch
    CHECK_THROWS_AS(monte_carlo_entropy_check(model, 10, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("graph permutation") {
  Rng rng(61);
  const Graph g = reference::random_graph(12, 3, 0.4, rng);

  SUBCASE("identity permutation leaves the graph unchanged") {
    std::vector<Index> identity(12);
    for (Index i = 0; i < 12; ++i) identity[static_cast<size_t>(i)] = i;
    const Graph same = permute_graph(g, identity);
    CHECK(testutil::max_abs_diff(same.adjacency, MatX(g.adjacency)) == 0.0);
    CHECK((same.features - g.features).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("degree multiset is preserved") {
    const auto [permuted, perm] = generate_isomorphic_pair(g, 62);
    VecX d1 = degree_vector(g.adjacency);
    VecX d2 = degree_vector(permuted.adjacency);
    std::sort(d1.data(), d1.data() + d1.size());
    std::sort(d2.data(), d2.data() + d2.size());
    CHECK((d1 - d2).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("information gain is equivariant") {
    double worst = 0.0;
    Rng battery_rng(63);
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 4 + static_cast<Index>(uniform_below(battery_rng, 17));
      const Graph graph = reference::random_graph(
          n, 1 + static_cast<Index>(uniform_below(battery_rng, 3)), 0.4,
          battery_rng, (trial % 2) == 1);
      const auto [permuted, perm] =
          generate_isomorphic_pair(graph, 700 + trial);
      for (int k : {1, 2}) {
        const VecX gains = information_gain(graph, k);
        const VecX gains_perm = information_gain(permuted, k);
        for (Index i = 0; i < n; ++i)
          worst = std::max(
              worst, std::abs(gains_perm[perm[static_cast<size_t>(i)]] -
                              gains[i]));
      }
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("wrong permutation length is rejected") {
    CHECK_THROWS_AS(permute_graph(g, std::vector<Index>{0, 1}),
                    std::invalid_argument);
  }
}
