#include <doctest.h>

#include "helpers.hpp"
#include "igpool/reference.hpp"
#include "igpool/rng.hpp"
#include "igpool/sparse_ops.hpp"

using namespace igpool;
using testutil::max_abs_diff;

TEST_CASE("degree vector") {
  SUBCASE("3-node path") {
    const Graph g = testutil::path3();
    const VecX d = degree_vector(g.adjacency);
    CHECK(d(0) == doctest::Approx(1.0));
    CHECK(d(1) == doctest::Approx(2.0));
    CHECK(d(2) == doctest::Approx(1.0));
  }
  SUBCASE("empty graph has all-zero degrees") {
    const Graph g = make_graph(3, {}, MatX::Ones(3, 1));
    CHECK(degree_vector(g.adjacency).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("weighted single edge") {
    const Graph g = make_graph(2, {Triplet(0, 1, 2.5)}, MatX::Ones(2, 1));
    const VecX d = degree_vector(g.adjacency);
    CHECK(d(0) == doctest::Approx(2.5));
    CHECK(d(1) == doctest::Approx(2.5));
  }
  SUBCASE("rejects rectangular input") {
    SpMat m(2, 3);
    CHECK_THROWS_AS(degree_vector(m), std::invalid_argument);
  }
}

TEST_CASE("transition matrix") {
  SUBCASE("3-node path") {
    const Graph g = testutil::path3();
    MatX expected(3, 3);
    expected << 0, 1, 0, 0.5, 0, 0.5, 0, 1, 0;
    CHECK(max_abs_diff(transition_matrix(g.adjacency), expected) < 1e-15);
  }
  SUBCASE("isolated node keeps an all-zero row") {
    const Graph g = make_graph(3, {Triplet(0, 1, 1.0)}, MatX::Ones(3, 1));
    const SpMat p = transition_matrix(g.adjacency);
    CHECK(MatX(p).row(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(MatX(p).row(0).sum() == doctest::Approx(1.0));
  }
  SUBCASE("triangle rows are 0.5 off the diagonal") {
    const Graph g = testutil::triangle(MatX::Ones(3, 1));
    const MatX p(transition_matrix(g.adjacency));
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        CHECK(p(i, j) == doctest::Approx(i == j ? 0.0 : 0.5));
  }
}

TEST_CASE("matrix power") {
  const Graph path = testutil::path3();
  const Graph tri = testutil::triangle(MatX::Ones(3, 1));

  SUBCASE("path squared") {
    MatX expected(3, 3);
    expected << 1, 0, 1, 0, 2, 0, 1, 0, 1;
    CHECK(max_abs_diff(matrix_power(path.adjacency, 2), expected) < 1e-15);
  }
  SUBCASE("first power is the matrix itself") {
    CHECK(max_abs_diff(matrix_power(path.adjacency, 1),
                       MatX(path.adjacency)) == 0.0);
  }
  SUBCASE("triangle squared") {
    const MatX p(matrix_power(tri.adjacency, 2));
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        CHECK(p(i, j) == doctest::Approx(i == j ? 2.0 : 1.0));
  }
  SUBCASE("h must be positive") {
    CHECK_THROWS_AS(matrix_power(path.adjacency, 0), std::invalid_argument);
  }
  SUBCASE("agrees with the dense multiply oracle on random graphs") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
      const Index n = 2 + static_cast<Index>(uniform_below(rng, 11));
      const Graph g =
          reference::random_graph(n, 1, 0.4, rng, (trial % 2) == 1);
      for (int h : {1, 2, 3}) {
        const MatX expected = reference::dense_power(MatX(g.adjacency), h);
        CHECK(max_abs_diff(matrix_power(g.adjacency, h), expected) < 1e-9);
      }
    }
  }
  SUBCASE("preserves symmetry") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      const Graph g = reference::random_graph(9, 1, 0.4, rng, true);
      CHECK(testutil::max_adjacency_asymmetry(matrix_power(g.adjacency, 3)) <
            1e-12);
    }
  }
}

TEST_CASE("off-diagonal transition") {
  const Graph path = testutil::path3();
  const Graph tri = testutil::triangle(MatX::Ones(3, 1));

  SUBCASE("path squared loses the middle row") {
    MatX expected(3, 3);
    expected << 0, 0, 1, 0, 0, 0, 1, 0, 0;
    CHECK(max_abs_diff(off_diagonal_transition(path.adjacency, 2), expected) <
          1e-15);
  }
  SUBCASE("h=1 equals the plain transition matrix on simple graphs") {
    CHECK(max_abs_diff(off_diagonal_transition(path.adjacency, 1),
                       MatX(transition_matrix(path.adjacency))) == 0.0);
  }
  SUBCASE("triangle squared has two 0.5 entries per row") {
    const MatX p(off_diagonal_transition(tri.adjacency, 2));
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        CHECK(p(i, j) == doctest::Approx(i == j ? 0.0 : 0.5));
  }
  SUBCASE("row sums are 0 or 1 and the diagonal is absent") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 2 + static_cast<Index>(uniform_below(rng, 13));
      const Graph g =
          reference::random_graph(n, 1, 0.35, rng, (trial % 2) == 1);
      for (int h : {1, 2, 3}) {
        const SpMat hop = off_diagonal_transition(g.adjacency, h);
        for (Index i = 0; i < hop.outerSize(); ++i) {
          Scalar sum = 0.0;
          for (SpMat::InnerIterator it(hop, i); it; ++it) {
            CHECK(it.row() != it.col());
            sum += it.value();
          }
          if (sum != 0.0) CHECK(std::abs(sum - 1.0) < 1e-12);
        }
        const MatX expected =
            reference::dense_off_diagonal_transition(MatX(g.adjacency), h);
        CHECK(max_abs_diff(hop, expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("graph construction") {
  SUBCASE("self-loops are stripped") {
    const Graph g = make_graph(
        2, {Triplet(0, 0, 3.0), Triplet(0, 1, 1.0)}, MatX::Ones(2, 1));
    CHECK(MatX(g.adjacency).diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.adjacency.nonZeros() == 2);
  }
  SUBCASE("single-direction input is symmetrized") {
    const Graph g = make_graph(2, {Triplet(0, 1, 2.0)}, MatX::Ones(2, 1));
    CHECK(g.adjacency.coeff(0, 1) == 2.0);
    CHECK(g.adjacency.coeff(1, 0) == 2.0);
  }
  SUBCASE("duplicate edges collapse") {
    const Graph g = make_graph(
        2, {Triplet(0, 1, 1.0), Triplet(1, 0, 1.0)}, MatX::Ones(2, 1));
    CHECK(g.adjacency.nonZeros() == 2);
  }
  SUBCASE("explicit zeros are pruned") {
    const Graph g = make_graph(2, {Triplet(0, 1, 0.0)}, MatX::Ones(2, 1));
    CHECK(g.adjacency.nonZeros() == 0);
  }
  SUBCASE("negative weights are rejected") {
    CHECK_THROWS_AS(make_graph(2, {Triplet(0, 1, -1.0)}, MatX::Ones(2, 1)),
                    std::invalid_argument);
  }
  SUBCASE("non-finite features are rejected") {
    MatX bad = MatX::Ones(2, 1);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_graph(2, {}, bad), std::invalid_argument);
  }
  SUBCASE("feature row count must match the node count") {
    CHECK_THROWS_AS(make_graph(3, {}, MatX::Ones(2, 1)),
                    std::invalid_argument);
  }
  SUBCASE("1-indexed edge lists are shifted") {
    const Graph g = graph_from_edge_list(2, {{1, 2, 1.0}}, 1, MatX::Ones(2, 1));
    CHECK(g.adjacency.coeff(0, 1) == 1.0);
  }
}
