#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "igpool/dataset.hpp"

using namespace igpool;
using testutil::TempDir;

namespace {

// two triangles with distinct labels; standard both-directions edge lines
void write_two_triangles(const TempDir& dir, const std::string& name) {
  dir.write(name + "_A.txt",
            "1, 2\n2, 1\n1, 3\n3, 1\n2, 3\n3, 2\n"
            "4, 5\n5, 4\n4, 6\n6, 4\n5, 6\n6, 5\n");
  dir.write(name + "_graph_indicator.txt", "1\n1\n1\n2\n2\n2\n");
  dir.write(name + "_graph_labels.txt", "1\n-1\n");
}

}  // namespace

TEST_CASE("tu loader basics") {
  TempDir dir("tu");
  write_two_triangles(dir, "toy");
  const Dataset ds = load_tu_dataset(dir.path().string(), "toy");

  CHECK(ds.graphs.size() == 2);
  CHECK(ds.num_classes == 2);
  CHECK(ds.feature_kind == FeatureKind::ConstantOne);
  CHECK(ds.feature_dim() == 1);
  for (const auto& g : ds.graphs) {
    CHECK(g.num_nodes() == 3);
    CHECK(g.adjacency.nonZeros() == 6);
    CHECK(g.features.minCoeff() == 1.0);
  }
  // labels {-1, 1} remap in sorted order
  CHECK(ds.graphs[0].label == 1);
  CHECK(ds.graphs[1].label == 0);
  CHECK(ds.class_counts() == std::vector<Index>{1, 1});
}

TEST_CASE("tu loader symmetrizes and deduplicates") {
  TempDir dir("tu");
  // one undirected edge stated twice plus a self-loop
  dir.write("toy_A.txt", "1, 2\n2, 1\n1, 1\n");
  dir.write("toy_graph_indicator.txt", "1\n1\n");
  dir.write("toy_graph_labels.txt", "7\n");
  const Dataset ds = load_tu_dataset(dir.path().string(), "toy");
  REQUIRE(ds.graphs.size() == 1);
  CHECK(ds.graphs[0].adjacency.nonZeros() == 2);
  CHECK(ds.graphs[0].adjacency.coeff(0, 1) == 1.0);
  CHECK(ds.graphs[0].adjacency.coeff(1, 0) == 1.0);
  CHECK(MatX(ds.graphs[0].adjacency).diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tu loader feature construction") {
  SUBCASE("node labels become one-hot columns") {
    TempDir dir("tu");
    write_two_triangles(dir, "toy");
    dir.write("toy_node_labels.txt", "3\n7\n3\n7\n3\n7\n");
    const Dataset ds = load_tu_dataset(dir.path().string(), "toy");
    CHECK(ds.feature_kind == FeatureKind::OneHotNodeLabels);
    CHECK(ds.feature_dim() == 2);
    CHECK(ds.graphs[0].features(0, 0) == 1.0);  // label 3 -> column 0
    CHECK(ds.graphs[0].features(0, 1) == 0.0);
    CHECK(ds.graphs[0].features(1, 0) == 0.0);  // label 7 -> column 1
    CHECK(ds.graphs[0].features(1, 1) == 1.0);
  }
  SUBCASE("attributes are appended after the one-hot block") {
    TempDir dir("tu");
    write_two_triangles(dir, "toy");
    dir.write("toy_node_labels.txt", "1\n1\n2\n2\n1\n2\n");
    dir.write("toy_node_attributes.txt",
              "0.5, 1.0\n-1.25, 0.0\n3.5, 2.0\n0.0, 0.0\n1.0, 1.0\n2.0, 2.0\n");
    const Dataset ds = load_tu_dataset(dir.path().string(), "toy");
    CHECK(ds.feature_dim() == 4);
    CHECK(ds.graphs[0].features(0, 0) == 1.0);
    CHECK(ds.graphs[0].features(0, 2) == 0.5);
    CHECK(ds.graphs[0].features(1, 2) == -1.25);
  }
  SUBCASE("attributes alone give continuous features") {
    TempDir dir("tu");
    write_two_triangles(dir, "toy");
    dir.write("toy_node_attributes.txt", "1\n2\n3\n4\n5\n6\n");
    const Dataset ds = load_tu_dataset(dir.path().string(), "toy");
    CHECK(ds.feature_kind == FeatureKind::ContinuousAttributes);
    CHECK(ds.feature_dim() == 1);
    CHECK(ds.graphs[1].features(0, 0) == 4.0);
  }
}

TEST_CASE("tu loader error reporting") {
  SUBCASE("missing mandatory file") {
    TempDir dir("tu");
    dir.write("toy_A.txt", "1, 2\n");
    dir.write("toy_graph_indicator.txt", "1\n1\n");
    // no graph labels
    CHECK_THROWS_WITH_AS(load_tu_dataset(dir.path().string(), "toy"),
                         doctest::Contains("graph_labels"), ParseError);
  }
  SUBCASE("zero graph id violates 1-indexing") {
    TempDir dir("tu");
    dir.write("toy_A.txt", "1, 2\n");
    dir.write("toy_graph_indicator.txt", "1\n0\n");
    dir.write("toy_graph_labels.txt", "1\n");
    try {
      load_tu_dataset(dir.path().string(), "toy");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("graph_indicator") !=
            std::string::npos);
      CHECK(std::string(e.what()).find("1-indexed") != std::string::npos);
    }
  }
  SUBCASE("edge endpoint out of range") {
    TempDir dir("tu");
    dir.write("toy_A.txt", "1, 2\n2, 5\n");
    dir.write("toy_graph_indicator.txt", "1\n1\n");
    dir.write("toy_graph_labels.txt", "1\n");
    try {
      load_tu_dataset(dir.path().string(), "toy");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
  }
  SUBCASE("edges may not join different graphs") {
    TempDir dir("tu");
    dir.write("toy_A.txt", "1, 2\n");
    dir.write("toy_graph_indicator.txt", "1\n2\n");
    dir.write("toy_graph_labels.txt", "1\n2\n");
    CHECK_THROWS_WITH_AS(load_tu_dataset(dir.path().string(), "toy"),
                         doctest::Contains("different graphs"), ParseError);
  }
  SUBCASE("label count must match the graph count") {
    TempDir dir("tu");
    dir.write("toy_A.txt", "1, 2\n");
    dir.write("toy_graph_indicator.txt", "1\n1\n");
    dir.write("toy_graph_labels.txt", "1\n2\n");
    CHECK_THROWS_AS(load_tu_dataset(dir.path().string(), "toy"), ParseError);
  }
  SUBCASE("garbage tokens carry a line number") {
    TempDir dir("tu");
    dir.write("toy_A.txt", "1, banana\n");
    dir.write("toy_graph_indicator.txt", "1\n1\n");
    dir.write("toy_graph_labels.txt", "1\n");
    try {
      load_tu_dataset(dir.path().string(), "toy");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
}

// Runs only when a TU-format MUTAG directory is available; the acceptance
// suite documents where to put it.
TEST_CASE("mutag statistics") {
  const char* env = std::getenv("IGPOOL_MUTAG_DIR");
  std::filesystem::path dir = env ? std::filesystem::path(env)
                                  : std::filesystem::path("data") / "MUTAG";
  if (!std::filesystem::exists(dir / "MUTAG_A.txt")) {
    MESSAGE("MUTAG not present, skipping (set IGPOOL_MUTAG_DIR)");
    return;
  }
  const Dataset ds = load_tu_dataset(dir.string(), "MUTAG");
  CHECK(ds.graphs.size() == 188);
  CHECK(ds.num_classes == 2);
  CHECK(ds.average_node_count() == doctest::Approx(17.93).epsilon(0.001));
  const auto counts = ds.class_counts();
  CHECK(counts[0] + counts[1] == 188);
}
