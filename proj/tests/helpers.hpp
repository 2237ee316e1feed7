#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "igpool/graph.hpp"

namespace testutil {

using igpool::Graph;
using igpool::Index;
using igpool::MatX;
using igpool::Scalar;
using igpool::SpMat;
using igpool::Triplet;
using igpool::VecX;

inline Graph path3(MatX features = MatX::Ones(3, 1)) {
  return igpool::make_graph(3, {Triplet(0, 1, 1.0), Triplet(1, 2, 1.0)},
                            std::move(features));
}

inline Graph triangle(MatX features) {
  return igpool::make_graph(
      3, {Triplet(0, 1, 1.0), Triplet(0, 2, 1.0), Triplet(1, 2, 1.0)},
      std::move(features));
}

inline MatX column(std::initializer_list<double> values) {
  MatX m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

inline double max_abs_diff(const SpMat& actual, const MatX& expected) {
  return (MatX(actual) - expected).cwiseAbs().maxCoeff();
}

inline double max_adjacency_asymmetry(const SpMat& m) {
  const MatX dense(m);
  return (dense - dense.transpose()).cwiseAbs().maxCoeff();
}

/// Temporary directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("igpool_" + tag + "_" + std::to_string(++counter) + "_" +
             std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(path_ / name);
    out << content;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
