#include "igpool/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace igpool {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

std::vector<Edge> read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<Edge> edges;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    std::stringstream ss(stripped);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(path, line_no, "expected 'u, v' or 'u, v, w'");
    Edge e;
    try {
      e.u = std::stol(fields[0]);
      e.v = std::stol(fields[1]);
      e.w = fields.size() == 3 ? std::stod(fields[2]) : 1.0;
    } catch (const std::exception&) {
      throw ParseError(path, line_no, "cannot parse edge fields");
    }
    if (e.u < 1 || e.v < 1)
      throw ParseError(path, line_no, "edge endpoints are 1-indexed");
    if (!std::isfinite(e.w) || e.w < 0.0)
      throw ParseError(path, line_no, "edge weight must be finite and >= 0");
    edges.push_back(e);
  }
  return edges;
}

MatX read_dense_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  Index width = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    std::stringstream ss(stripped);
    std::vector<double> row;
    double value = 0.0;
    while (ss >> value) {
      if (!std::isfinite(value))
        throw ParseError(path, line_no, "non-finite entry");
      row.push_back(value);
    }
    if (!ss.eof())
      throw ParseError(path, line_no, "cannot parse row");
    if (width < 0) width = static_cast<Index>(row.size());
    else if (static_cast<Index>(row.size()) != width)
      throw ParseError(path, line_no, "ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, 0, "empty matrix file");
  MatX m(static_cast<Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index j = 0; j < width; ++j)
      m(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return m;
}

std::string format_edge_list(const SpMat& adjacency) {
  bool unit_weights = true;
  for (Index i = 0; i < adjacency.outerSize() && unit_weights; ++i)
    for (SpMat::InnerIterator it(adjacency, i); it; ++it)
      if (it.value() != 1.0) {
        unit_weights = false;
        break;
      }
  std::string out;
  for (Index i = 0; i < adjacency.outerSize(); ++i)
    for (SpMat::InnerIterator it(adjacency, i); it; ++it) {
      out += std::to_string(it.row() + 1) + ", " + std::to_string(it.col() + 1);
      if (!unit_weights) out += ", " + format_double(it.value());
      out += "\n";
    }
  return out;
}

std::string format_dense_matrix(const MatX& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += " ";
      out += format_double(m(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string format_vector(const VecX& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) out += format_double(v[i]) + "\n";
  return out;
}

std::string format_index_list(const std::vector<Index>& indices) {
  std::string out;
  for (Index i : indices) out += std::to_string(i) + "\n";
  return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError(tmp, 0, "cannot open for writing");
    out << content;
    if (!out) throw ParseError(tmp, 0, "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ParseError(path, 0, "rename failed: " + ec.message());
}

}  // namespace igpool
