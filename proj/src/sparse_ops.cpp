#include "igpool/sparse_ops.hpp"

#include <stdexcept>

namespace igpool {

VecX degree_vector(const SpMat& adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw std::invalid_argument("degree_vector: matrix must be square");
  return adjacency * VecX::Ones(adjacency.cols());
}

SpMat row_normalized(const SpMat& m) {
  SpMat r = m;
  for (Index i = 0; i < r.outerSize(); ++i) {
    Scalar sum = 0.0;
    for (SpMat::InnerIterator it(r, i); it; ++it) sum += it.value();
    if (sum > Scalar(0))
      for (SpMat::InnerIterator it(r, i); it; ++it) it.valueRef() /= sum;
  }
  return r;
}

SpMat transition_matrix(const SpMat& adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw std::invalid_argument("transition_matrix: matrix must be square");
  return row_normalized(adjacency);
}

SpMat matrix_power(const SpMat& adjacency, int h) {
  if (h < 1) throw std::invalid_argument("matrix_power: h must be >= 1");
  if (adjacency.rows() != adjacency.cols())
    throw std::invalid_argument("matrix_power: matrix must be square");
  SpMat result = adjacency;
  for (int i = 1; i < h; ++i) result = result * adjacency;
  result.makeCompressed();
  return result;
}

SpMat strip_diagonal(const SpMat& m) {
  SpMat r = m;
  r.prune([](Index i, Index j, Scalar) { return i != j; });
  r.makeCompressed();
  return r;
}

SpMat off_diagonal_transition(const SpMat& adjacency, int h) {
  return row_normalized(strip_diagonal(matrix_power(adjacency, h)));
}

}  // namespace igpool
