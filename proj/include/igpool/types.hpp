#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>

namespace igpool {

using Index = Eigen::Index;
using Scalar = double;

/// Row-oriented sparse matrix of nonnegative reals; the carrier for
/// adjacency matrices, transition matrices, their powers and coarsening
/// matrices. Stored compressed, without duplicate coordinates or explicit
/// zeros.
using SpMat = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Scalar>;

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

}  // namespace igpool
