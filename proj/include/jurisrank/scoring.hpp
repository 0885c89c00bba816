#pragma once

#include <string>

#include <Eigen/Core>

#include "jurisrank/errors.hpp"

namespace jurisrank {

/// Inner product of two vectors given as any Eigen expression (row or
/// column shaped). Throws DimensionError when the lengths differ.
template <typename DerivedQ, typename DerivedP>
typename DerivedQ::Scalar dot_score(const Eigen::MatrixBase<DerivedQ>& q,
                                    const Eigen::MatrixBase<DerivedP>& p) {
  if (q.size() != p.size()) {
    throw DimensionError("dot product of lengths " + std::to_string(q.size()) + " and " +
                         std::to_string(p.size()));
  }
  return q.reshaped().dot(p.reshaped());
}

/// Copy of `m` with every non-zero row scaled to unit Euclidean norm.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> rows_normalized(
    const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out = m;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const auto norm = out.row(r).norm();
    if (norm > 0) out.row(r) /= norm;
  }
  return out;
}

/// Late-interaction relevance: for each query token row, the best inner
/// product with any document token row, summed over query rows. With
/// `normalize` rows are unit-normalised first, turning inner products into
/// cosines.
template <typename DerivedQ, typename DerivedD>
typename DerivedQ::Scalar maxsim_score(const Eigen::MatrixBase<DerivedQ>& query,
                                       const Eigen::MatrixBase<DerivedD>& doc,
                                       bool normalize = true) {
  if (query.cols() != doc.cols()) {
    throw DimensionError("query dim " + std::to_string(query.cols()) + " != document dim " +
                         std::to_string(doc.cols()));
  }
  if (query.rows() < 1 || doc.rows() < 1) {
    throw DimensionError("maxsim needs at least one query and one document row");
  }
  if (normalize) {
    return (rows_normalized(query) * rows_normalized(doc).transpose()).rowwise().maxCoeff().sum();
  }
  return (query * doc.transpose()).rowwise().maxCoeff().sum();
}

}  // namespace jurisrank
