// SPDX-License-Identifier: Apache-2.0

#include "afdm/linalg.hpp"

#include <algorithm>
#include <limits>

namespace afdm {

SingularMatrixError::SingularMatrixError(std::string matrix_name, const std::string& detail)
    : std::runtime_error("singular matrix '" + matrix_name + "': " + detail),
      name_(std::move(matrix_name)) {}

CMatrix make_matrix(Eigen::Index rows, Eigen::Index cols, const std::vector<cplx>& row_major) {
  if (rows <= 0 || cols <= 0) throw DimensionError("make_matrix: dimensions must be positive");
  if (static_cast<Eigen::Index>(row_major.size()) != rows * cols) {
    throw DimensionError("make_matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(row_major.size()));
  }
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row_major[static_cast<size_t>(r * cols + c)];
  if (!m.allFinite()) throw std::invalid_argument("make_matrix: non-finite entry");
  return m;
}

CVector make_vector(const std::vector<cplx>& entries) {
  if (entries.empty()) throw DimensionError("make_vector: length must be positive");
  CVector v = Eigen::Map<const CVector>(entries.data(), static_cast<Eigen::Index>(entries.size()));
  if (!v.allFinite()) throw std::invalid_argument("make_vector: non-finite entry");
  return v;
}

Eigen::LLT<CMatrix> factor_hermitian(const CMatrix& a, std::string_view name) {
  if (a.rows() != a.cols()) throw DimensionError("solve_hermitian_system: '" + std::string(name) + "' is not square");
  if (!a.allFinite()) throw SingularMatrixError(std::string(name), "non-finite entries");
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  if ((a - a.adjoint()).norm() > 1e-10 * scale) {
    throw SingularMatrixError(std::string(name), "not Hermitian");
  }
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw SingularMatrixError(std::string(name), "not positive definite");
  const double rcond = llt.rcond();
  if (!(rcond * kMaxConditionNumber > 1.0)) {
    throw SingularMatrixError(std::string(name),
                              "condition estimate " + std::to_string(1.0 / rcond) + " exceeds 1e12");
  }
  return llt;
}

CMatrix pseudo_inverse(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

double spectral_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace afdm
