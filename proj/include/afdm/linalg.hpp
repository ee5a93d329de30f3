// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra used by the AFDM pipeline. Everything is
// double precision; the aliases below are the only matrix/vector types the
// rest of the library traffics in.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace afdm {

using cplx = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using CMatrix = DenseMatrix<double>;
using CVector = DenseVector<double>;

/// Raised when operand shapes do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a factorization meets a non-positive-definite or numerically
/// singular matrix. The message names the offending matrix.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::string matrix_name, const std::string& detail);
  const std::string& matrix_name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Reciprocal-condition cutoff: matrices with estimated condition number
/// above this are treated as singular.
inline constexpr double kMaxConditionNumber = 1e12;

/// Builds a row-major matrix from a flat entry list, rejecting non-finite
/// values and size mismatches.
CMatrix make_matrix(Eigen::Index rows, Eigen::Index cols, const std::vector<cplx>& row_major);
CVector make_vector(const std::vector<cplx>& entries);

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename DerivedA, typename DerivedB>
auto matmul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return (a * b).eval();
}

template <typename Derived>
auto hermitian(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint().eval();
}

template <typename Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

/// Cholesky factorization of a Hermitian positive-definite matrix. Throws
/// SingularMatrixError (naming `name`) if a is not Hermitian, not positive
/// definite, or has a condition estimate above kMaxConditionNumber.
Eigen::LLT<CMatrix> factor_hermitian(const CMatrix& a, std::string_view name = "a");

/// Solves a X = b for Hermitian positive-definite a without forming an
/// inverse. `name` identifies a in error messages.
template <typename Derived>
typename Derived::PlainObject solve_hermitian_system(const CMatrix& a, const Eigen::MatrixBase<Derived>& b,
                                                     std::string_view name = "a") {
  if (a.rows() != b.rows()) throw DimensionError("solve_hermitian_system: row mismatch");
  return factor_hermitian(a, name).solve(b);
}

/// Moore-Penrose pseudo-inverse via SVD. Singular values below
/// max(rows, cols) * eps * sigma_max are treated as zero.
CMatrix pseudo_inverse(const CMatrix& a);

/// Largest singular value.
double spectral_norm(const CMatrix& a);

}  // namespace afdm
