// SPDX-License-Identifier: Apache-2.0
//
// Helpers for symmetric positive-definite matrices.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "invekf/errors.hpp"

namespace invekf {

// Relative eigenvalue floor: eigenvalues below kEigenFloor times the largest
// one are clamped before taking square roots or logs.
inline constexpr double kEigenFloor = 1e-14;

template <typename Derived>
typename Derived::PlainObject symmetrize(const Eigen::MatrixBase<Derived>& A) {
  return (A + A.transpose()) / typename Derived::Scalar(2);
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& A, typename Derived::Scalar tol = 1e-12) {
  using Scalar = typename Derived::Scalar;
  return (A - A.transpose()).norm() <= tol * std::max(Scalar(1), A.norm());
}

template <typename Derived>
bool is_spd(const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() != A.cols() || !A.allFinite() || !is_symmetric(A)) {
    return false;
  }
  Eigen::LLT<typename Derived::PlainObject> llt(A);
  return llt.info() == Eigen::Success;
}

/// f(A) for symmetric A via eigendecomposition, eigenvalues floored relative to the largest.
template <typename Derived, typename Fn>
typename Derived::PlainObject spd_function(const Eigen::MatrixBase<Derived>& A, Fn&& f) {
  using Plain = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<Plain> eig(symmetrize(A));
  if (eig.info() != Eigen::Success) {
    throw NumericError("spd_function: eigendecomposition failed");
  }
  auto values = eig.eigenvalues().eval();
  const Scalar floor = Scalar(kEigenFloor) * std::max(values.cwiseAbs().maxCoeff(),
                                                      std::numeric_limits<Scalar>::min());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values(i) = f(std::max(values(i), floor));
  }
  return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

template <typename Derived>
typename Derived::PlainObject spd_sqrt(const Eigen::MatrixBase<Derived>& A) {
  return spd_function(A, [](auto x) { return std::sqrt(x); });
}

template <typename Derived>
typename Derived::PlainObject spd_inverse_sqrt(const Eigen::MatrixBase<Derived>& A) {
  return spd_function(A, [](auto x) { return 1 / std::sqrt(x); });
}

template <typename Derived>
typename Derived::PlainObject spd_log(const Eigen::MatrixBase<Derived>& A) {
  return spd_function(A, [](auto x) { return std::log(x); });
}

/// Affine-invariant Riemannian distance || log(A^-1/2 B A^-1/2) ||_F.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar airm_distance(const Eigen::MatrixBase<DerivedA>& A,
                                        const Eigen::MatrixBase<DerivedB>& B) {
  using Plain = typename DerivedA::PlainObject;
  using Scalar = typename DerivedA::Scalar;
  if (!is_spd(A) || !is_spd(B)) {
    throw ContractViolation("airm_distance: arguments must be symmetric positive definite");
  }
  const Plain a_isqrt = spd_inverse_sqrt(A);
  const Plain M = symmetrize(a_isqrt * B * a_isqrt);
  Eigen::SelfAdjointEigenSolver<Plain> eig(M, Eigen::EigenvaluesOnly);
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    const Scalar l = std::log(std::max(eig.eigenvalues()(i), Scalar(kEigenFloor)));
    sum += l * l;
  }
  return std::sqrt(sum);
}

}  // namespace invekf
