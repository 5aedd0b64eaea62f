// SPDX-License-Identifier: Apache-2.0
//
// Extended pose group SE_2(3).
//
// Matrix form            Tangent coordinates (9)
//   [ R  v  p ]            (omega, nu, rho)
//   [ 0  1  0 ]            omega: rotation, nu: velocity column,
//   [ 0  0  1 ]            rho: position column

#pragma once

#include <Eigen/Core>

#include "invekf/lie/common.hpp"
#include "invekf/lie/so3.hpp"

namespace invekf {

template <typename Scalar_ = double>
class SE23 {
 public:
  using Scalar = Scalar_;
  static constexpr int kDim = 9;
  static constexpr int kMatrixDim = 5;
  static constexpr GroupTag kTag = GroupTag::SE23;

  using Tangent = Eigen::Matrix<Scalar, 9, 1>;
  using AdjointMatrix = Eigen::Matrix<Scalar, 9, 9>;
  using MatrixType = Eigen::Matrix<Scalar, 5, 5>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

  SE23() : R_(Matrix3::Identity()), v_(Vector3::Zero()), p_(Vector3::Zero()) {}

  SE23(const SO3<Scalar>& R, const Vector3& v, const Vector3& p) : R_(R.matrix()), v_(v), p_(p) {}

  /// Checked construction from the 5x5 matrix.
  static SE23 from_matrix(const MatrixType& M) {
    SE23 g;
    g.R_ = M.template topLeftCorner<3, 3>();
    g.v_ = M.template block<3, 1>(0, 3);
    g.p_ = M.template block<3, 1>(0, 4);
    const Scalar tail =
        (M.template bottomRows<2>() - MatrixType::Identity().template bottomRows<2>()).norm();
    if (!g.is_valid() || !(tail <= Scalar(kMembershipTol))) {
      throw ContractViolation("SE23: matrix is not an extended pose");
    }
    return g;
  }

  static SE23 Identity() { return SE23(); }

  static SE23 exp(const Tangent& u) {
    const Vector3 w = u.template head<3>();
    const Matrix3 V = so3::dexp_right<Scalar>(w);
    SE23 g;
    g.R_ = so3::exp<Scalar>(w);
    g.v_ = V * u.template segment<3>(3);
    g.p_ = V * u.template segment<3>(6);
    return g;
  }

  Tangent log() const {
    const Vector3 w = so3::log(R_);
    const Matrix3 Vinv = so3::dexp_right_inverse<Scalar>(w);
    Tangent u;
    u << w, Vinv * v_, Vinv * p_;
    return u;
  }

  SE23 operator*(const SE23& o) const {
    SE23 g;
    g.R_ = R_ * o.R_;
    g.v_ = R_ * o.v_ + v_;
    g.p_ = R_ * o.p_ + p_;
    return g;
  }

  SE23 inverse() const {
    SE23 g;
    g.R_ = R_.transpose();
    g.v_ = -(g.R_ * v_);
    g.p_ = -(g.R_ * p_);
    return g;
  }

  AdjointMatrix Ad() const {
    AdjointMatrix A = AdjointMatrix::Zero();
    A.template block<3, 3>(0, 0) = R_;
    A.template block<3, 3>(3, 0) = skew(v_) * R_;
    A.template block<3, 3>(3, 3) = R_;
    A.template block<3, 3>(6, 0) = skew(p_) * R_;
    A.template block<3, 3>(6, 6) = R_;
    return A;
  }

  static AdjointMatrix ad(const Tangent& u) {
    AdjointMatrix A = AdjointMatrix::Zero();
    const Matrix3 W = skew<Scalar>(u.template head<3>());
    A.template block<3, 3>(0, 0) = W;
    A.template block<3, 3>(3, 0) = skew<Scalar>(u.template segment<3>(3));
    A.template block<3, 3>(3, 3) = W;
    A.template block<3, 3>(6, 0) = skew<Scalar>(u.template segment<3>(6));
    A.template block<3, 3>(6, 6) = W;
    return A;
  }

  static MatrixType hat(const Tangent& u) {
    MatrixType M = MatrixType::Zero();
    M.template topLeftCorner<3, 3>() = skew<Scalar>(u.template head<3>());
    M.template block<3, 1>(0, 3) = u.template segment<3>(3);
    M.template block<3, 1>(0, 4) = u.template segment<3>(6);
    return M;
  }

  static Tangent vee(const MatrixType& M) {
    Tangent u;
    u << unskew(M.template topLeftCorner<3, 3>()), M.template block<3, 1>(0, 3),
        M.template block<3, 1>(0, 4);
    return u;
  }

  static AdjointMatrix dexp_left(const Tangent& u) { return dexp_series(ad(u), Scalar(-1)); }
  static AdjointMatrix dexp_right(const Tangent& u) { return dexp_series(ad(u), Scalar(1)); }

  static Scalar rotation_angle(const Tangent& u) { return u.template head<3>().norm(); }

  bool is_valid(Scalar tol = Scalar(kMembershipTol)) const {
    return v_.allFinite() && p_.allFinite() && SO3<Scalar>::unchecked(R_).is_valid(tol);
  }

  MatrixType matrix() const {
    MatrixType M = MatrixType::Identity();
    M.template topLeftCorner<3, 3>() = R_;
    M.template block<3, 1>(0, 3) = v_;
    M.template block<3, 1>(0, 4) = p_;
    return M;
  }

  const Matrix3& rotation() const { return R_; }
  const Vector3& velocity() const { return v_; }
  const Vector3& position() const { return p_; }

 private:
  Matrix3 R_;
  Vector3 v_;
  Vector3 p_;
};

using SE23d = SE23<double>;

}  // namespace invekf
