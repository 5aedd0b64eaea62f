// SPDX-License-Identifier: Apache-2.0
//
// Rotation group SO(3). Tangent coordinates are the rotation vector.

#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "invekf/errors.hpp"
#include "invekf/lie/common.hpp"

namespace invekf {

namespace so3 {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

/// Rodrigues formula.
template <typename Scalar>
Mat3<Scalar> exp(const Vec3<Scalar>& w) {
  const Scalar theta2 = w.squaredNorm();
  const Scalar theta = std::sqrt(theta2);
  const Mat3<Scalar> W = skew(w);
  Scalar a, b;  // sin(t)/t, (1 - cos t)/t^2
  if (theta < Scalar(kSmallAngle)) {
    a = Scalar(1) - theta2 / Scalar(6);
    b = Scalar(0.5) - theta2 / Scalar(24);
  } else {
    const Scalar half_sin = std::sin(theta / Scalar(2));
    a = std::sin(theta) / theta;
    b = Scalar(2) * half_sin * half_sin / theta2;
  }
  return Mat3<Scalar>::Identity() + a * W + b * W * W;
}

/// Rotation angle of R in [0, pi].
template <typename Derived>
typename Derived::Scalar angle(const Eigen::MatrixBase<Derived>& R) {
  using Scalar = typename Derived::Scalar;
  const Scalar c = (R.trace() - Scalar(1)) / Scalar(2);
  const Scalar s = (unskew(R - R.transpose()) / Scalar(2)).norm();
  return std::atan2(s, c);
}

/// Inverse of exp on rotations with angle < pi - kCutLocusMargin.
template <typename Derived>
Vec3<typename Derived::Scalar> log(const Eigen::MatrixBase<Derived>& R) {
  using Scalar = typename Derived::Scalar;
  const Scalar c = (R.trace() - Scalar(1)) / Scalar(2);
  const Vec3<Scalar> s = unskew(R - R.transpose()) / Scalar(2);  // sin(theta) * axis
  const Scalar sin_theta = s.norm();
  const Scalar theta = std::atan2(sin_theta, c);

  if (theta >= Scalar(std::numbers::pi) - Scalar(kCutLocusMargin)) {
    throw DomainError("SO3 log: rotation angle " + std::to_string(double(theta)) +
                      " is on the cut locus");
  }
  if (theta < Scalar(kSmallAngle)) {
    return (Scalar(1) + theta * theta / Scalar(6)) * s;
  }
  if (theta > Scalar(3)) {
    // sin(theta) is small; recover the axis from the symmetric part instead.
    const Mat3<Scalar> B = (R + R.transpose()) / Scalar(2) - c * Mat3<Scalar>::Identity();
    int j = 0;
    B.diagonal().maxCoeff(&j);
    Vec3<Scalar> axis = B.col(j) / std::sqrt(B(j, j) * (Scalar(1) - c));
    if (axis.dot(s) < Scalar(0)) {
      axis = -axis;
    }
    return theta * axis.normalized();
  }
  return (theta / sin_theta) * s;
}

/// Left-trivialised differential of exp: exp(w + e) = exp(w) exp(J e) + O(e^2).
/// (Usually called the "right Jacobian" of SO(3).)
template <typename Scalar>
Mat3<Scalar> dexp_left(const Vec3<Scalar>& w) {
  const Scalar theta2 = w.squaredNorm();
  const Scalar theta = std::sqrt(theta2);
  const Mat3<Scalar> W = skew(w);
  Scalar b, c;  // (1 - cos t)/t^2, (t - sin t)/t^3
  if (theta < Scalar(kSmallAngle)) {
    b = Scalar(0.5) - theta2 / Scalar(24);
    c = Scalar(1) / Scalar(6) - theta2 / Scalar(120);
  } else {
    const Scalar half_sin = std::sin(theta / Scalar(2));
    b = Scalar(2) * half_sin * half_sin / theta2;
    c = (theta - std::sin(theta)) / (theta2 * theta);
  }
  return Mat3<Scalar>::Identity() - b * W + c * W * W;
}

/// Right-trivialised differential of exp: exp(w + e) = exp(J e) exp(w) + O(e^2).
/// (Usually called the "left Jacobian" of SO(3); it also maps the translational
/// algebra coordinates of SE_2(3) to the group.)
template <typename Scalar>
Mat3<Scalar> dexp_right(const Vec3<Scalar>& w) {
  return dexp_left<Scalar>(-w);
}

/// Inverse of dexp_right, in closed form.
template <typename Scalar>
Mat3<Scalar> dexp_right_inverse(const Vec3<Scalar>& w) {
  const Scalar theta2 = w.squaredNorm();
  const Scalar theta = std::sqrt(theta2);
  const Mat3<Scalar> W = skew(w);
  Scalar d;  // 1/t^2 - (1 + cos t) / (2 t sin t)
  if (theta < Scalar(kSmallAngle)) {
    d = Scalar(1) / Scalar(12) + theta2 / Scalar(720);
  } else {
    d = Scalar(1) / theta2 - (Scalar(1) + std::cos(theta)) / (Scalar(2) * theta * std::sin(theta));
  }
  return Mat3<Scalar>::Identity() - Scalar(0.5) * W + d * W * W;
}

}  // namespace so3

template <typename Scalar_ = double>
class SO3 {
 public:
  using Scalar = Scalar_;
  static constexpr int kDim = 3;
  static constexpr int kMatrixDim = 3;
  static constexpr GroupTag kTag = GroupTag::SO3;

  using Tangent = Eigen::Matrix<Scalar, 3, 1>;
  using AdjointMatrix = Eigen::Matrix<Scalar, 3, 3>;
  using MatrixType = Eigen::Matrix<Scalar, 3, 3>;

  SO3() : R_(MatrixType::Identity()) {}

  /// Checked construction; throws ContractViolation if R is not a rotation.
  static SO3 from_matrix(const MatrixType& R) {
    SO3 g = unchecked(R);
    if (!g.is_valid()) {
      throw ContractViolation("SO3: matrix is not a proper rotation");
    }
    return g;
  }

  static SO3 unchecked(const MatrixType& R) {
    SO3 g;
    g.R_ = R;
    return g;
  }

  static SO3 Identity() { return SO3(); }

  static SO3 exp(const Tangent& w) { return unchecked(so3::exp<Scalar>(w)); }
  Tangent log() const { return so3::log(R_); }

  SO3 operator*(const SO3& other) const { return unchecked(R_ * other.R_); }
  SO3 inverse() const { return unchecked(R_.transpose()); }

  Tangent act(const Tangent& x) const { return R_ * x; }

  AdjointMatrix Ad() const { return R_; }
  static AdjointMatrix ad(const Tangent& w) { return skew(w); }

  static MatrixType hat(const Tangent& w) { return skew(w); }
  static Tangent vee(const MatrixType& W) { return unskew(W); }

  static AdjointMatrix dexp_left(const Tangent& w) { return so3::dexp_left<Scalar>(w); }
  static AdjointMatrix dexp_right(const Tangent& w) { return so3::dexp_right<Scalar>(w); }

  static Scalar rotation_angle(const Tangent& w) { return w.norm(); }

  bool is_valid(Scalar tol = Scalar(kMembershipTol)) const {
    if (!R_.allFinite()) {
      return false;
    }
    const Scalar orth = (R_.transpose() * R_ - MatrixType::Identity()).norm();
    return orth <= tol && std::abs(R_.determinant() - Scalar(1)) <= tol;
  }

  const MatrixType& matrix() const { return R_; }

 private:
  MatrixType R_;
};

using SO3d = SO3<double>;

}  // namespace invekf
