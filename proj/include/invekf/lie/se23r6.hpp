// SPDX-License-Identifier: Apache-2.0
//
// Direct product SE_2(3) x R^6, the state space of the biased INS.
//
// Tangent coordinates (15): (omega, nu, rho, b_omega, b_a). The first nine
// follow SE23; the last six live in the additive factor, so exp/log, Ad and
// both exp-Jacobians act as the identity on that block.

#pragma once

#include <Eigen/Core>

#include "invekf/lie/common.hpp"
#include "invekf/lie/se23.hpp"

namespace invekf {

template <typename Scalar_ = double>
class SE23R6 {
 public:
  using Scalar = Scalar_;
  static constexpr int kDim = 15;
  static constexpr GroupTag kTag = GroupTag::ProductSE23R6;

  using Nav = SE23<Scalar>;
  using Tangent = Eigen::Matrix<Scalar, 15, 1>;
  using AdjointMatrix = Eigen::Matrix<Scalar, 15, 15>;
  using MatrixType = typename Nav::MatrixType;
  using Euclidean6 = Eigen::Matrix<Scalar, 6, 1>;

  /// Lie-algebra element: the 5x5 SE23 part plus the R^6 component.
  struct AlgebraElement {
    MatrixType nav;
    Euclidean6 euclidean;
  };

  SE23R6() : bias_(Euclidean6::Zero()) {}
  SE23R6(const Nav& nav, const Euclidean6& euclidean) : nav_(nav), bias_(euclidean) {}

  static SE23R6 Identity() { return SE23R6(); }

  static SE23R6 exp(const Tangent& u) {
    return SE23R6(Nav::exp(u.template head<9>()), u.template tail<6>());
  }

  Tangent log() const {
    Tangent u;
    u << nav_.log(), bias_;
    return u;
  }

  SE23R6 operator*(const SE23R6& o) const { return SE23R6(nav_ * o.nav_, bias_ + o.bias_); }
  SE23R6 inverse() const { return SE23R6(nav_.inverse(), -bias_); }

  AdjointMatrix Ad() const {
    AdjointMatrix A = AdjointMatrix::Identity();
    A.template topLeftCorner<9, 9>() = nav_.Ad();
    return A;
  }

  static AdjointMatrix ad(const Tangent& u) {
    AdjointMatrix A = AdjointMatrix::Zero();
    A.template topLeftCorner<9, 9>() = Nav::ad(u.template head<9>());
    return A;
  }

  static AlgebraElement hat(const Tangent& u) {
    return {Nav::hat(u.template head<9>()), u.template tail<6>()};
  }

  static Tangent vee(const AlgebraElement& a) {
    Tangent u;
    u << Nav::vee(a.nav), a.euclidean;
    return u;
  }

  static AdjointMatrix dexp_left(const Tangent& u) {
    AdjointMatrix J = AdjointMatrix::Identity();
    J.template topLeftCorner<9, 9>() = Nav::dexp_left(u.template head<9>());
    return J;
  }

  static AdjointMatrix dexp_right(const Tangent& u) {
    AdjointMatrix J = AdjointMatrix::Identity();
    J.template topLeftCorner<9, 9>() = Nav::dexp_right(u.template head<9>());
    return J;
  }

  static Scalar rotation_angle(const Tangent& u) { return u.template head<3>().norm(); }

  bool is_valid(Scalar tol = Scalar(kMembershipTol)) const {
    return nav_.is_valid(tol) && bias_.allFinite();
  }

  MatrixType matrix() const { return nav_.matrix(); }
  const Nav& nav() const { return nav_; }
  const Euclidean6& euclidean() const { return bias_; }

 private:
  Nav nav_;
  Euclidean6 bias_;
};

using SE23R6d = SE23R6<double>;

}  // namespace invekf
