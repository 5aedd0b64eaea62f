// SPDX-License-Identifier: Apache-2.0
//
// Additive group R^N, represented in matrix form as [ I x ; 0 1 ].

#pragma once

#include <Eigen/Core>

#include "invekf/lie/common.hpp"

namespace invekf {

template <int N, typename Scalar_ = double>
class Euclidean {
  static_assert(N > 0);

 public:
  using Scalar = Scalar_;
  static constexpr int kDim = N;
  static constexpr int kMatrixDim = N + 1;
  static constexpr GroupTag kTag = GroupTag::Euclidean;

  using Tangent = Eigen::Matrix<Scalar, N, 1>;
  using AdjointMatrix = Eigen::Matrix<Scalar, N, N>;
  using MatrixType = Eigen::Matrix<Scalar, N + 1, N + 1>;

  Euclidean() : x_(Tangent::Zero()) {}
  explicit Euclidean(const Tangent& x) : x_(x) {}

  static Euclidean Identity() { return Euclidean(); }
  static Euclidean exp(const Tangent& u) { return Euclidean(u); }
  Tangent log() const { return x_; }

  Euclidean operator*(const Euclidean& o) const { return Euclidean(x_ + o.x_); }
  Euclidean inverse() const { return Euclidean(-x_); }

  AdjointMatrix Ad() const { return AdjointMatrix::Identity(); }
  static AdjointMatrix ad(const Tangent&) { return AdjointMatrix::Zero(); }

  static MatrixType hat(const Tangent& u) {
    MatrixType M = MatrixType::Zero();
    M.template topRightCorner<N, 1>() = u;
    return M;
  }
  static Tangent vee(const MatrixType& M) { return M.template topRightCorner<N, 1>(); }

  static AdjointMatrix dexp_left(const Tangent&) { return AdjointMatrix::Identity(); }
  static AdjointMatrix dexp_right(const Tangent&) { return AdjointMatrix::Identity(); }

  static Scalar rotation_angle(const Tangent&) { return Scalar(0); }

  bool is_valid(Scalar = Scalar(kMembershipTol)) const { return x_.allFinite(); }

  MatrixType matrix() const {
    MatrixType M = MatrixType::Identity();
    M.template topRightCorner<N, 1>() = x_;
    return M;
  }

  const Tangent& vector() const { return x_; }

 private:
  Tangent x_;
};

}  // namespace invekf
