// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <string>

#include "invekf/errors.hpp"

namespace invekf {

enum class GroupTag { SO3, SE23, ProductSE23R6, Euclidean };

inline const char* to_string(GroupTag tag) {
  switch (tag) {
    case GroupTag::SO3:
      return "SO3";
    case GroupTag::SE23:
      return "SE23";
    case GroupTag::ProductSE23R6:
      return "SE23xR6";
    case GroupTag::Euclidean:
      return "Euclidean";
  }
  return "?";
}

// Below this rotation angle exp/log/Jacobians switch to their Taylor expansions.
inline constexpr double kSmallAngle = 1e-6;

// log refuses rotations whose angle is within this distance of pi.
inline constexpr double kCutLocusMargin = 1e-9;

// Tolerance used by the group-membership checks.
inline constexpr double kMembershipTol = 1e-12;

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> skew(const Eigen::Matrix<Scalar, 3, 1>& v) {
  Eigen::Matrix<Scalar, 3, 3> s;
  // clang-format off
  s << Scalar(0), -v.z(),     v.y(),
       v.z(),     Scalar(0), -v.x(),
      -v.y(),     v.x(),      Scalar(0);
  // clang-format on
  return s;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 1> unskew(const Eigen::MatrixBase<Derived>& s) {
  return {s(2, 1), s(0, 2), s(1, 0)};
}

/// Truncated power series sum_k c_k * ad^k with c_k = sign^k / (k+1)!.
///
/// sign = -1 gives the left-trivialised differential of exp, sign = +1 the
/// right-trivialised one. The series is entire, so it converges for every ad;
/// terms are accumulated until their Frobenius norm drops below 1e-14.
template <typename Matrix>
Matrix dexp_series(const Matrix& ad, typename Matrix::Scalar sign) {
  using Scalar = typename Matrix::Scalar;
  constexpr int kMaxTerms = 400;
  Matrix result = Matrix::Identity(ad.rows(), ad.cols());
  Matrix term = result;
  for (int k = 1; k < kMaxTerms; ++k) {
    term = (term * ad) * (sign / Scalar(k + 1));
    result += term;
    if (term.norm() < Scalar(1e-14)) {
      return result;
    }
  }
  throw NumericError("dexp series did not converge (|ad| = " + std::to_string(double(ad.norm())) +
                     ")");
}

/// Interface shared by every group in the library.
///
/// Tangent coordinates follow one fixed wedge/vee convention per group; see the
/// group headers for the block ordering.
template <typename G>
concept LieGroup = requires(const G& g, const typename G::Tangent& u) {
  typename G::Scalar;
  typename G::Tangent;
  typename G::AdjointMatrix;
  { G::kDim } -> std::convertible_to<int>;
  { G::kTag } -> std::convertible_to<GroupTag>;
  { G::Identity() } -> std::same_as<G>;
  { g * g } -> std::same_as<G>;
  { g.inverse() } -> std::same_as<G>;
  { G::exp(u) } -> std::same_as<G>;
  { g.log() } -> std::same_as<typename G::Tangent>;
  { g.Ad() } -> std::same_as<typename G::AdjointMatrix>;
  { G::ad(u) } -> std::same_as<typename G::AdjointMatrix>;
  { G::hat(u) };
  { G::dexp_left(u) } -> std::same_as<typename G::AdjointMatrix>;
  { G::dexp_right(u) } -> std::same_as<typename G::AdjointMatrix>;
  { G::rotation_angle(u) } -> std::convertible_to<typename G::Scalar>;
  { g.is_valid() } -> std::same_as<bool>;
};

}  // namespace invekf
