// SPDX-License-Identifier: Apache-2.0
//
// Left and right concentrated Gaussian distributions on a matrix Lie group.
//
//   Left:  g = ref * exp(e),  e ~ N(mu, sigma)
//   Right: g = exp(e) * ref,  e ~ N(mu, sigma)

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <vector>

#include "invekf/errors.hpp"
#include "invekf/lie/lie.hpp"
#include "invekf/spd.hpp"

namespace invekf {

enum class Handedness { Left, Right };

inline const char* to_string(Handedness h) { return h == Handedness::Left ? "left" : "right"; }

inline Handedness flipped(Handedness h) {
  return h == Handedness::Left ? Handedness::Right : Handedness::Left;
}

template <LieGroup G>
struct ConcentratedGaussian {
  using Group = G;
  using Scalar = typename G::Scalar;
  using Tangent = typename G::Tangent;
  using Covariance = typename G::AdjointMatrix;

  Handedness handedness = Handedness::Left;
  Tangent mu = Tangent::Zero();
  G ref = G::Identity();
  Covariance sigma = Covariance::Identity();

  /// Throws ContractViolation unless sigma is symmetric positive definite.
  void validate() const {
    if (!mu.allFinite() || !ref.is_valid(Scalar(1e-9))) {
      throw ContractViolation("ConcentratedGaussian: non-finite mean or invalid reference");
    }
    if (!is_spd(sigma)) {
      throw ContractViolation("ConcentratedGaussian: covariance is not symmetric positive definite");
    }
  }
};

/// Exponential coordinates of g relative to the reference, in the distribution's handedness.
template <LieGroup G>
typename G::Tangent error_coordinates(const ConcentratedGaussian<G>& d, const G& g) {
  return d.handedness == Handedness::Left ? (d.ref.inverse() * g).log()
                                          : (g * d.ref.inverse()).log();
}

/// 1/2 |log(.) - mu|^2 weighted by sigma^-1; the normalising constant is dropped.
template <LieGroup G>
typename G::Scalar log_likelihood(const ConcentratedGaussian<G>& d, const G& g) {
  const typename G::Tangent r = error_coordinates(d, g) - d.mu;
  Eigen::LLT<typename G::AdjointMatrix> llt(d.sigma);
  if (llt.info() != Eigen::Success) {
    throw ContractViolation("log_likelihood: covariance is not positive definite");
  }
  return typename G::Scalar(0.5) * r.dot(llt.solve(r));
}

/// n draws from d, reproducible for a given seed.
template <LieGroup G>
std::vector<G> sample(const ConcentratedGaussian<G>& d, std::uint64_t seed, std::size_t n) {
  using Tangent = typename G::Tangent;
  Eigen::LLT<typename G::AdjointMatrix> llt(d.sigma);
  if (llt.info() != Eigen::Success) {
    throw ContractViolation("sample: covariance is not positive definite");
  }
  const typename G::AdjointMatrix L = llt.matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<typename G::Scalar> normal;
  std::vector<G> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tangent z;
    for (int k = 0; k < G::kDim; ++k) {
      z(k) = normal(rng);
    }
    const G step = G::exp(d.mu + L * z);
    out.push_back(d.handedness == Handedness::Left ? d.ref * step : step * d.ref);
  }
  return out;
}

/// Same density expressed with the opposite handedness; the reference is kept.
template <LieGroup G>
ConcentratedGaussian<G> convert_handedness(const ConcentratedGaussian<G>& d) {
  const typename G::AdjointMatrix A =
      d.handedness == Handedness::Left ? d.ref.Ad() : d.ref.inverse().Ad();
  ConcentratedGaussian<G> out;
  out.handedness = flipped(d.handedness);
  out.ref = d.ref;
  out.mu = A * d.mu;
  out.sigma = symmetrize(A * d.sigma * A.transpose());
  return out;
}

template <typename Scalar>
struct EquivalenceGap {
  Scalar ref_gap = 0;  ///< |log(ref_L^-1 ref_R)|
  Scalar mu_gap = 0;   ///< |Ad(ref_L) mu_L - mu_R|
  Scalar airm = 0;     ///< AIRM between sigma_L and sigma_R moved to left coordinates
};

/// How far a (left, right) pair is from describing the same distribution.
template <LieGroup G>
EquivalenceGap<typename G::Scalar> equivalence_gap(const ConcentratedGaussian<G>& left,
                                                   const ConcentratedGaussian<G>& right) {
  if (left.handedness != Handedness::Left || right.handedness != Handedness::Right) {
    throw ContractViolation("equivalence_gap: expects a (left, right) pair");
  }
  EquivalenceGap<typename G::Scalar> gap;
  gap.ref_gap = (left.ref.inverse() * right.ref).log().norm();
  gap.mu_gap = (left.ref.Ad() * left.mu - right.mu).norm();
  const typename G::AdjointMatrix back = right.ref.inverse().Ad();
  gap.airm = airm_distance(left.sigma, symmetrize(back * right.sigma * back.transpose()));
  return gap;
}

}  // namespace invekf
