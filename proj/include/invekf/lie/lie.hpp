// SPDX-License-Identifier: Apache-2.0
//
// Free-function interface over the concrete groups.
//
// Groups are distinct C++ types, so composing elements of different groups is
// rejected at compile time rather than at run time.

#pragma once

#include <numbers>
#include <string>

#include "invekf/lie/common.hpp"
#include "invekf/lie/euclidean.hpp"
#include "invekf/lie/se23.hpp"
#include "invekf/lie/se23r6.hpp"
#include "invekf/lie/so3.hpp"

namespace invekf {

template <LieGroup G>
G compose(const G& a, const G& b) {
  return a * b;
}

template <LieGroup G>
G inverse(const G& g) {
  return g.inverse();
}

template <LieGroup G>
G exp(const typename G::Tangent& u) {
  return G::exp(u);
}

template <LieGroup G>
typename G::Tangent log(const G& g) {
  return g.log();
}

/// Ad_g in tangent coordinates: Ad(g) u = vee(g wedge(u) g^-1).
template <LieGroup G>
typename G::AdjointMatrix adjoint_matrix(const G& g) {
  return g.Ad();
}

/// ad_u in tangent coordinates: ad(u) v = vee([wedge(u), wedge(v)]).
template <LieGroup G>
typename G::AdjointMatrix little_adjoint(const typename G::Tangent& u) {
  return G::ad(u);
}

/// J with log(exp(mu)^-1 exp(mu + e)) = J e + O(|e|^2).
template <LieGroup G>
typename G::AdjointMatrix exp_jacobian_left(const typename G::Tangent& mu) {
  return G::dexp_left(mu);
}

/// J with log(exp(mu + e) exp(mu)^-1) = J e + O(|e|^2).
template <LieGroup G>
typename G::AdjointMatrix exp_jacobian_right(const typename G::Tangent& mu) {
  return G::dexp_right(mu);
}

/// Throws DomainError when the rotational part of mu reaches the cut locus.
template <LieGroup G>
void require_injective(const typename G::Tangent& mu, const char* what) {
  const auto angle = G::rotation_angle(mu);
  if (!(angle < typename G::Scalar(std::numbers::pi - kCutLocusMargin))) {
    throw DomainError(std::string(what) + ": rotation angle " + std::to_string(double(angle)) +
                      " outside the injectivity radius of exp");
  }
}

}  // namespace invekf
