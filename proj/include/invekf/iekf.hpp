// SPDX-License-Identifier: Apache-2.0
//
// Left- and right-invariant extended Kalman filter steps.
//
// The filter state is a concentrated Gaussian (mu, ref, sigma). Between full
// steps mu is zero; update produces a nonzero offset which reset folds back
// into the reference. Every step is a pure function of its inputs.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>

#include "invekf/cgd.hpp"
#include "invekf/errors.hpp"
#include "invekf/lie/lie.hpp"
#include "invekf/spd.hpp"

namespace invekf {

inline constexpr double kFiniteDifferenceStep = 1e-6;

enum class IntegrationScheme { Euler, Midpoint };
enum class MeasurementKind { General, LeftInvariant };
enum class CovarianceUpdate { Standard, Joseph };

// ---------------------------------------------------------------------------
// Central finite differences on the group. Used as the fallback for every
// linearisation that a model does not provide analytically.
// ---------------------------------------------------------------------------
namespace fd {

/// Columns d/ds f(X exp(s e_i)) at s = 0.
template <LieGroup G, typename Fn>
auto left(const G& X, Fn&& f, typename G::Scalar h = kFiniteDifferenceStep) {
  using Out = decltype(f(X));
  Eigen::Matrix<typename G::Scalar, Out::RowsAtCompileTime, G::kDim> J;
  for (int i = 0; i < G::kDim; ++i) {
    typename G::Tangent e = G::Tangent::Zero();
    e(i) = h;
    J.col(i) = (f(X * G::exp(e)) - f(X * G::exp(-e))) / (2 * h);
  }
  return J;
}

/// Columns d/ds f(exp(s e_i) X) at s = 0.
template <LieGroup G, typename Fn>
auto right(const G& X, Fn&& f, typename G::Scalar h = kFiniteDifferenceStep) {
  using Out = decltype(f(X));
  Eigen::Matrix<typename G::Scalar, Out::RowsAtCompileTime, G::kDim> J;
  for (int i = 0; i < G::kDim; ++i) {
    typename G::Tangent e = G::Tangent::Zero();
    e(i) = h;
    J.col(i) = (f(G::exp(e) * X) - f(G::exp(-e) * X)) / (2 * h);
  }
  return J;
}

/// Left-trivialised differential of a group map F at X:
/// columns d/ds log(F(X)^-1 F(X exp(s e_i))).
template <LieGroup G, typename Fn>
typename G::AdjointMatrix left_group(const G& X, Fn&& F,
                                     typename G::Scalar h = kFiniteDifferenceStep) {
  const G base_inv = F(X).inverse();
  return left(X, [&](const G& Y) { return (base_inv * F(Y)).log(); }, h);
}

/// Right-trivialised differential: columns d/ds log(F(exp(s e_i) X) F(X)^-1).
template <LieGroup G, typename Fn>
typename G::AdjointMatrix right_group(const G& X, Fn&& F,
                                      typename G::Scalar h = kFiniteDifferenceStep) {
  const G base_inv = F(X).inverse();
  return right(X, [&](const G& Y) { return (F(Y) * base_inv).log(); }, h);
}

/// Plain Euclidean Jacobian of f: R^n -> R^k at z.
template <typename Vector, typename Fn>
auto euclidean(const Vector& z, Fn&& f, typename Vector::Scalar h = kFiniteDifferenceStep) {
  using Out = decltype(f(z));
  Eigen::Matrix<typename Vector::Scalar, Out::RowsAtCompileTime, Vector::RowsAtCompileTime> J;
  for (int i = 0; i < z.size(); ++i) {
    Vector e = Vector::Zero();
    e(i) = h;
    J.col(i) = (f(z + e) - f(z - e)) / (2 * h);
  }
  return J;
}

}  // namespace fd

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

/// Dynamics dX = X (Lambda(X, v) dt + Upsilon Q^1/2 dw).
///
/// Only lambda, upsilon and q are required. The optional providers replace
/// finite differences:
///   dlambda_dx  D_X Lambda(X, v) . DL_X, i.e. d/ds Lambda(X exp(s e), v)
///   a_left      the full left process matrix (overrides dlambda_dx for Left)
///   a_right     the full right process matrix (overrides dlambda_dx for Right)
///   phi         discrete flow Phi(X, v, dt); default exp(Lambda(X, v) dt)
///   dphi        d/ds log(Phi(X, v, dt)^-1 Phi(X exp(s e), v, dt))
template <LieGroup G, int InputDim, int NoiseDim>
struct SystemModel {
  using Group = G;
  using Scalar = typename G::Scalar;
  using Tangent = typename G::Tangent;
  using Jacobian = typename G::AdjointMatrix;
  using Input = Eigen::Matrix<Scalar, InputDim, 1>;
  using NoiseMap = Eigen::Matrix<Scalar, G::kDim, NoiseDim>;
  using NoiseCovariance = Eigen::Matrix<Scalar, NoiseDim, NoiseDim>;

  std::function<Tangent(const G&, const Input&)> lambda;
  NoiseMap upsilon = NoiseMap::Zero();
  NoiseCovariance q = NoiseCovariance::Zero();

  std::function<Jacobian(const G&, const Input&)> dlambda_dx;
  std::function<Jacobian(const G&, const Input&)> a_left;
  std::function<Jacobian(const G&, const Input&)> a_right;
  std::function<G(const G&, const Input&, Scalar)> phi;
  std::function<Jacobian(const G&, const Input&, Scalar)> dphi;

  void validate() const {
    if (!lambda) {
      throw ContractViolation("SystemModel: lambda is required");
    }
    if (!upsilon.allFinite() || !q.allFinite() || !is_symmetric(q)) {
      throw ContractViolation("SystemModel: upsilon/q must be finite and q symmetric");
    }
    Eigen::LDLT<NoiseCovariance> ldlt(q);
    if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < Scalar(0)).any()) {
      throw ContractViolation("SystemModel: q must be positive semi-definite");
    }
  }
};

/// Output y = h(X) + noise. LeftInvariant models additionally carry the
/// linear left action rho with h(X) = rho(X, y_ref).
///
/// Optional providers:
///   dh    d/ds h(X exp(s e)), the left-trivialised output Jacobian
///   drho  D_z rho(X^-1, z), which is constant in z for a linear action
template <LieGroup G, int OutputDim>
struct MeasurementModel {
  using Group = G;
  using Scalar = typename G::Scalar;
  using Output = Eigen::Matrix<Scalar, OutputDim, 1>;
  using OutputJacobian = Eigen::Matrix<Scalar, OutputDim, G::kDim>;
  using NoiseCovariance = Eigen::Matrix<Scalar, OutputDim, OutputDim>;

  MeasurementKind kind = MeasurementKind::General;
  std::function<Output(const G&)> h;
  std::function<Output(const G&, const Output&)> rho;
  Output y_ref = Output::Zero();
  NoiseCovariance r = NoiseCovariance::Identity();

  std::function<OutputJacobian(const G&)> dh;
  std::function<NoiseCovariance(const G&)> drho;

  void validate() const {
    if (!h) {
      throw ContractViolation("MeasurementModel: h is required");
    }
    if (kind == MeasurementKind::LeftInvariant && !rho) {
      throw ContractViolation("MeasurementModel: left-invariant model needs rho");
    }
    if (!is_spd(r)) {
      throw ContractViolation("MeasurementModel: r must be symmetric positive definite");
    }
  }
};

/// Spot-checks h(X) = rho(X, y_ref) and the action axioms on random inputs.
/// Throws ContractViolation on the first failure.
template <LieGroup G, int OutputDim>
void verify_left_invariance(const MeasurementModel<G, OutputDim>& model, std::uint64_t seed,
                            int trials = 20, typename G::Scalar tol = 1e-10) {
  using Scalar = typename G::Scalar;
  using Output = typename MeasurementModel<G, OutputDim>::Output;
  model.validate();
  if (model.kind != MeasurementKind::LeftInvariant) {
    throw ContractViolation("verify_left_invariance: model is not left-invariant");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> uni(-1, 1);
  auto random_tangent = [&] {
    typename G::Tangent u;
    for (int i = 0; i < G::kDim; ++i) {
      u(i) = uni(rng);
    }
    return u;
  };
  auto random_output = [&] {
    Output y;
    for (int i = 0; i < OutputDim; ++i) {
      y(i) = 3 * uni(rng);
    }
    return y;
  };
  auto close = [&](const Output& a, const Output& b) {
    return (a - b).norm() <= tol * std::max(Scalar(1), a.norm());
  };
  for (int t = 0; t < trials; ++t) {
    const G X1 = G::exp(random_tangent());
    const G X2 = G::exp(random_tangent());
    const Output y = random_output();
    if (!close(model.h(X1), model.rho(X1, model.y_ref))) {
      throw ContractViolation("left-invariant model: h(X) != rho(X, y_ref)");
    }
    if (!close(model.rho(X1 * X2, y), model.rho(X1, model.rho(X2, y)))) {
      throw ContractViolation("left-invariant model: rho is not compatible with the group product");
    }
    if (!close(model.rho(G::Identity(), y), y)) {
      throw ContractViolation("left-invariant model: rho(I, y) != y");
    }
  }
}

template <LieGroup G>
struct FilterState {
  using Group = G;
  using Scalar = typename G::Scalar;

  ConcentratedGaussian<G> dist;
  Scalar time = 0;

  Handedness handedness() const { return dist.handedness; }
};

template <typename Input, typename Scalar>
struct TimedInput {
  Input value;
  Scalar dt;
};

// ---------------------------------------------------------------------------
// Linearisations
// ---------------------------------------------------------------------------

/// D_X Lambda . DL_X at (X, v).
template <LieGroup G, int L, int M>
typename G::AdjointMatrix lambda_jacobian(const SystemModel<G, L, M>& model, const G& X,
                                          const typename SystemModel<G, L, M>::Input& v) {
  if (model.dlambda_dx) {
    return model.dlambda_dx(X, v);
  }
  return fd::left(X, [&](const G& Y) { return model.lambda(Y, v); });
}

/// A_L = D_X Lambda . DL_X - ad(Lambda).
template <LieGroup G, int L, int M>
typename G::AdjointMatrix process_matrix_left(const SystemModel<G, L, M>& model, const G& X,
                                              const typename SystemModel<G, L, M>::Input& v) {
  if (model.a_left) {
    return model.a_left(X, v);
  }
  return lambda_jacobian(model, X, v) - G::ad(model.lambda(X, v));
}

/// A_R = Ad_X . D_X Lambda . DR_X.
template <LieGroup G, int L, int M>
typename G::AdjointMatrix process_matrix_right(const SystemModel<G, L, M>& model, const G& X,
                                               const typename SystemModel<G, L, M>::Input& v) {
  if (model.a_right) {
    return model.a_right(X, v);
  }
  if (model.dlambda_dx) {
    // DR_X e = DL_X Ad_{X^-1} e
    return X.Ad() * model.dlambda_dx(X, v) * X.inverse().Ad();
  }
  return X.Ad() * fd::right(X, [&](const G& Y) { return model.lambda(Y, v); });
}

/// B_R = Ad_X Upsilon (B_L is Upsilon itself).
template <LieGroup G, int L, int M>
typename SystemModel<G, L, M>::NoiseMap noise_matrix_right(const SystemModel<G, L, M>& model,
                                                           const G& X) {
  return X.Ad() * model.upsilon;
}

template <LieGroup G, int L, int M>
G discrete_flow(const SystemModel<G, L, M>& model, const G& X,
                const typename SystemModel<G, L, M>::Input& v, typename G::Scalar dt) {
  return model.phi ? model.phi(X, v, dt) : G::exp(model.lambda(X, v) * dt);
}

namespace detail {

/// d/ds log(Phi(X)^-1 Phi(X exp(s e))) when it is available without differencing.
template <LieGroup G, int L, int M>
bool flow_jacobian(const SystemModel<G, L, M>& model, const G& X,
                   const typename SystemModel<G, L, M>::Input& v, typename G::Scalar dt,
                   typename G::AdjointMatrix& out) {
  if (model.dphi) {
    out = model.dphi(X, v, dt);
    return true;
  }
  if (!model.phi && model.dlambda_dx) {
    const typename G::Tangent step = model.lambda(X, v) * dt;
    out = G::dexp_left(step) * (dt * model.dlambda_dx(X, v));
    return true;
  }
  return false;
}

}  // namespace detail

/// Discrete left transition: Ad_{Phi^-1} + DL_{Phi^-1} . D Phi . DL_X.
template <LieGroup G, int L, int M>
typename G::AdjointMatrix discrete_transition_left(const SystemModel<G, L, M>& model, const G& X,
                                                   const typename SystemModel<G, L, M>::Input& v,
                                                   typename G::Scalar dt) {
  typename G::AdjointMatrix flow;
  if (detail::flow_jacobian(model, X, v, dt, flow)) {
    return discrete_flow(model, X, v, dt).inverse().Ad() + flow;
  }
  return fd::left_group(X, [&](const G& Y) { return Y * discrete_flow(model, Y, v, dt); });
}

/// Discrete right transition: d/ds log(F(exp(s e) X) F(X)^-1) with F(X) = X Phi(X).
template <LieGroup G, int L, int M>
typename G::AdjointMatrix discrete_transition_right(const SystemModel<G, L, M>& model, const G& X,
                                                    const typename SystemModel<G, L, M>::Input& v,
                                                    typename G::Scalar dt) {
  typename G::AdjointMatrix flow;
  if (detail::flow_jacobian(model, X, v, dt, flow)) {
    const G next = X * discrete_flow(model, X, v, dt);
    return G::AdjointMatrix::Identity() + next.Ad() * flow * X.inverse().Ad();
  }
  return fd::right_group(X, [&](const G& Y) { return Y * discrete_flow(model, Y, v, dt); });
}

/// C_L = D_X h . DL_X at X.
template <LieGroup G, int N>
typename MeasurementModel<G, N>::OutputJacobian measurement_matrix_left(
    const MeasurementModel<G, N>& model, const G& X) {
  if (model.dh) {
    return model.dh(X);
  }
  return fd::left(X, model.h);
}

/// C_R = D_X h . DR_X at X.
template <LieGroup G, int N>
typename MeasurementModel<G, N>::OutputJacobian measurement_matrix_right(
    const MeasurementModel<G, N>& model, const G& X) {
  if (model.dh) {
    return model.dh(X) * X.inverse().Ad();
  }
  return fd::right(X, model.h);
}

/// D_z rho(X^-1, z), evaluated at z = h(X).
template <LieGroup G, int N>
typename MeasurementModel<G, N>::NoiseCovariance action_jacobian(
    const MeasurementModel<G, N>& model, const G& X) {
  if (model.drho) {
    return model.drho(X);
  }
  const G X_inv = X.inverse();
  return fd::euclidean(model.h(X), [&](const auto& z) { return model.rho(X_inv, z); });
}

// ---------------------------------------------------------------------------
// Filter steps
// ---------------------------------------------------------------------------

namespace detail {

template <LieGroup G>
void require_zero_offset(const FilterState<G>& s, const char* what) {
  if (!s.dist.mu.isZero(0)) {
    throw ContractViolation(std::string(what) + ": filter offset must be zero (missing reset?)");
  }
}

template <LieGroup G>
void require_finite(const FilterState<G>& s, const char* what) {
  if (!s.dist.sigma.allFinite() || !s.dist.mu.allFinite() || !s.dist.ref.is_valid(1e-6)) {
    throw NumericError(std::string(what) + ": non-finite filter state");
  }
}

/// Riccati right-hand side A S + S A^T + N.
template <typename Matrix>
Matrix riccati_rate(const Matrix& A, const Matrix& S, const Matrix& noise) {
  const Matrix AS = A * S;
  return AS + AS.transpose() + noise;
}

}  // namespace detail

/// Hybrid predict: integrates ref' = ref Lambda(ref, v) and the Riccati ODE
/// over dt with the input held constant, using `substeps` equal sub-intervals.
///
/// Each sub-step moves the reference by ref <- ref exp(Lambda dt_sub), which
/// keeps it on the group for any step size.
template <LieGroup G, int L, int M>
FilterState<G> predict_hybrid(const FilterState<G>& s, const SystemModel<G, L, M>& model,
                              const typename SystemModel<G, L, M>::Input& v,
                              typename G::Scalar dt, int substeps,
                              IntegrationScheme scheme = IntegrationScheme::Euler) {
  using Scalar = typename G::Scalar;
  using Matrix = typename G::AdjointMatrix;
  detail::require_zero_offset(s, "predict_hybrid");
  if (substeps < 1 || !(dt >= Scalar(0))) {
    throw ContractViolation("predict_hybrid: need substeps >= 1 and dt >= 0");
  }

  const bool left = s.dist.handedness == Handedness::Left;
  const Matrix upsilon_q = model.upsilon * model.q * model.upsilon.transpose();
  // (A, N) of the error dynamics at X in this filter's handedness.
  auto linearise = [&](const G& X) -> std::pair<Matrix, Matrix> {
    if (left) {
      return {process_matrix_left(model, X, v), upsilon_q};
    }
    const Matrix Ad = X.Ad();
    return {process_matrix_right(model, X, v), Ad * upsilon_q * Ad.transpose()};
  };

  FilterState<G> out = s;
  G& X = out.dist.ref;
  Matrix& S = out.dist.sigma;
  const Scalar h = dt / Scalar(substeps);
  for (int k = 0; k < substeps; ++k) {
    switch (scheme) {
      case IntegrationScheme::Euler: {
        // First-order transition form; unlike S += h (A S + S A^T + N) it
        // cannot make S indefinite.
        const auto [A, N] = linearise(X);
        const Matrix F = Matrix::Identity() + h * A;
        X = X * G::exp(model.lambda(X, v) * h);
        S = F * S * F.transpose() + h * N;
        break;
      }
      case IntegrationScheme::Midpoint: {
        const auto [A1, N1] = linearise(X);
        const G X_mid = X * G::exp(model.lambda(X, v) * (h / 2));
        const Matrix S_mid = S + (h / 2) * detail::riccati_rate(A1, S, N1);
        const auto [A2, N2] = linearise(X_mid);
        X = X * G::exp(model.lambda(X_mid, v) * h);
        S += h * detail::riccati_rate(A2, S_mid, N2);
        break;
      }
    }
    S = symmetrize(S);
  }
  out.time = s.time + dt;
  detail::require_finite(out, "predict_hybrid");
  return out;
}

/// Discrete predict for X_{k+1} = X_k Phi(X_k, v) exp(w), w ~ N(0, dt Upsilon Q Upsilon^T).
template <LieGroup G, int L, int M>
FilterState<G> predict_discrete(const FilterState<G>& s, const SystemModel<G, L, M>& model,
                                const typename SystemModel<G, L, M>::Input& v,
                                typename G::Scalar dt) {
  using Matrix = typename G::AdjointMatrix;
  detail::require_zero_offset(s, "predict_discrete");

  const G& X = s.dist.ref;
  const Matrix q_d = dt * (model.upsilon * model.q * model.upsilon.transpose());
  FilterState<G> out = s;
  out.dist.ref = X * discrete_flow(model, X, v, dt);
  if (s.dist.handedness == Handedness::Left) {
    const Matrix A = discrete_transition_left(model, X, v, dt);
    out.dist.sigma = symmetrize(A * s.dist.sigma * A.transpose() + q_d);
  } else {
    const Matrix A = discrete_transition_right(model, X, v, dt);
    const Matrix B = out.dist.ref.Ad();
    out.dist.sigma = symmetrize(A * s.dist.sigma * A.transpose() + B * q_d * B.transpose());
  }
  out.time = s.time + dt;
  detail::require_finite(out, "predict_discrete");
  return out;
}

namespace detail {

template <LieGroup G, typename COut, typename RMat, typename Innovation>
FilterState<G> kalman_update(const FilterState<G>& s, const COut& C, const RMat& R_eff,
                             const Innovation& innovation, CovarianceUpdate form) {
  using Matrix = typename G::AdjointMatrix;
  const Matrix& P = s.dist.sigma;
  const RMat S = symmetrize(C * P * C.transpose() + R_eff);
  Eigen::LLT<RMat> llt(S);
  if (llt.info() != Eigen::Success || !S.allFinite()) {
    throw NumericError("update: innovation covariance is not invertible");
  }
  // K = P C^T S^-1, computed as (S^-1 C P)^T
  const Eigen::Matrix<typename G::Scalar, G::kDim, RMat::RowsAtCompileTime> K =
      llt.solve(C * P).transpose();
  const Matrix I_KC = Matrix::Identity() - K * C;

  FilterState<G> out = s;
  out.dist.mu = K * innovation;
  if (form == CovarianceUpdate::Joseph) {
    out.dist.sigma = symmetrize(I_KC * P * I_KC.transpose() + K * R_eff * K.transpose());
  } else {
    out.dist.sigma = symmetrize(I_KC * P);
  }
  require_finite(out, "update");
  return out;
}

}  // namespace detail

/// Update with a generic output y = h(X) + nu, nu ~ N(0, R).
template <LieGroup G, int N>
FilterState<G> update_general(const FilterState<G>& s, const MeasurementModel<G, N>& model,
                              const typename MeasurementModel<G, N>::Output& y,
                              CovarianceUpdate form = CovarianceUpdate::Standard) {
  detail::require_zero_offset(s, "update_general");
  const G& X = s.dist.ref;
  const auto C = s.dist.handedness == Handedness::Left ? measurement_matrix_left(model, X)
                                                       : measurement_matrix_right(model, X);
  return detail::kalman_update(s, C, model.r, (y - model.h(X)).eval(), form);
}

/// Update with a left-invariant output through the pseudo-measurement
/// d = rho(ref^-1, y). C_L is constant; the right filter uses C_L Ad_{ref^-1}.
template <LieGroup G, int N>
FilterState<G> update_left_invariant(const FilterState<G>& s, const MeasurementModel<G, N>& model,
                                     const typename MeasurementModel<G, N>::Output& y,
                                     CovarianceUpdate form = CovarianceUpdate::Standard) {
  using Output = typename MeasurementModel<G, N>::Output;
  using OutputJacobian = typename MeasurementModel<G, N>::OutputJacobian;
  detail::require_zero_offset(s, "update_left_invariant");
  if (model.kind != MeasurementKind::LeftInvariant) {
    throw ContractViolation("update_left_invariant: measurement model is not left-invariant");
  }
  const G& X = s.dist.ref;
  const G X_inv = X.inverse();
  const OutputJacobian C_identity = measurement_matrix_left(model, G::Identity());
  const OutputJacobian C =
      s.dist.handedness == Handedness::Left ? C_identity : OutputJacobian(C_identity * X_inv.Ad());
  const auto D = action_jacobian(model, X);
  const Output innovation = model.rho(X_inv, y) - model.y_ref;
  return detail::kalman_update(s, C, (D * model.r * D.transpose()).eval(), innovation, form);
}

template <LieGroup G, int N>
FilterState<G> update(const FilterState<G>& s, const MeasurementModel<G, N>& model,
                      const typename MeasurementModel<G, N>::Output& y,
                      CovarianceUpdate form = CovarianceUpdate::Standard) {
  return model.kind == MeasurementKind::LeftInvariant ? update_left_invariant(s, model, y, form)
                                                      : update_general(s, model, y, form);
}

/// Moves the reference to the posterior mean and maps the covariance through
/// the matching exp-Jacobian. Leaves mu = 0.
template <LieGroup G>
FilterState<G> reset(const FilterState<G>& s) {
  const auto& mu = s.dist.mu;
  require_injective<G>(mu, "reset");
  FilterState<G> out = s;
  typename G::AdjointMatrix J;
  if (s.dist.handedness == Handedness::Left) {
    out.dist.ref = s.dist.ref * G::exp(mu);
    J = G::dexp_left(mu);
  } else {
    out.dist.ref = G::exp(mu) * s.dist.ref;
    J = G::dexp_right(mu);
  }
  out.dist.sigma = symmetrize(J * s.dist.sigma * J.transpose());
  out.dist.mu.setZero();
  detail::require_finite(out, "reset");
  return out;
}

/// Reference move only, covariance untouched: the classical IEKF without the
/// covariance reset. Left and right filters built on it are not equivalent.
template <LieGroup G>
FilterState<G> reset_reference_only(const FilterState<G>& s) {
  require_injective<G>(s.dist.mu, "reset_reference_only");
  FilterState<G> out = s;
  out.dist.ref = s.dist.handedness == Handedness::Left ? s.dist.ref * G::exp(s.dist.mu)
                                                       : G::exp(s.dist.mu) * s.dist.ref;
  out.dist.mu.setZero();
  return out;
}

struct StepOptions {
  enum class Mode { Hybrid, Discrete };
  Mode mode = Mode::Hybrid;
  int substeps = 1;
  IntegrationScheme scheme = IntegrationScheme::Euler;
  bool reset_enabled = true;
  CovarianceUpdate covariance_update = CovarianceUpdate::Standard;
};

/// Predict over every input interval, then update and reset.
template <LieGroup G, int L, int M, int N>
FilterState<G> step(
    const FilterState<G>& s, const SystemModel<G, L, M>& system,
    std::span<const TimedInput<typename SystemModel<G, L, M>::Input, typename G::Scalar>> inputs,
    const MeasurementModel<G, N>& measurement, const typename MeasurementModel<G, N>::Output& y,
    const StepOptions& options = {}) {
  FilterState<G> cur = s;
  for (const auto& in : inputs) {
    cur = options.mode == StepOptions::Mode::Hybrid
              ? predict_hybrid(cur, system, in.value, in.dt, options.substeps, options.scheme)
              : predict_discrete(cur, system, in.value, in.dt);
  }
  cur = update(cur, measurement, y, options.covariance_update);
  return options.reset_enabled ? reset(cur) : reset_reference_only(cur);
}

}  // namespace invekf
