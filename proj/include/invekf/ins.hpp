// SPDX-License-Identifier: Apache-2.0
//
// GNSS-aided inertial navigation on SE_2(3) x R^6 (flat, non-rotating Earth).
//
//   R' = R (omega - b_omega)^
//   v' = R (a - b_a) + g
//   p' = v
//   b_omega' = tau_omega,  b_a' = tau_a
//
// Tangent ordering: (rotation, velocity, position, gyro bias, accel bias).

#pragma once

#include <Eigen/Core>

#include "invekf/iekf.hpp"
#include "invekf/lie/lie.hpp"

namespace invekf::ins {

using Group = SE23R6d;
using Tangent = Group::Tangent;
using Jacobian = Group::AdjointMatrix;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Input = Eigen::Matrix<double, 6, 1>;  ///< (omega [rad/s], accel [m/s^2]) in the body frame

inline constexpr int kRot = 0;
inline constexpr int kVel = 3;
inline constexpr int kPos = 6;
inline constexpr int kGyroBias = 9;
inline constexpr int kAccelBias = 12;

inline Vector3 default_gravity() { return {0.0, 0.0, -9.81}; }

struct InsState {
  Matrix3 attitude = Matrix3::Identity();
  Vector3 position = Vector3::Zero();
  Vector3 velocity = Vector3::Zero();
  Vector3 gyro_bias = Vector3::Zero();
  Vector3 accel_bias = Vector3::Zero();

  Group to_group() const;
  static InsState from_group(const Group& X);
};

struct ImuSample {
  Vector3 omega = Vector3::Zero();
  Vector3 accel = Vector3::Zero();
  double timestamp = 0.0;

  Input as_input() const {
    Input u;
    u << omega, accel;
    return u;
  }
};

struct GnssSample {
  Vector3 position = Vector3::Zero();
  double timestamp = 0.0;
};

/// Continuous-time noise densities.
struct NoiseParams {
  double gyro = 0.1;              ///< rad/s/sqrt(Hz)
  double accel = 0.1;             ///< m/s^2/sqrt(Hz)
  double gyro_bias_walk = 1e-3;   ///< rad/s^2/sqrt(Hz)
  double accel_bias_walk = 1e-3;  ///< m/s^3/sqrt(Hz)
};

using System = SystemModel<Group, 6, 12>;
using Measurement = MeasurementModel<Group, 3>;
using NoiseMap = System::NoiseMap;
using ProcessNoise = System::NoiseCovariance;

/// Left trivialisation Lambda(X, u) with X' = X wedge(Lambda):
/// (omega - b_omega, a - b_a + R^T g, R^T v, 0, 0).
Tangent ins_lambda(const Group& X, const Input& u, const Vector3& gravity = default_gravity());
Tangent ins_lambda(const Group& X, const ImuSample& imu, const Vector3& gravity = default_gravity());

/// d/ds Lambda(X exp(s e), u).
Jacobian ins_lambda_jacobian(const Group& X, const Input& u,
                             const Vector3& gravity = default_gravity());

/// Analytic A_L. Independent of gravity and of the navigation state.
Jacobian ins_process_matrix_left(const Group& X, const Input& u);

/// Analytic A_R. Depends on the state but not on the IMU reading.
Jacobian ins_process_matrix_right(const Group& X, const Vector3& gravity = default_gravity());

/// Upsilon: gyro noise -> rotation, accel noise -> velocity, bias walks -> bias blocks.
NoiseMap ins_noise_map();

/// Q = diag(gyro^2 I, accel^2 I, gyro_bias_walk^2 I, accel_bias_walk^2 I).
/// Throws ContractViolation for non-positive or non-finite densities.
ProcessNoise ins_process_noise(const NoiseParams& noise);

/// System model with analytic linearisations.
System ins_system(const NoiseParams& noise, const Vector3& gravity = default_gravity());

/// GNSS position y = p + eta as a left-invariant output: rho(X, y) = R y + p,
/// y_ref = 0, R = r_std^2 I.
Measurement ins_measurement_model(double r_std);

}  // namespace invekf::ins
