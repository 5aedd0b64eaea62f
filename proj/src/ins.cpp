// SPDX-License-Identifier: Apache-2.0

#include "invekf/ins.hpp"

#include <cmath>

#include "invekf/errors.hpp"

namespace invekf::ins {

Group InsState::to_group() const {
  Eigen::Matrix<double, 6, 1> bias;
  bias << gyro_bias, accel_bias;
  return Group(SE23d(SO3d::unchecked(attitude), velocity, position), bias);
}

InsState InsState::from_group(const Group& X) {
  InsState s;
  s.attitude = X.nav().rotation();
  s.velocity = X.nav().velocity();
  s.position = X.nav().position();
  s.gyro_bias = X.euclidean().head<3>();
  s.accel_bias = X.euclidean().tail<3>();
  return s;
}

Tangent ins_lambda(const Group& X, const Input& u, const Vector3& gravity) {
  const Matrix3& R = X.nav().rotation();
  Tangent out = Tangent::Zero();
  out.segment<3>(kRot) = u.head<3>() - X.euclidean().head<3>();
  out.segment<3>(kVel) = u.tail<3>() - X.euclidean().tail<3>() + R.transpose() * gravity;
  out.segment<3>(kPos) = R.transpose() * X.nav().velocity();
  return out;
}

Tangent ins_lambda(const Group& X, const ImuSample& imu, const Vector3& gravity) {
  return ins_lambda(X, imu.as_input(), gravity);
}

Jacobian ins_lambda_jacobian(const Group& X, const Input&, const Vector3& gravity) {
  const Matrix3& R = X.nav().rotation();
  Jacobian J = Jacobian::Zero();
  J.block<3, 3>(kRot, kGyroBias) = -Matrix3::Identity();
  J.block<3, 3>(kVel, kRot) = skew<double>(R.transpose() * gravity);
  J.block<3, 3>(kVel, kAccelBias) = -Matrix3::Identity();
  J.block<3, 3>(kPos, kRot) = skew<double>(R.transpose() * X.nav().velocity());
  J.block<3, 3>(kPos, kVel) = Matrix3::Identity();
  return J;
}

Jacobian ins_process_matrix_left(const Group& X, const Input& u) {
  const Matrix3 W = skew<double>(u.head<3>() - X.euclidean().head<3>());
  Jacobian A = Jacobian::Zero();
  A.block<3, 3>(kRot, kRot) = -W;
  A.block<3, 3>(kRot, kGyroBias) = -Matrix3::Identity();
  A.block<3, 3>(kVel, kRot) = -skew<double>(u.tail<3>() - X.euclidean().tail<3>());
  A.block<3, 3>(kVel, kVel) = -W;
  A.block<3, 3>(kVel, kAccelBias) = -Matrix3::Identity();
  A.block<3, 3>(kPos, kVel) = Matrix3::Identity();
  A.block<3, 3>(kPos, kPos) = -W;
  return A;
}

Jacobian ins_process_matrix_right(const Group& X, const Vector3& gravity) {
  const Matrix3& R = X.nav().rotation();
  Jacobian A = Jacobian::Zero();
  A.block<3, 3>(kRot, kGyroBias) = -R;
  A.block<3, 3>(kVel, kRot) = skew<double>(gravity);
  A.block<3, 3>(kVel, kGyroBias) = -skew<double>(X.nav().velocity()) * R;
  A.block<3, 3>(kVel, kAccelBias) = -R;
  A.block<3, 3>(kPos, kVel) = Matrix3::Identity();
  A.block<3, 3>(kPos, kGyroBias) = -skew<double>(X.nav().position()) * R;
  return A;
}

NoiseMap ins_noise_map() {
  NoiseMap U = NoiseMap::Zero();
  U.block<3, 3>(kRot, 0) = Matrix3::Identity();
  U.block<3, 3>(kVel, 3) = Matrix3::Identity();
  U.block<3, 3>(kGyroBias, 6) = Matrix3::Identity();
  U.block<3, 3>(kAccelBias, 9) = Matrix3::Identity();
  return U;
}

ProcessNoise ins_process_noise(const NoiseParams& noise) {
  for (double s : {noise.gyro, noise.accel, noise.gyro_bias_walk, noise.accel_bias_walk}) {
    if (!std::isfinite(s) || !(s > 0.0)) {
      throw ContractViolation("ins_process_noise: noise densities must be finite and positive");
    }
  }
  Eigen::Matrix<double, 12, 1> d;
  d << Vector3::Constant(noise.gyro * noise.gyro), Vector3::Constant(noise.accel * noise.accel),
      Vector3::Constant(noise.gyro_bias_walk * noise.gyro_bias_walk),
      Vector3::Constant(noise.accel_bias_walk * noise.accel_bias_walk);
  return d.asDiagonal();
}

System ins_system(const NoiseParams& noise, const Vector3& gravity) {
  System sys;
  sys.lambda = [gravity](const Group& X, const Input& u) { return ins_lambda(X, u, gravity); };
  sys.upsilon = ins_noise_map();
  sys.q = ins_process_noise(noise);
  sys.dlambda_dx = [gravity](const Group& X, const Input& u) {
    return ins_lambda_jacobian(X, u, gravity);
  };
  sys.a_left = [](const Group& X, const Input& u) { return ins_process_matrix_left(X, u); };
  sys.a_right = [gravity](const Group& X, const Input&) {
    return ins_process_matrix_right(X, gravity);
  };
  return sys;
}

Measurement ins_measurement_model(double r_std) {
  if (!(r_std > 0.0) || !std::isfinite(r_std)) {
    throw ContractViolation("ins_measurement_model: r_std must be positive");
  }
  Measurement m;
  m.kind = MeasurementKind::LeftInvariant;
  m.h = [](const Group& X) -> Vector3 { return X.nav().position(); };
  m.rho = [](const Group& X, const Vector3& y) -> Vector3 {
    return X.nav().rotation() * y + X.nav().position();
  };
  m.y_ref = Vector3::Zero();
  m.r = r_std * r_std * Matrix3::Identity();
  m.dh = [](const Group& X) {
    Measurement::OutputJacobian C = Measurement::OutputJacobian::Zero();
    C.block<3, 3>(0, kPos) = X.nav().rotation();
    return C;
  };
  m.drho = [](const Group& X) -> Matrix3 { return X.nav().rotation().transpose(); };
  return m;
}

}  // namespace invekf::ins
