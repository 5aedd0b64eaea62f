// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "invekf/iekf.hpp"
#include "invekf/ins.hpp"
#include "oracles.hpp"

namespace invekf::ins {
namespace {

using test::Rng;
using Mat5 = Eigen::Matrix<double, 5, 5>;

const Vector3 kGravity(0, 0, -9.81);

Eigen::Matrix3d skew(const Vector3& w) {
  Eigen::Matrix3d W;
  W << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return W;
}

InsState random_state(Rng& rng) {
  InsState s;
  s.attitude = SO3d::exp(rng.tangent<SO3d>(3.0)).matrix();
  s.velocity = rng.vec<3>(2.0);
  s.position = rng.vec<3>(10.0);
  s.gyro_bias = rng.vec<3>(0.05);
  s.accel_bias = rng.vec<3>(0.2);
  return s;
}

Input random_input(Rng& rng) {
  Input u;
  u << rng.vec<3>(0.5), rng.vec<3>(3.0);
  return u;
}

// Right-hand side of the continuous INS equations with constant biases.
struct Rates {
  Eigen::Matrix3d R;
  Vector3 v, p;
};

Rates flow(const Rates& x, const Input& u, const InsState& bias) {
  const Vector3 w = u.head<3>() - bias.gyro_bias;
  const Vector3 a = u.tail<3>() - bias.accel_bias;
  return {x.R * skew(w), x.R * a + kGravity, x.v};
}

// Classical RK4 on the raw matrix ODE.
Rates rk4(Rates x, const Input& u, const InsState& bias, double T, int steps) {
  const double h = T / steps;
  auto axpy = [](const Rates& x, const Rates& k, double s) {
    return Rates{x.R + s * k.R, x.v + s * k.v, x.p + s * k.p};
  };
  for (int i = 0; i < steps; ++i) {
    const Rates k1 = flow(x, u, bias);
    const Rates k2 = flow(axpy(x, k1, h / 2), u, bias);
    const Rates k3 = flow(axpy(x, k2, h / 2), u, bias);
    const Rates k4 = flow(axpy(x, k3, h), u, bias);
    x.R += h / 6 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R);
    x.v += h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    x.p += h / 6 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p);
  }
  return x;
}

Mat5 nav_matrix(const Rates& x) {
  Mat5 M = Mat5::Identity();
  M.topLeftCorner<3, 3>() = x.R;
  M.block<3, 1>(0, 3) = x.v;
  M.block<3, 1>(0, 4) = x.p;
  return M;
}

TEST(InsLambda, HoverIsEquilibrium) {
  Input u;
  u << 0, 0, 0, -kGravity;
  EXPECT_TRUE(ins_lambda(Group::Identity(), u, kGravity).isZero(0));
}

TEST(InsLambda, RotatedFrameExample) {
  InsState s;
  s.attitude = test::rot_x(M_PI / 2);
  s.velocity = Vector3(0, 0, 1);
  const Tangent lam = ins_lambda(s.to_group(), Input::Zero().eval(), kGravity);
  EXPECT_TRUE(lam.segment<3>(kRot).isZero(0));
  EXPECT_LE((lam.segment<3>(kVel) - s.attitude.transpose() * kGravity).norm(), 1e-15);
  EXPECT_LE((lam.segment<3>(kPos) - Vector3(0, 1, 0)).norm(), 1e-15);
  EXPECT_TRUE(lam.tail<6>().isZero(0));
}

TEST(InsLambda, ReproducesMatrixFlow) {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const InsState s = random_state(rng);
    const Input u = random_input(rng);
    const Rates x{s.attitude, s.velocity, s.position};
    const double h = 1e-4;
    const Mat5 rate = (nav_matrix(rk4(x, u, s, h, 1)) - nav_matrix(rk4(x, u, s, -h, 1))) / (2 * h);
    const Tangent lam = ins_lambda(s.to_group(), u, kGravity);
    const Mat5 model = s.to_group().matrix() * SE23d::hat(lam.head<9>());
    EXPECT_LE((model - rate).norm(), 1e-6);
    EXPECT_TRUE(lam.tail<6>().isZero(0));
  }
}

TEST(InsLambda, SampleOverloadMatchesInputVector) {
  Rng rng(2);
  const Group X = random_state(rng).to_group();
  ImuSample imu;
  imu.omega = rng.vec<3>();
  imu.accel = rng.vec<3>();
  EXPECT_EQ(ins_lambda(X, imu, kGravity), ins_lambda(X, imu.as_input(), kGravity));
}

TEST(InsLinearisation, AnalyticMatricesMatchFiniteDifferenceFallback) {
  Rng rng(3);
  System analytic = ins_system(NoiseParams{}, kGravity);
  System numeric = analytic;
  numeric.dlambda_dx = nullptr;
  numeric.a_left = nullptr;
  numeric.a_right = nullptr;
  for (int i = 0; i < 50; ++i) {
    const Group X = random_state(rng).to_group();
    const Input u = random_input(rng);
    EXPECT_LE((process_matrix_left(analytic, X, u) - process_matrix_left(numeric, X, u)).norm(), 1e-6);
    EXPECT_LE((process_matrix_right(analytic, X, u) - process_matrix_right(numeric, X, u)).norm(), 1e-6);
    EXPECT_LE((ins_lambda_jacobian(X, u, kGravity) - lambda_jacobian(numeric, X, u)).norm(), 1e-6);
  }
}

TEST(InsLinearisation, LeftMatrixMatchesClosedForm) {
  Rng rng(4);
  const InsState s = random_state(rng);
  const Input u = random_input(rng);
  const Eigen::Matrix3d W = skew(u.head<3>() - s.gyro_bias);
  const Eigen::Matrix3d A = skew(u.tail<3>() - s.accel_bias);
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  Jacobian expect = Jacobian::Zero();
  expect.block<3, 3>(kRot, kRot) = -W;
  expect.block<3, 3>(kRot, kGyroBias) = -I;
  expect.block<3, 3>(kVel, kRot) = -A;
  expect.block<3, 3>(kVel, kVel) = -W;
  expect.block<3, 3>(kVel, kAccelBias) = -I;
  expect.block<3, 3>(kPos, kVel) = I;
  expect.block<3, 3>(kPos, kPos) = -W;
  EXPECT_LE((ins_process_matrix_left(s.to_group(), u) - expect).norm(), 1e-14);
}

TEST(InsNoise, MapRoutesEachChannelOnce) {
  const NoiseMap U = ins_noise_map();
  EXPECT_EQ((U.array() == 1.0).count(), 12);
  EXPECT_EQ((U.array() != 0.0).count(), 12);
  for (int c = 0; c < 12; ++c) EXPECT_EQ(U.col(c).sum(), 1.0);
  EXPECT_TRUE((U.block<3, 3>(kRot, 0).isIdentity(0)));
  EXPECT_TRUE((U.block<3, 3>(kVel, 3).isIdentity(0)));
  EXPECT_TRUE((U.block<3, 3>(kGyroBias, 6).isIdentity(0)));
  EXPECT_TRUE((U.block<3, 3>(kAccelBias, 9).isIdentity(0)));
  EXPECT_TRUE((U.block<3, 12>(kPos, 0).isZero(0)));
}

TEST(InsNoise, CovarianceIsDiagonalOfSquaredDensities) {
  NoiseParams n;
  n.gyro = 0.1;
  n.accel = 0.1;
  n.gyro_bias_walk = 2e-3;
  n.accel_bias_walk = 3e-3;
  const ProcessNoise Q = ins_process_noise(n);
  Eigen::Matrix<double, 12, 1> d;
  d << Vector3::Constant(0.01), Vector3::Constant(0.01), Vector3::Constant(4e-6), Vector3::Constant(9e-6);
  EXPECT_LE((Q - ProcessNoise(d.asDiagonal())).norm(), 1e-16);
}

TEST(InsNoise, RejectsNonPositiveDensities) {
  for (double bad : {0.0, -0.1, std::nan("")}) {
    NoiseParams n;
    n.accel_bias_walk = bad;
    EXPECT_THROW(ins_process_noise(n), ContractViolation);
    n = NoiseParams{};
    n.gyro = bad;
    EXPECT_THROW(ins_system(n), ContractViolation);
  }
}

// One sub-step from zero covariance: only the injected noise appears.
TEST(InsNoise, GyroBiasWalkOnlyGrowsItsBlock) {
  System sys = ins_system(NoiseParams{}, kGravity);
  sys.q.setZero();
  sys.q.block<3, 3>(6, 6) = 4e-6 * Eigen::Matrix3d::Identity();
  Input u;
  u << 0, 0, 0, -kGravity;
  for (Handedness hand : {Handedness::Left, Handedness::Right}) {
    FilterState<Group> s;
    s.dist.handedness = hand;
    s.dist.sigma.setZero();
    const auto out = predict_hybrid(s, sys, u, 0.5, 1);
    Jacobian expect = Jacobian::Zero();
    expect.block<3, 3>(kGyroBias, kGyroBias) = 2e-6 * Eigen::Matrix3d::Identity();
    EXPECT_LE((out.dist.sigma - expect).norm(), 1e-20);
    EXPECT_TRUE(out.dist.ref.matrix().isIdentity(1e-15));
  }
}

TEST(InsMeasurement, ActionAxiomsAndOutput) {
  const Measurement m = ins_measurement_model(0.2);
  EXPECT_EQ(m.kind, MeasurementKind::LeftInvariant);
  EXPECT_TRUE(m.y_ref.isZero(0));
  EXPECT_LE((m.r - 0.04 * Eigen::Matrix3d::Identity()).norm(), 1e-16);
  EXPECT_NO_THROW(verify_left_invariance(m, 5, 200, 1e-12));
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const InsState s = random_state(rng);
    const Group X = s.to_group();
    EXPECT_EQ(m.h(X), m.rho(X, Vector3::Zero()));
    EXPECT_EQ(m.h(X), s.position);
  }
  EXPECT_THROW(ins_measurement_model(0.0), ContractViolation);
  EXPECT_THROW(ins_measurement_model(-1.0), ContractViolation);
}

TEST(InsMeasurement, OutputJacobianSelectsPosition) {
  const Measurement m = ins_measurement_model(0.2);
  const auto C = test::numeric_jacobian<3, 15>([&](const Tangent& e) { return m.h(Group::exp(e)); });
  Eigen::Matrix<double, 3, 15> expect = Eigen::Matrix<double, 3, 15>::Zero();
  expect.block<3, 3>(0, kPos).setIdentity();
  EXPECT_LE((C - expect).norm(), 1e-9);
  EXPECT_LE((measurement_matrix_left(m, Group::Identity()) - expect).norm(), 1e-9);
  Rng rng(6);
  const InsState s = random_state(rng);
  const Group X = s.to_group();
  const auto CX = test::numeric_jacobian<3, 15>([&](const Tangent& e) { return m.h(X * Group::exp(e)); });
  EXPECT_LE((measurement_matrix_left(m, X) - CX).norm(), 1e-6);
  EXPECT_LE((action_jacobian(m, X) - s.attitude.transpose()).norm(), 1e-9);
}

TEST(InsPropagation, GroupExponentialStepIsSecondOrderLocally) {
  Rng rng(7);
  const InsState s = random_state(rng);
  const Input u = random_input(rng);
  const Group X = s.to_group();
  auto local_error = [&](double dt) {
    const Group next = X * Group::exp(ins_lambda(X, u, kGravity) * dt);
    const Rates truth = rk4({s.attitude, s.velocity, s.position}, u, s, dt, 2000);
    return (next.matrix() - nav_matrix(truth)).norm();
  };
  const double e1 = local_error(0.02), e2 = local_error(0.01);
  EXPECT_GE(std::log2(e1 / e2), 1.9);
}

TEST(InsPropagation, StationaryStateHasNoGravityDrift) {
  Rng rng(8);
  InsState s = random_state(rng);
  s.velocity.setZero();
  s.gyro_bias.setZero();
  s.accel_bias.setZero();
  Input u;
  u << 0, 0, 0, -s.attitude.transpose() * kGravity;
  Group X = s.to_group();
  for (int k = 0; k < 1000; ++k) X = X * Group::exp(ins_lambda(X, u, kGravity) * 0.005);
  EXPECT_LE((X.matrix() - s.to_group().matrix()).norm(), 1e-9);
}

TEST(InsState, PacksLosslessly) {
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    const InsState s = random_state(rng);
    const InsState back = InsState::from_group(s.to_group());
    EXPECT_EQ(back.attitude, s.attitude);
    EXPECT_EQ(back.velocity, s.velocity);
    EXPECT_EQ(back.position, s.position);
    EXPECT_EQ(back.gyro_bias, s.gyro_bias);
    EXPECT_EQ(back.accel_bias, s.accel_bias);
  }
}

}  // namespace
}  // namespace invekf::ins
