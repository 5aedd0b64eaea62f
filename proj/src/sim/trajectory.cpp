// SPDX-License-Identifier: Apache-2.0

#include "invekf/sim/trajectory.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "invekf/errors.hpp"

namespace invekf::sim {

using ins::Matrix3;
using ins::Vector3;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// sum_k W^k / (k + 2)! for W = skew(phi)
Matrix3 gamma2(const Vector3& phi) {
  const double t = phi.norm();
  const Matrix3 W = skew<double>(phi);
  double b, c;
  if (t < 1e-3) {
    const double t2 = t * t;
    b = 1.0 / 6.0 - t2 / 120.0;
    c = 1.0 / 24.0 - t2 / 720.0;
  } else {
    const double t2 = t * t;
    b = (t - std::sin(t)) / (t2 * t);
    c = (t2 / 2.0 + std::cos(t) - 1.0) / (t2 * t2);
  }
  return 0.5 * Matrix3::Identity() + b * W + c * W * W;
}

struct Kinematics {
  Matrix3 R;
  Vector3 p, v, acc, omega;
};

// Figure-eight in the horizontal plane with a gentle climb and sinusoidal attitude.
Kinematics figure8(const SimConfig& cfg, double t) {
  const double w = 2.0 * std::numbers::pi / cfg.traj_period;
  const double S = cfg.traj_scale;
  const double tilt = cfg.traj_tilt_amp * kDegToRad;
  const double yaw = cfg.traj_yaw_amp * kDegToRad;

  Kinematics k;
  const double s1 = std::sin(w * t), c1 = std::cos(w * t);
  const double s2 = std::sin(2 * w * t), c2 = std::cos(2 * w * t);
  k.p << S * s1, 0.5 * S * s2, 0.1 * S * s1;
  k.v << S * w * c1, S * w * c2, 0.1 * S * w * c1;
  k.acc << -S * w * w * s1, -2.0 * S * w * w * s2, -0.1 * S * w * w * s1;

  const double roll = tilt * s2, droll = 2.0 * w * tilt * c2;
  const double pitch = tilt * c1, dpitch = -w * tilt * s1;
  const double head = yaw * s1, dhead = w * yaw * c1;
  k.R = (Eigen::AngleAxisd(head, Vector3::UnitZ()) * Eigen::AngleAxisd(pitch, Vector3::UnitY()) *
         Eigen::AngleAxisd(roll, Vector3::UnitX()))
            .toRotationMatrix();
  const double sr = std::sin(roll), cr = std::cos(roll);
  const double sp = std::sin(pitch), cp = std::cos(pitch);
  k.omega << droll - dhead * sp, dpitch * cr + dhead * cp * sr, -dpitch * sr + dhead * cp * cr;
  return k;
}

Kinematics line(double t) {
  Kinematics k;
  k.R = Matrix3::Identity();
  k.v << 2.0, 0.0, 0.0;
  k.p = k.v * t;
  k.acc.setZero();
  k.omega.setZero();
  return k;
}

Kinematics stationary() {
  Kinematics k;
  k.R = Matrix3::Identity();
  k.p.setZero();
  k.v.setZero();
  k.acc.setZero();
  k.omega.setZero();
  return k;
}

Kinematics kinematics(const SimConfig& cfg, double t) {
  switch (cfg.profile) {
    case Profile::Figure8: return figure8(cfg, t);
    case Profile::Line: return line(t);
    default: return stationary();
  }
}

Vector3 gravity_of(const SimConfig& cfg) { return {0.0, 0.0, -cfg.gravity}; }

}  // namespace

ins::InsState propagate_exact(const ins::InsState& x, const ins::ImuSample& u, double dt,
                              const Vector3& gravity) {
  const Vector3 phi = u.omega * dt;
  ins::InsState out = x;
  out.attitude = x.attitude * so3::exp<double>(phi);
  out.velocity = x.velocity + x.attitude * so3::dexp_right<double>(phi) * u.accel * dt + gravity * dt;
  out.position = x.position + x.velocity * dt + x.attitude * gamma2(phi) * u.accel * (dt * dt) +
                 0.5 * gravity * (dt * dt);
  return out;
}

Trajectory generate_trajectory(const SimConfig& cfg) {
  if (!(cfg.duration > 0.0)) {
    throw ContractViolation("generate_trajectory: duration must be positive");
  }
  if (cfg.profile == Profile::Csv) {
    Trajectory t = load_trajectory_csv(cfg.trajectory_csv, gravity_of(cfg));
    if (std::abs(1.0 / t.dt - cfg.imu_rate) > 1e-6 * cfg.imu_rate) {
      throw ContractViolation("generate_trajectory: CSV sampling rate differs from imu_rate");
    }
    const std::size_t n = std::min<std::size_t>(t.imu.size(), cfg.imu_samples());
    t.imu.resize(n);
    t.states.resize(n + 1);
    return t;
  }

  const Vector3 g = gravity_of(cfg);
  const int n = cfg.imu_samples();
  Trajectory out;
  out.dt = 1.0 / cfg.imu_rate;
  out.imu.reserve(n);
  out.states.reserve(n + 1);

  const Kinematics k0 = kinematics(cfg, 0.0);
  ins::InsState x;
  x.attitude = k0.R;
  x.position = k0.p;
  x.velocity = k0.v;
  out.states.push_back(x);
  for (int i = 0; i < n; ++i) {
    // Inputs sampled at the interval midpoint, then held.
    const Kinematics k = kinematics(cfg, (i + 0.5) * out.dt);
    ins::ImuSample u;
    u.timestamp = i * out.dt;
    u.omega = k.omega;
    u.accel = k.R.transpose() * (k.acc - g);
    x = propagate_exact(x, u, out.dt, g);
    out.imu.push_back(u);
    out.states.push_back(x);
  }
  return out;
}

Trajectory load_trajectory_csv(const std::filesystem::path& path, const Vector3& gravity) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trajectory file " + path.string());
  }
  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line)) {
    throw ParseError("empty trajectory file", 1);
  }
  ++row;
  line.erase(line.find_last_not_of(" \r\t") + 1);
  if (line != "t,qw,qx,qy,qz,px,py,pz") {
    throw ParseError("expected header t,qw,qx,qy,qz,px,py,pz", row);
  }

  std::vector<double> times;
  std::vector<Matrix3> rot;
  std::vector<Vector3> pos;
  std::vector<std::size_t> rows;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    double f[8];
    int count = 0;
    while (std::getline(ss, cell, ',')) {
      if (count == 8) throw ParseError("too many fields", row);
      try {
        std::size_t used = 0;
        f[count] = std::stod(cell, &used);
        if (cell.find_first_not_of(" \r\t", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + cell + "'", row);
      }
      if (!std::isfinite(f[count])) throw ParseError("non-finite value", row);
      ++count;
    }
    if (count != 8) throw ParseError("expected 8 fields", row);
    Eigen::Quaterniond q(f[1], f[2], f[3], f[4]);
    if (q.norm() < 1e-6) throw ParseError("degenerate quaternion", row);
    if (!times.empty() && !(f[0] > times.back())) throw ParseError("time is not increasing", row);
    times.push_back(f[0]);
    rot.push_back(q.normalized().toRotationMatrix());
    pos.emplace_back(f[5], f[6], f[7]);
    rows.push_back(row);
  }
  if (times.size() < 3) {
    throw ParseError("need at least three samples", row);
  }
  const double dt = (times.back() - times.front()) / double(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-6 * std::max(1.0, dt) + 1e-3 * dt) {
      throw ParseError("non-uniform sampling interval", rows[i]);
    }
  }

  const std::size_t n = times.size();
  std::vector<Vector3> vel(n);
  vel.front() = (pos[1] - pos[0]) / dt;
  vel.back() = (pos[n - 1] - pos[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    vel[i] = (pos[i + 1] - pos[i - 1]) / (2.0 * dt);
  }

  Trajectory out;
  out.dt = dt;
  ins::InsState x;
  x.attitude = rot[0];
  x.position = pos[0];
  x.velocity = vel[0];
  out.states.push_back(x);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ins::ImuSample u;
    u.timestamp = times[i] - times[0];
    u.omega = so3::log(rot[i].transpose() * rot[i + 1]) / dt;
    const Vector3 dv = vel[i + 1] - vel[i] - gravity * dt;
    u.accel = so3::dexp_right<double>(u.omega * dt).inverse() * rot[i].transpose() * dv / dt;
    x = propagate_exact(x, u, dt, gravity);
    out.imu.push_back(u);
    out.states.push_back(x);
  }
  return out;
}

SensorData synthesize_measurements(const Trajectory& truth, const SimConfig& cfg,
                                   std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto draw3 = [&](double s) {
    Vector3 n;
    for (int i = 0; i < 3; ++i) n(i) = s * normal(rng);
    return n;
  };

  const double dt = truth.dt;
  const double sq = std::sqrt(dt);
  SensorData out;
  out.imu.reserve(truth.imu.size());
  out.bias.reserve(truth.imu.size() + 1);

  Eigen::Matrix<double, 6, 1> b;
  b.head<3>() = draw3(cfg.init_gyro_bias_std);
  b.tail<3>() = draw3(cfg.init_accel_bias_std);
  out.bias.push_back(b);
  for (const auto& u : truth.imu) {
    ins::ImuSample m = u;
    m.omega += b.head<3>() + draw3(cfg.noise.gyro / sq);
    m.accel += b.tail<3>();
    m.accel += draw3(cfg.noise.accel / sq);
    out.imu.push_back(m);
    b.head<3>() += draw3(cfg.noise.gyro_bias_walk * sq);
    b.tail<3>() += draw3(cfg.noise.accel_bias_walk * sq);
    out.bias.push_back(b);
  }

  const int stride = cfg.imu_per_gnss();
  for (int k = stride; k <= static_cast<int>(truth.imu.size()); k += stride) {
    ins::GnssSample g;
    g.timestamp = k * dt;
    g.position = truth.states[k].position + draw3(cfg.gnss_std);
    out.gnss.push_back(g);
    out.gnss_index.push_back(k);
  }
  return out;
}

}  // namespace invekf::sim
