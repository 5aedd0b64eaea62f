// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth trajectories and synthetic sensor data.
//
// A trajectory holds the exact IMU inputs on every sampling interval and the
// states obtained by integrating the INS dynamics with those inputs held
// constant. The filter model and the truth therefore agree exactly in the
// limit of many sub-steps.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "invekf/ins.hpp"
#include "invekf/sim/config.hpp"

namespace invekf::sim {

struct Trajectory {
  double dt = 0.0;
  std::vector<ins::InsState> states;  ///< states[k] at t = k dt; size imu.size() + 1
  std::vector<ins::ImuSample> imu;    ///< imu[k] is held on [k dt, (k + 1) dt)
};

/// Exact flow of the bias-free INS dynamics under a constant body-frame input.
ins::InsState propagate_exact(const ins::InsState& x, const ins::ImuSample& u, double dt,
                              const ins::Vector3& gravity);

/// Builds a trajectory from the configured profile (or CSV file).
/// Throws ContractViolation for a non-positive duration and ParseError for malformed CSV.
Trajectory generate_trajectory(const SimConfig& cfg);

/// Reads ground truth `t,qw,qx,qy,qz,px,py,pz`, resamples nothing, and recovers
/// inputs by central differences. The rows must share one sampling interval.
Trajectory load_trajectory_csv(const std::filesystem::path& path, const ins::Vector3& gravity);

struct SensorData {
  std::vector<ins::ImuSample> imu;    ///< measured, noisy and biased
  std::vector<ins::GnssSample> gnss;  ///< one per GNSS epoch, first at t = 1 / gnss_rate
  std::vector<int> gnss_index;        ///< IMU step count at each GNSS epoch
  std::vector<Eigen::Matrix<double, 6, 1>> bias;  ///< true (b_omega, b_a), size imu.size() + 1
};

/// Corrupts the true inputs with white noise and a random-walk bias, and samples
/// GNSS positions. Deterministic for a given seed.
SensorData synthesize_measurements(const Trajectory& truth, const SimConfig& cfg,
                                   std::uint64_t seed);

}  // namespace invekf::sim
