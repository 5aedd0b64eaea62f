// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: flat key=value text, one entry per line, '#' comments.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "invekf/ins.hpp"

namespace invekf::sim {

enum class Profile { Figure8, Line, Static, Csv };
enum class FilterSet { Left, Right, Both };

struct SimConfig {
  int trials = 100;
  double duration = 80.0;   ///< s
  int imu_rate = 200;       ///< Hz
  int gnss_rate = 10;       ///< Hz
  int substeps = 80;
  IntegrationScheme scheme = IntegrationScheme::Euler;

  Profile profile = Profile::Figure8;
  std::string trajectory_csv;
  double traj_scale = 10.0;    ///< m, figure-eight half-width
  double traj_period = 10.0;   ///< s, one figure-eight lap
  double traj_tilt_amp = 10.0;  ///< deg, roll and pitch amplitude
  double traj_yaw_amp = 30.0;   ///< deg, yaw amplitude

  double init_att_std = 20.0;       ///< deg per axis
  double init_vel_std = 1.0;        ///< m/s per axis
  double init_pos_std = 1.0;        ///< m per axis
  double init_gyro_bias_std = 0.01;   ///< rad/s per axis
  double init_accel_bias_std = 0.05;  ///< m/s^2 per axis

  ins::NoiseParams noise{0.02, 0.02, 1e-3, 1e-3};
  double gnss_std = 0.2;  ///< m per axis
  double gravity = 9.81;  ///< m/s^2, pointing along -z

  std::uint64_t seed = 1;
  bool reset_enabled = true;
  FilterSet filters = FilterSet::Both;
  int threads = 0;  ///< 0 selects the hardware concurrency

  /// Throws ContractViolation when an invariant is broken.
  void validate() const;

  int imu_samples() const;
  int imu_per_gnss() const { return imu_rate / gnss_rate; }
};

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

/// Every accepted key with a one-line description.
const std::vector<ConfigKey>& config_keys();

/// Applies one `key=value` assignment. Unknown keys and malformed values throw
/// ContractViolation.
void apply_override(SimConfig& cfg, std::string_view assignment);
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);

/// Reads a config file on top of `base`. Throws ParseError with the line number.
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

/// Serialises every key, suitable for load_config.
std::string to_string(const SimConfig& cfg);

}  // namespace invekf::sim
