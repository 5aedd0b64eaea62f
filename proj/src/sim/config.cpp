// SPDX-License-Identifier: Apache-2.0

#include "invekf/sim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <string>

#include "invekf/errors.hpp"

namespace invekf::sim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ContractViolation("config: invalid value '" + std::string(value) + "' for key '" +
                          std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value);
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value);
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "off" || value == "no") return false;
  bad_value(key, value);
}

struct Entry {
  ConfigKey key;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

// Shortest text that parses back to the same double.
std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

#define INVEKF_DOUBLE_KEY(name, member, help)                                              \
  Entry {                                                                                   \
    {name, help}, [](SimConfig& c, std::string_view v) { c.member = parse_double(name, v); }, \
        [](const SimConfig& c) { return fmt(c.member); }                                    \
  }

#define INVEKF_INT_KEY(name, member, help)                                                   \
  Entry {                                                                                     \
    {name, help},                                                                             \
        [](SimConfig& c, std::string_view v) { c.member = parse_int<decltype(c.member)>(name, v); }, \
        [](const SimConfig& c) { return std::to_string(c.member); }                           \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      INVEKF_INT_KEY("trials", trials, "number of Monte-Carlo trials (>= 1)"),
      INVEKF_DOUBLE_KEY("duration", duration, "simulated time span in s"),
      INVEKF_INT_KEY("imu_rate", imu_rate, "IMU sampling rate in Hz"),
      INVEKF_INT_KEY("gnss_rate", gnss_rate, "GNSS rate in Hz; must divide imu_rate"),
      INVEKF_INT_KEY("substeps", substeps, "prediction sub-steps per IMU interval (>= 1)"),
      Entry{{"scheme", "sub-step integrator: euler | midpoint"},
            [](SimConfig& c, std::string_view v) {
              if (v == "euler") {
                c.scheme = IntegrationScheme::Euler;
              } else if (v == "midpoint") {
                c.scheme = IntegrationScheme::Midpoint;
              } else {
                bad_value("scheme", v);
              }
            },
            [](const SimConfig& c) {
              return std::string(c.scheme == IntegrationScheme::Euler ? "euler" : "midpoint");
            }},
      Entry{{"profile", "trajectory: figure8 | line | static | csv"},
            [](SimConfig& c, std::string_view v) {
              if (v == "figure8") {
                c.profile = Profile::Figure8;
              } else if (v == "line") {
                c.profile = Profile::Line;
              } else if (v == "static") {
                c.profile = Profile::Static;
              } else if (v == "csv") {
                c.profile = Profile::Csv;
              } else {
                bad_value("profile", v);
              }
            },
            [](const SimConfig& c) {
              switch (c.profile) {
                case Profile::Figure8: return std::string("figure8");
                case Profile::Line: return std::string("line");
                case Profile::Static: return std::string("static");
                case Profile::Csv: return std::string("csv");
              }
              return std::string();
            }},
      Entry{{"trajectory_csv", "ground-truth CSV (t,qw,qx,qy,qz,px,py,pz) used when profile=csv"},
            [](SimConfig& c, std::string_view v) { c.trajectory_csv = std::string(v); },
            [](const SimConfig& c) { return c.trajectory_csv; }},
      INVEKF_DOUBLE_KEY("traj_scale", traj_scale, "figure-eight half-width in m"),
      INVEKF_DOUBLE_KEY("traj_period", traj_period, "figure-eight lap time in s"),
      INVEKF_DOUBLE_KEY("traj_tilt_amp", traj_tilt_amp, "figure-eight roll/pitch amplitude in deg"),
      INVEKF_DOUBLE_KEY("traj_yaw_amp", traj_yaw_amp, "figure-eight yaw amplitude in deg"),
      INVEKF_DOUBLE_KEY("init_att_std", init_att_std, "initial attitude error std in deg per axis"),
      INVEKF_DOUBLE_KEY("init_vel_std", init_vel_std, "initial velocity error std in m/s per axis"),
      INVEKF_DOUBLE_KEY("init_pos_std", init_pos_std, "initial position error std in m per axis"),
      INVEKF_DOUBLE_KEY("init_gyro_bias_std", init_gyro_bias_std,
                        "initial gyro bias std in rad/s per axis"),
      INVEKF_DOUBLE_KEY("init_accel_bias_std", init_accel_bias_std,
                        "initial accelerometer bias std in m/s^2 per axis"),
      INVEKF_DOUBLE_KEY("gyro_noise", noise.gyro, "gyro white noise density in rad/s/sqrt(Hz)"),
      INVEKF_DOUBLE_KEY("accel_noise", noise.accel,
                        "accelerometer white noise density in m/s^2/sqrt(Hz)"),
      INVEKF_DOUBLE_KEY("gyro_bias_walk", noise.gyro_bias_walk,
                        "gyro bias random walk density in rad/s^2/sqrt(Hz)"),
      INVEKF_DOUBLE_KEY("accel_bias_walk", noise.accel_bias_walk,
                        "accelerometer bias random walk density in m/s^3/sqrt(Hz)"),
      INVEKF_DOUBLE_KEY("gnss_std", gnss_std, "GNSS position noise std in m per axis"),
      INVEKF_DOUBLE_KEY("gravity", gravity, "gravity magnitude in m/s^2 (acts along -z)"),
      INVEKF_INT_KEY("seed", seed, "base RNG seed; trial i uses seed + i"),
      Entry{{"reset_enabled", "apply the covariance reset after each update: true | false"},
            [](SimConfig& c, std::string_view v) { c.reset_enabled = parse_bool("reset_enabled", v); },
            [](const SimConfig& c) { return std::string(c.reset_enabled ? "true" : "false"); }},
      Entry{{"filters", "filters to run: left | right | both"},
            [](SimConfig& c, std::string_view v) {
              if (v == "left") {
                c.filters = FilterSet::Left;
              } else if (v == "right") {
                c.filters = FilterSet::Right;
              } else if (v == "both") {
                c.filters = FilterSet::Both;
              } else {
                bad_value("filters", v);
              }
            },
            [](const SimConfig& c) {
              switch (c.filters) {
                case FilterSet::Left: return std::string("left");
                case FilterSet::Right: return std::string("right");
                case FilterSet::Both: return std::string("both");
              }
              return std::string();
            }},
      INVEKF_INT_KEY("threads", threads, "worker threads; 0 uses every hardware thread"),
  };
  return table;
}

#undef INVEKF_DOUBLE_KEY
#undef INVEKF_INT_KEY

}  // namespace

void SimConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ContractViolation(std::string("config: ") + what);
  };
  require(trials >= 1, "trials must be >= 1");
  require(duration > 0.0, "duration must be positive");
  require(imu_rate > 0 && gnss_rate > 0, "rates must be positive");
  require(imu_rate % gnss_rate == 0, "imu_rate must be divisible by gnss_rate");
  require(substeps >= 1, "substeps must be >= 1");
  require(threads >= 0, "threads must be >= 0");
  for (double s : {init_att_std, init_vel_std, init_pos_std, init_gyro_bias_std,
                   init_accel_bias_std, noise.gyro, noise.accel, noise.gyro_bias_walk,
                   noise.accel_bias_walk, gnss_std}) {
    require(s > 0.0, "all standard deviations must be positive");
  }
  require(gravity >= 0.0, "gravity must be non-negative");
  require(traj_period > 0.0, "traj_period must be positive");
  require(profile != Profile::Csv || !trajectory_csv.empty(),
          "profile=csv needs trajectory_csv");
}

int SimConfig::imu_samples() const {
  return static_cast<int>(std::llround(duration * imu_rate));
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : entries()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto& e : entries()) {
    if (e.key.name == key) {
      e.set(cfg, value);
      return;
    }
  }
  throw ContractViolation("config: unknown key '" + std::string(key) + "'");
}

void apply_override(SimConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ContractViolation("config: expected KEY=VALUE, got '" + std::string(assignment) + "'");
  }
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file " + path.string());
  }
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    try {
      apply_override(base, view);
    } catch (const ContractViolation& e) {
      throw ParseError(e.what(), row);
    }
  }
  return base;
}

std::string to_string(const SimConfig& cfg) {
  std::string out;
  for (const auto& e : entries()) {
    out += std::string(e.key.name) + "=" + e.get(cfg) + "\n";
  }
  return out;
}

}  // namespace invekf::sim
