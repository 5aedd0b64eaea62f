// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo runs of the left and right IEKF on the GNSS-aided INS, and the
// per-epoch metrics aggregated over trials.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "invekf/sim/config.hpp"
#include "invekf/sim/trajectory.hpp"

namespace invekf::sim {

/// One GNSS epoch aggregated over trials. RMSE fields are root-mean-square
/// physical errors; anees is the trial mean of e^T Sigma^-1 e / 15; gap fields
/// are trial means and stay zero unless both filters ran.
struct MetricsRecord {
  double time = 0.0;      ///< s
  double rmse_rot = 0.0;  ///< deg
  double rmse_pos = 0.0;  ///< m
  double rmse_vel = 0.0;  ///< m/s
  double rmse_bg = 0.0;   ///< rad/s
  double rmse_ba = 0.0;   ///< m/s^2
  double anees = 0.0;
  double gap_rot = 0.0;  ///< deg, angle between the two attitude estimates
  double gap_pos = 0.0;  ///< m, distance between the two position estimates
  double gap_mu = 0.0;   ///< |Ad(ref_L) mu_L - mu_R| after the update, before the reset
  double airm = 0.0;     ///< between the two covariances after Adjoint transport
};

struct MonteCarloResult {
  std::vector<MetricsRecord> left;   ///< empty unless the left filter ran
  std::vector<MetricsRecord> right;  ///< empty unless the right filter ran
  int trials_run = 0;
  int trials_failed = 0;

  /// The left records when present, the right ones otherwise.
  const std::vector<MetricsRecord>& primary() const { return left.empty() ? right : left; }
};

/// Called after each finished trial with (completed, total). May be empty.
using ProgressFn = std::function<void(int, int)>;

/// Runs cfg.trials independent trials on the configured trajectory. Trial i uses
/// seed cfg.seed + i; the reduction is ordered by trial index, so the result
/// does not depend on the thread count. Trials whose filter throws are excluded.
MonteCarloResult run_monte_carlo(const SimConfig& cfg, const ProgressFn& progress = {});

/// Same, on a trajectory built by the caller.
MonteCarloResult run_monte_carlo(const SimConfig& cfg, const Trajectory& truth,
                                 const ProgressFn& progress = {});

/// Header: time,rmse_rot,rmse_pos,rmse_vel,rmse_bg,rmse_ba,anees,gap_rot,gap_pos,gap_mu,airm.
/// Throws std::runtime_error naming the path on I/O failure.
void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::filesystem::path& path);
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

/// Mean of `field` over records with t_begin <= time <= t_end.
double window_mean(const std::vector<MetricsRecord>& records, double MetricsRecord::*field,
                   double t_begin, double t_end);

}  // namespace invekf::sim
