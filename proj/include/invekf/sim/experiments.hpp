// SPDX-License-Identifier: Apache-2.0
//
// The three experiments built on run_monte_carlo: left/right equivalence, the
// sub-step sweep and the reset ablation, with their summary statistics.

#pragma once

#include <filesystem>
#include <vector>

#include "invekf/sim/monte_carlo.hpp"

namespace invekf::sim {

/// Window over which steady-state statistics are averaged: the second half of the run.
struct Window {
  double begin = 0.0;
  double end = 0.0;
};

Window steady_window(const SimConfig& cfg);

struct EquivalenceSummary {
  double gap_rot = 0.0;  ///< deg, steady-state mean
  double gap_pos = 0.0;  ///< m
  double gap_mu = 0.0;
  double airm = 0.0;
  double anees_left = 0.0;
  double anees_right = 0.0;
  int trials_run = 0;
  int trials_failed = 0;
};

/// Summarises a run with both filters over the steady window.
EquivalenceSummary summarize_equivalence(const MonteCarloResult& result, Window window);

struct SweepRow {
  int substeps = 0;
  EquivalenceSummary summary;
};

/// One equivalence run per entry of `substeps`, on a shared trajectory.
std::vector<SweepRow> run_sweep(SimConfig cfg, const std::vector<int>& substeps,
                                const ProgressFn& progress = {});

/// Header: N,gap_rot,gap_pos,gap_mu,airm,anees_left,anees_right.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Least-squares slope of log(y) against log(x). Needs two distinct positive x
/// and positive y; throws ContractViolation otherwise.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct AblationResult {
  MonteCarloResult with_reset;
  MonteCarloResult without_reset;
};

struct AblationSummary {
  double max_relative_difference = 0.0;  ///< with-reset L vs R, over every RMSE field and epoch
  double asym_left_reset = 0.0;          ///< deg, rotation RMSE over the steady window
  double asym_right_reset = 0.0;
  double asym_left_no_reset = 0.0;
  double asym_right_no_reset = 0.0;
  double transient_left_no_reset = 0.0;  ///< deg, rotation RMSE over the first 15 s
  double transient_right_no_reset = 0.0;
};

inline constexpr double kTransientEnd = 15.0;

/// Runs both filters with and without the covariance reset on identical data.
AblationResult run_reset_ablation(SimConfig cfg, const ProgressFn& progress = {});

AblationSummary summarize_ablation(const AblationResult& result, Window steady);

/// Header: time, then rmse_rot/rmse_pos/rmse_vel/anees for each of
/// left_reset, right_reset, left_no_reset, right_no_reset.
void write_ablation_csv(const AblationResult& result, const std::filesystem::path& path);

}  // namespace invekf::sim
