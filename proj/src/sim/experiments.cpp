// SPDX-License-Identifier: Apache-2.0

#include "invekf/sim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "invekf/errors.hpp"

namespace invekf::sim {

namespace {

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

}  // namespace

Window steady_window(const SimConfig& cfg) { return {0.5 * cfg.duration, cfg.duration}; }

EquivalenceSummary summarize_equivalence(const MonteCarloResult& result, Window w) {
  if (result.left.empty() || result.right.empty()) {
    throw ContractViolation("summarize_equivalence: both filters must have run");
  }
  EquivalenceSummary s;
  const auto& L = result.left;
  s.gap_rot = window_mean(L, &MetricsRecord::gap_rot, w.begin, w.end);
  s.gap_pos = window_mean(L, &MetricsRecord::gap_pos, w.begin, w.end);
  s.gap_mu = window_mean(L, &MetricsRecord::gap_mu, w.begin, w.end);
  s.airm = window_mean(L, &MetricsRecord::airm, w.begin, w.end);
  s.anees_left = window_mean(L, &MetricsRecord::anees, w.begin, w.end);
  s.anees_right = window_mean(result.right, &MetricsRecord::anees, w.begin, w.end);
  s.trials_run = result.trials_run;
  s.trials_failed = result.trials_failed;
  return s;
}

std::vector<SweepRow> run_sweep(SimConfig cfg, const std::vector<int>& substeps,
                                const ProgressFn& progress) {
  cfg.filters = FilterSet::Both;
  cfg.reset_enabled = true;
  const Trajectory truth = generate_trajectory(cfg);
  std::vector<SweepRow> rows;
  for (int n : substeps) {
    cfg.substeps = n;
    cfg.validate();
    rows.push_back({n, summarize_equivalence(run_monte_carlo(cfg, truth, progress), steady_window(cfg))});
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  auto out = open_for_writing(path);
  out << "N,gap_rot,gap_pos,gap_mu,airm,anees_left,anees_right\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << r.substeps;
    for (double v : {s.gap_rot, s.gap_pos, s.gap_mu, s.airm, s.anees_left, s.anees_right}) {
      out << ',' << format(v);
    }
    out << '\n';
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ContractViolation("loglog_slope: need at least two paired samples");
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) {
      throw ContractViolation("loglog_slope: samples must be positive");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(x.size());
  my /= double(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) {
    throw ContractViolation("loglog_slope: x values must not all be equal");
  }
  return sxy / sxx;
}

AblationResult run_reset_ablation(SimConfig cfg, const ProgressFn& progress) {
  cfg.filters = FilterSet::Both;
  cfg.validate();
  const Trajectory truth = generate_trajectory(cfg);
  AblationResult out;
  cfg.reset_enabled = true;
  out.with_reset = run_monte_carlo(cfg, truth, progress);
  cfg.reset_enabled = false;
  out.without_reset = run_monte_carlo(cfg, truth, progress);
  return out;
}

AblationSummary summarize_ablation(const AblationResult& r, Window w) {
  const auto& L = r.with_reset.left;
  const auto& R = r.with_reset.right;
  const auto& Ln = r.without_reset.left;
  const auto& Rn = r.without_reset.right;
  if (L.empty() || R.empty() || Ln.empty() || Rn.empty()) {
    throw ContractViolation("summarize_ablation: every variant must have run");
  }
  AblationSummary s;
  for (std::size_t k = 0; k < L.size(); ++k) {
    for (auto f : {&MetricsRecord::rmse_rot, &MetricsRecord::rmse_pos, &MetricsRecord::rmse_vel,
                   &MetricsRecord::rmse_bg, &MetricsRecord::rmse_ba}) {
      const double a = L[k].*f, b = R[k].*f;
      const double scale = std::max(a, b);
      if (scale > 0) {
        s.max_relative_difference = std::max(s.max_relative_difference, std::abs(a - b) / scale);
      }
    }
  }
  const auto rot = &MetricsRecord::rmse_rot;
  s.asym_left_reset = window_mean(L, rot, w.begin, w.end);
  s.asym_right_reset = window_mean(R, rot, w.begin, w.end);
  s.asym_left_no_reset = window_mean(Ln, rot, w.begin, w.end);
  s.asym_right_no_reset = window_mean(Rn, rot, w.begin, w.end);
  s.transient_left_no_reset = window_mean(Ln, rot, 0.0, kTransientEnd);
  s.transient_right_no_reset = window_mean(Rn, rot, 0.0, kTransientEnd);
  return s;
}

void write_ablation_csv(const AblationResult& r, const std::filesystem::path& path) {
  const std::vector<const std::vector<MetricsRecord>*> variants{
      &r.with_reset.left, &r.with_reset.right, &r.without_reset.left, &r.without_reset.right};
  const char* names[] = {"left_reset", "right_reset", "left_no_reset", "right_no_reset"};
  auto out = open_for_writing(path);
  out << "time";
  for (const char* n : names) {
    out << ",rmse_rot_" << n << ",rmse_pos_" << n << ",rmse_vel_" << n << ",anees_" << n;
  }
  out << '\n';
  const std::size_t rows = variants[0]->size();
  for (std::size_t k = 0; k < rows; ++k) {
    out << format((*variants[0])[k].time);
    for (const auto* v : variants) {
      const MetricsRecord& m = (*v)[k];
      out << ',' << format(m.rmse_rot) << ',' << format(m.rmse_pos) << ',' << format(m.rmse_vel) << ','
          << format(m.anees);
    }
    out << '\n';
  }
}

}  // namespace invekf::sim
