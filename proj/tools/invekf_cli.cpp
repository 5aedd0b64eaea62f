// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver for the equivalence, sub-step sweep, reset ablation and
// single-run experiments. Exit codes: 0 success, 1 usage or input error,
// 2 a result outside its acceptance threshold.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invekf/errors.hpp"
#include "invekf/sim/experiments.hpp"

namespace fs = std::filesystem;
using namespace invekf::sim;

namespace {

constexpr int kExitBreach = 2;

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> sets;
  std::optional<int> trials;
  std::optional<int> substeps;
  std::optional<std::uint64_t> seed;
  bool progress = false;
};

std::string keys_help() {
  std::string text = "Configuration keys (--set KEY=VALUE or one KEY=VALUE per line in --config):\n";
  const SimConfig defaults;
  const std::string values = to_string(defaults);
  for (const auto& key : config_keys()) {
    std::string current;
    const std::string prefix = std::string(key.name) + "=";
    if (auto pos = values.find("\n" + prefix); pos != std::string::npos || values.rfind(prefix, 0) == 0) {
      const auto begin = (pos == std::string::npos ? 0 : pos + 1) + prefix.size();
      current = values.substr(begin, values.find('\n', begin) - begin);
    }
    char line[256];
    std::snprintf(line, sizeof line, "  %-20s %s [default: %s]\n", std::string(key.name).c_str(),
                  std::string(key.help).c_str(), current.c_str());
    text += line;
  }
  return text;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "KEY=VALUE configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out_dir, "output directory (created if missing)")->capture_default_str();
  sub->add_option("--set", c.sets, "override one configuration key, KEY=VALUE (repeatable)")
      ->allow_extra_args(false);
  sub->add_option("--trials", c.trials, "Monte-Carlo trials");
  sub->add_option("--substeps", c.substeps, "prediction sub-steps per IMU interval");
  sub->add_option("--seed", c.seed, "base seed; trial i uses seed + i");
  sub->add_flag("--progress", c.progress, "report finished trials on stderr");
  sub->footer(keys_help());
}

SimConfig build_config(const Common& c) {
  SimConfig cfg = c.config_path.empty() ? SimConfig{} : load_config(c.config_path);
  for (const auto& s : c.sets) apply_override(cfg, s);
  if (c.trials) cfg.trials = *c.trials;
  if (c.substeps) cfg.substeps = *c.substeps;
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const Common& c, const SimConfig& cfg) {
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.txt") << to_string(cfg);
  return dir;
}

ProgressFn progress_fn(const Common& c) {
  if (!c.progress) return {};
  return [](int done, int total) { std::fprintf(stderr, "\r%d/%d trials", done, total), std::fflush(stderr); };
}

void end_progress(const Common& c) {
  if (c.progress) std::fprintf(stderr, "\n");
}

void print_summary(const EquivalenceSummary& s) {
  std::printf("trials run %d, failed %d\n", s.trials_run, s.trials_failed);
  std::printf("steady-state gap_rot %.3e deg, gap_pos %.3e m, gap_mu %.3e, airm %.3e\n", s.gap_rot, s.gap_pos,
              s.gap_mu, s.airm);
  std::printf("steady-state anees left %.3f right %.3f\n", s.anees_left, s.anees_right);
}

struct Thresholds {
  double gap_rot = 5e-4;
  double airm = 2e-3;
};

int check_equivalence(const EquivalenceSummary& s, const Thresholds& t) {
  bool ok = true;
  if (s.trials_run == 0) {
    std::printf("BREACH: every trial failed\n");
    ok = false;
  }
  if (!(s.gap_rot <= t.gap_rot)) {
    std::printf("BREACH: gap_rot %.3e deg > %.3e deg\n", s.gap_rot, t.gap_rot);
    ok = false;
  }
  if (!(s.airm <= t.airm)) {
    std::printf("BREACH: airm %.3e > %.3e\n", s.airm, t.airm);
    ok = false;
  }
  return ok ? 0 : kExitBreach;
}

int cmd_equivalence(const Common& c, const Thresholds& t) {
  SimConfig cfg = build_config(c);
  cfg.filters = FilterSet::Both;
  cfg.reset_enabled = true;
  const fs::path dir = prepare_out(c, cfg);
  const MonteCarloResult r = run_monte_carlo(cfg, progress_fn(c));
  end_progress(c);
  write_metrics_csv(r.left, dir / "rmse.csv");
  write_metrics_csv(r.right, dir / "rmse_right.csv");
  write_metrics_csv(r.left, dir / "gaps.csv");
  const EquivalenceSummary s = summarize_equivalence(r, steady_window(cfg));
  print_summary(s);
  return check_equivalence(s, t);
}

int cmd_sweep(const Common& c, const std::vector<int>& ns, const Thresholds& t) {
  if (ns.empty()) throw invekf::ContractViolation("--n-list must not be empty");
  for (int n : ns) {
    if (n < 1) throw invekf::ContractViolation("--n-list entries must be >= 1");
  }
  if (ns.size() == 1) {
    Common single = c;
    single.substeps = ns.front();
    return cmd_equivalence(single, t);
  }
  const SimConfig cfg = build_config(c);
  const fs::path dir = prepare_out(c, cfg);
  const auto rows = run_sweep(cfg, ns, progress_fn(c));
  end_progress(c);
  write_sweep_csv(rows, dir / "sweep.csv");
  std::vector<double> x, y;
  for (const auto& r : rows) {
    std::printf("N=%-3d gap_rot %.3e deg  airm %.3e  failed %d\n", r.substeps, r.summary.gap_rot, r.summary.airm,
                r.summary.trials_failed);
    x.push_back(r.substeps);
    y.push_back(r.summary.gap_rot);
  }
  const double slope = loglog_slope(x, y);
  std::printf("log-log slope of gap_rot vs N: %.3f\n", slope);
  bool ok = true;
  if (!(slope >= -1.3 && slope <= -0.7)) {
    std::printf("BREACH: slope outside [-1.3, -0.7]\n");
    ok = false;
  }
  if (!(rows.front().summary.gap_rot > rows.back().summary.gap_rot) && ns.front() < ns.back()) {
    std::printf("BREACH: gap does not decrease from N=%d to N=%d\n", ns.front(), ns.back());
    ok = false;
  }
  return ok ? 0 : kExitBreach;
}

int cmd_ablation(const Common& c) {
  const SimConfig cfg = build_config(c);
  const fs::path dir = prepare_out(c, cfg);
  const AblationResult r = run_reset_ablation(cfg, progress_fn(c));
  end_progress(c);
  write_ablation_csv(r, dir / "ablation.csv");
  const AblationSummary s = summarize_ablation(r, steady_window(cfg));
  std::printf("with reset: max relative L/R RMSE difference %.3e\n", s.max_relative_difference);
  std::printf("steady rotation RMSE [deg]: L reset %.4f, L no-reset %.4f, R reset %.4f, R no-reset %.4f\n",
              s.asym_left_reset, s.asym_left_no_reset, s.asym_right_reset, s.asym_right_no_reset);
  std::printf("transient rotation RMSE [deg], no reset: L %.4f, R %.4f\n", s.transient_left_no_reset,
              s.transient_right_no_reset);
  bool ok = true;
  if (!(s.max_relative_difference < 0.01)) {
    std::printf("BREACH: reset L and R differ by >= 1%%\n");
    ok = false;
  }
  if (!(s.asym_left_reset <= s.asym_left_no_reset && s.asym_right_reset <= s.asym_right_no_reset)) {
    std::printf("BREACH: reset does not improve the steady rotation RMSE for both filters\n");
    ok = false;
  }
  if (!(s.transient_left_no_reset < s.transient_right_no_reset)) {
    std::printf("BREACH: no-reset left transient is not below no-reset right\n");
    ok = false;
  }
  return ok ? 0 : kExitBreach;
}

int cmd_single(const Common& c) {
  const SimConfig cfg = build_config(c);
  const fs::path dir = prepare_out(c, cfg);
  const MonteCarloResult r = run_monte_carlo(cfg, progress_fn(c));
  end_progress(c);
  std::printf("trials run %d, failed %d\n", r.trials_run, r.trials_failed);
  for (const auto& [name, recs] : {std::pair{"left", &r.left}, std::pair{"right", &r.right}}) {
    if (recs->empty()) continue;
    write_metrics_csv(*recs, dir / ("metrics_" + std::string(name) + ".csv"));
    const auto& last = recs->back();
    std::printf("%-5s t=%.1f s  rot %.4f deg  pos %.4f m  vel %.4f m/s  anees %.3f\n", name, last.time,
                last.rmse_rot, last.rmse_pos, last.rmse_vel, last.anees);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Left- and right-invariant EKF experiments on a GNSS-aided INS"};
  app.require_subcommand(1);
  app.footer(keys_help());

  Common common;
  Thresholds thresholds;
  std::vector<int> n_list{1, 2, 5, 10, 20, 40, 80};

  auto* eq = app.add_subcommand("equivalence", "run both filters with reset and compare them");
  add_common(eq, common);
  eq->add_option("--max-gap-rot", thresholds.gap_rot, "steady rotation gap threshold in deg")
      ->capture_default_str();
  eq->add_option("--max-airm", thresholds.airm, "steady AIRM threshold")->capture_default_str();

  auto* sweep = app.add_subcommand("discretisation-sweep", "repeat the equivalence run for several sub-step counts");
  add_common(sweep, common);
  sweep->add_option("--n-list", n_list, "comma-separated sub-step counts")->delimiter(',')->capture_default_str();

  auto* ablation = app.add_subcommand("reset-ablation", "left and right filters with and without the reset");
  add_common(ablation, common);

  auto* single = app.add_subcommand("single-run", "run the configured filters and write their metrics");
  add_common(single, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eq->parsed()) return cmd_equivalence(common, thresholds);
    if (sweep->parsed()) return cmd_sweep(common, n_list, thresholds);
    if (ablation->parsed()) return cmd_ablation(common);
    return cmd_single(common);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
