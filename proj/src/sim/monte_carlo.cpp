// SPDX-License-Identifier: Apache-2.0

#include "invekf/sim/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "invekf/cgd.hpp"
#include "invekf/errors.hpp"
#include "invekf/iekf.hpp"

namespace invekf::sim {
namespace {

using ins::Group;
using ins::Vector3;
using State = FilterState<Group>;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr int kFields = 6;  // rot, pos, vel, bg, ba (squared), nees

struct TrialOutput {
  bool failed = false;
  // [epoch][field] per filter
  std::vector<std::array<double, kFields>> left, right;
  // [epoch] gap_rot, gap_pos, gap_mu, airm
  std::vector<std::array<double, 4>> gaps;
};

Group true_state(const Trajectory& truth, const SensorData& data, std::size_t k) {
  ins::InsState s = truth.states[k];
  s.gyro_bias = data.bias[k].head<3>();
  s.accel_bias = data.bias[k].tail<3>();
  return s.to_group();
}

std::array<double, kFields> errors(const State& s, const Group& X) {
  const Group& Xh = s.dist.ref;
  std::array<double, kFields> e{};
  const double angle = so3::angle(Xh.nav().rotation().transpose() * X.nav().rotation());
  e[0] = std::pow(angle * kRadToDeg, 2);
  e[1] = (Xh.nav().position() - X.nav().position()).squaredNorm();
  e[2] = (Xh.nav().velocity() - X.nav().velocity()).squaredNorm();
  e[3] = (Xh.euclidean().head<3>() - X.euclidean().head<3>()).squaredNorm();
  e[4] = (Xh.euclidean().tail<3>() - X.euclidean().tail<3>()).squaredNorm();
  const ins::Tangent eps = error_coordinates(s.dist, X) - s.dist.mu;
  Eigen::LLT<ins::Jacobian> llt(s.dist.sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericError("metrics: covariance lost positive definiteness");
  }
  e[5] = eps.dot(llt.solve(eps)) / ins::Group::kDim;
  return e;
}

ins::Jacobian initial_covariance(const SimConfig& cfg) {
  Eigen::Matrix<double, 15, 1> d;
  const double att = cfg.init_att_std * std::numbers::pi / 180.0;
  d << Vector3::Constant(att * att), Vector3::Constant(cfg.init_vel_std * cfg.init_vel_std),
      Vector3::Constant(cfg.init_pos_std * cfg.init_pos_std),
      Vector3::Constant(cfg.init_gyro_bias_std * cfg.init_gyro_bias_std),
      Vector3::Constant(cfg.init_accel_bias_std * cfg.init_accel_bias_std);
  return d.asDiagonal();
}

TrialOutput run_trial(const SimConfig& cfg, const Trajectory& truth, const ins::System& system,
                      const ins::Measurement& gnss, std::uint64_t seed) {
  TrialOutput out;
  const SensorData data = synthesize_measurements(truth, cfg, seed);
  const ins::Jacobian sigma0 = initial_covariance(cfg);

  // Initial navigation error drawn from the prior; the bias error is the true
  // initial bias because the estimate starts at zero.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x1e4fu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  ins::Tangent eps;
  for (int i = 0; i < 9; ++i) eps(i) = std::sqrt(sigma0(i, i)) * normal(rng);
  eps.tail<6>() = data.bias.front();

  const Group X0 = true_state(truth, data, 0);
  ConcentratedGaussian<Group> prior;
  prior.handedness = Handedness::Left;
  prior.ref = X0 * Group::exp(-eps);
  prior.sigma = sigma0;

  const bool run_left = cfg.filters != FilterSet::Right;
  const bool run_right = cfg.filters != FilterSet::Left;
  std::optional<State> L, R;
  if (run_left) L = State{prior, 0.0};
  if (run_right) R = State{convert_handedness(prior), 0.0};

  auto finish = [&](const State& s) { return cfg.reset_enabled ? reset(s) : reset_reference_only(s); };

  try {
    std::size_t k = 0;
    for (std::size_t j = 0; j < data.gnss.size(); ++j) {
      const std::size_t stop = static_cast<std::size_t>(data.gnss_index[j]);
      for (; k < stop; ++k) {
        const ins::Input u = data.imu[k].as_input();
        if (L) L = predict_hybrid(*L, system, u, truth.dt, cfg.substeps, cfg.scheme);
        if (R) R = predict_hybrid(*R, system, u, truth.dt, cfg.substeps, cfg.scheme);
      }
      const Vector3& y = data.gnss[j].position;
      const Group X = true_state(truth, data, stop);
      double gap_mu = 0.0;
      if (L) L = update(*L, gnss, y);
      if (R) R = update(*R, gnss, y);
      if (L && R) gap_mu = equivalence_gap(L->dist, R->dist).mu_gap;
      if (L) {
        L = finish(*L);
        out.left.push_back(errors(*L, X));
      }
      if (R) {
        R = finish(*R);
        out.right.push_back(errors(*R, X));
      }
      if (L && R) {
        const auto gap = equivalence_gap(L->dist, R->dist);
        const Group& a = L->dist.ref;
        const Group& b = R->dist.ref;
        out.gaps.push_back(
            {so3::angle(a.nav().rotation().transpose() * b.nav().rotation()) * kRadToDeg,
             (a.nav().position() - b.nav().position()).norm(), gap_mu, gap.airm});
      }
    }
  } catch (const std::exception&) {
    out.failed = true;
  }
  return out;
}

std::vector<MetricsRecord> reduce(const std::vector<TrialOutput>& trials, bool left,
                                  const std::vector<double>& times) {
  std::vector<MetricsRecord> records;
  const std::size_t epochs = times.size();
  records.resize(epochs);
  std::vector<std::array<double, kFields>> sum(epochs, std::array<double, kFields>{});
  std::vector<std::array<double, 4>> gap_sum(epochs, std::array<double, 4>{});
  int count = 0;
  for (const auto& t : trials) {
    if (t.failed) continue;
    ++count;
    const auto& series = left ? t.left : t.right;
    for (std::size_t j = 0; j < epochs; ++j) {
      for (int f = 0; f < kFields; ++f) sum[j][f] += series[j][f];
      if (!t.gaps.empty()) {
        for (int f = 0; f < 4; ++f) gap_sum[j][f] += t.gaps[j][f];
      }
    }
  }
  for (std::size_t j = 0; j < epochs; ++j) {
    MetricsRecord& r = records[j];
    r.time = times[j];
    if (count == 0) continue;
    const double n = count;
    r.rmse_rot = std::sqrt(sum[j][0] / n);
    r.rmse_pos = std::sqrt(sum[j][1] / n);
    r.rmse_vel = std::sqrt(sum[j][2] / n);
    r.rmse_bg = std::sqrt(sum[j][3] / n);
    r.rmse_ba = std::sqrt(sum[j][4] / n);
    r.anees = sum[j][5] / n;
    r.gap_rot = gap_sum[j][0] / n;
    r.gap_pos = gap_sum[j][1] / n;
    r.gap_mu = gap_sum[j][2] / n;
    r.airm = gap_sum[j][3] / n;
  }
  return records;
}

}  // namespace

MonteCarloResult run_monte_carlo(const SimConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  return run_monte_carlo(cfg, generate_trajectory(cfg), progress);
}

MonteCarloResult run_monte_carlo(const SimConfig& cfg, const Trajectory& truth,
                                 const ProgressFn& progress) {
  cfg.validate();
  const Vector3 gravity(0.0, 0.0, -cfg.gravity);
  const ins::System system = ins::ins_system(cfg.noise, gravity);
  const ins::Measurement gnss = ins::ins_measurement_model(cfg.gnss_std);

  std::vector<TrialOutput> trials(cfg.trials);
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (int i = next++; i < cfg.trials; i = next++) {
      trials[i] = run_trial(cfg, truth, system, gnss, cfg.seed + static_cast<std::uint64_t>(i));
      const int finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, cfg.trials);
      }
    }
  };
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, cfg.trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<double> times;
  for (std::size_t k = cfg.imu_per_gnss(); k <= truth.imu.size(); k += cfg.imu_per_gnss()) {
    times.push_back(k * truth.dt);
  }

  MonteCarloResult result;
  result.trials_run = cfg.trials;
  for (const auto& t : trials) result.trials_failed += t.failed ? 1 : 0;
  if (cfg.filters != FilterSet::Right) result.left = reduce(trials, true, times);
  if (cfg.filters != FilterSet::Left) result.right = reduce(trials, false, times);
  return result;
}

void write_metrics_csv(const std::vector<MetricsRecord>& records,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write metrics file " + path.string());
  }
  out << "time,rmse_rot,rmse_pos,rmse_vel,rmse_bg,rmse_ba,anees,gap_rot,gap_pos,gap_mu,airm\n";
  char buf[64];
  for (const auto& r : records) {
    bool first = true;
    for (double v : {r.time, r.rmse_rot, r.rmse_pos, r.rmse_vel, r.rmse_bg, r.rmse_ba, r.anees,
                     r.gap_rot, r.gap_pos, r.gap_mu, r.airm}) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out << (first ? "" : ",") << buf;
      first = false;
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed while writing metrics file " + path.string());
  }
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open metrics file " + path.string());
  }
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line) ||
      line != "time,rmse_rot,rmse_pos,rmse_vel,rmse_bg,rmse_ba,anees,gap_rot,gap_pos,gap_mu,airm") {
    throw ParseError("unexpected metrics header", row);
  }
  std::vector<MetricsRecord> records;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + cell + "'", row);
      }
    }
    if (v.size() != 11) throw ParseError("expected 11 fields", row);
    records.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]});
  }
  return records;
}

double window_mean(const std::vector<MetricsRecord>& records, double MetricsRecord::*field,
                   double t_begin, double t_end) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : records) {
    if (r.time >= t_begin - 1e-9 && r.time <= t_end + 1e-9) {
      sum += r.*field;
      ++n;
    }
  }
  if (n == 0) throw ContractViolation("window_mean: empty window");
  return sum / n;
}

}  // namespace invekf::sim
