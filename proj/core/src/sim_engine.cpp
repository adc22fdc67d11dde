// Copyright 2026 The mrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <utility>

#include "mrsim/integrator.hpp"

namespace mrsim {

namespace {

constexpr double kTickSnap = 1e-6;  // relative slack when counting ticks

long long near_integer_count(double span, double step) {
  const double q = span / step;
  const double rounded = std::round(q);
  if (std::abs(q - rounded) <= kTickSnap * std::max(1.0, std::abs(q))) {
    return static_cast<long long>(rounded);
  }
  return static_cast<long long>(q) + 1;  // ticks strictly inside the span
}

// Deterministic standard normal draws (Box-Muller over the raw 64-bit
// stream), independent of the standard library's distribution internals.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = unit();
    } while (u1 <= 0.0);
    const double u2 = unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

void SimConfig::validate() const {
  robot.validate();
  uncertainty.validate();
  motion_gains.validate();
  v_gains.validate();
  omega_gains.validate();
  trajectory.validate(robot.v_max, robot.omega_max);

  if (!(plant_dt > 0.0)) throw ParameterError("sim: plant_dt_s must be > 0");
  if (!(control_period > 0.0)) {
    throw ParameterError("sim: control_period_s must be > 0");
  }
  if (!(duration >= 0.0)) throw ParameterError("sim: duration_s must be >= 0");

  const double q = control_period / plant_dt;
  if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q) || std::round(q) < 1.0) {
    throw ParameterError(
        "sim: control_period_s must be a positive integer multiple of plant_dt_s");
  }
  if (duration > trajectory.total_duration() * (1.0 + 1e-12)) {
    throw ParameterError("sim: duration_s exceeds the trajectory time span");
  }
  if (!(noise_std_v >= 0.0) || !(noise_std_omega >= 0.0)) {
    throw ParameterError("sim: measurement noise std must be >= 0");
  }
  if (nn.enabled) {
    if (nn.hidden_units < 1) throw ParameterError("nn: hidden_units must be >= 1");
    if (!(nn.learning_rate >= 0.0)) {
      throw ParameterError("nn: learning_rate must be >= 0");
    }
    if (!(nn.init_scale >= 0.0)) throw ParameterError("nn: init_scale must be >= 0");
    if (!(nn.grad_clip >= 0.0)) throw ParameterError("nn: grad_clip must be >= 0");
    if (!nn.feature_scales.empty() &&
        nn.feature_scales.size() != static_cast<std::size_t>(kFeatureCount)) {
      throw ParameterError("nn: feature_scales needs exactly 6 values");
    }
    for (double s : nn.feature_scales) {
      if (!(s > 0.0)) throw ParameterError("nn: feature scales must be > 0");
    }
  }
}

long long SimConfig::control_ticks() const {
  if (duration <= 0.0) return 0;
  return near_integer_count(duration, control_period);
}

long long SimConfig::substeps() const {
  return static_cast<long long>(std::round(control_period / plant_dt));
}

struct RunContext::Impl {
  SimConfig cfg;
  RobotParams true_params;
  StateVector state;  // [x, y, theta, v, omega]
  VelocityPidState pids;
  FeatureTracker features;
  Mlp net;
  bool nn_active = false;
  GaussianSource noise;
  SubstepHook substep_hook;
  std::ofstream substep_file;

  explicit Impl(const SimConfig& config)
      : cfg(config),
        true_params(perturb_params(config.robot, config.uncertainty)),
        state(5, 0.0),
        noise(config.seed) {
    cfg.validate();
    if (cfg.nn.enabled) {
      if (!cfg.nn.weights_in.empty()) {
        net = load_mlp_file(cfg.nn.weights_in);
        if (net.n_in != kFeatureCount || net.n_out != 2) {
          throw ConfigError("nn: weights_in record has incompatible layer sizes");
        }
      } else {
        net = mlp_init(kFeatureCount, cfg.nn.hidden_units, 2, cfg.nn.seed,
                       cfg.nn.init_scale);
        net.grad_clip = cfg.nn.grad_clip;
      }
      nn_active = true;
      FeatureScales scales = FeatureScales::from_limits(cfg.robot.v_max,
                                                        cfg.robot.omega_max);
      if (!cfg.nn.feature_scales.empty()) {
        std::copy(cfg.nn.feature_scales.begin(), cfg.nn.feature_scales.end(),
                  scales.values.begin());
      }
      features = FeatureTracker(scales);
    }
    if (!cfg.debug_substep_path.empty()) {
      substep_file.open(cfg.debug_substep_path);
      if (!substep_file) {
        throw ConfigError("cannot open substep log for writing: " +
                          cfg.debug_substep_path);
      }
      substep_file << "t_s,x_m,y_m,theta_rad,v_mps,omega_radps,u_l_V,u_r_V\n";
    }

    if (cfg.control_ticks() > 0) {
      const ReferencePoint start = sample(cfg.trajectory, 0.0);
      state[0] = start.posture.x;
      state[1] = start.posture.y;
      state[2] = start.posture.theta;
    }
  }

  StateVector derivative(double /*t*/, const StateVector& s,
                         const MotorCommand& u) const {
    const Posture pose{s[0], s[1], s[2]};
    const VelocityState eta{s[3], s[4]};
    const Posture kin = steering_kinematics(pose, eta);
    const BodyAcceleration acc = dynamic_derivative(eta, u, true_params);
    return StateVector{kin.x, kin.y, kin.theta, acc.v_dot, acc.omega_dot};
  }

  void emit_substep(double t, const MotorCommand& u) {
    if (substep_hook) substep_hook(t, state, u);
    if (substep_file.is_open()) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, state[0],
                    state[1], state[2], state[3], state[4], u.left, u.right);
      substep_file << buf;
    }
  }
};

RunContext::RunContext(const SimConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
RunContext::~RunContext() = default;
RunContext::RunContext(RunContext&&) noexcept = default;
RunContext& RunContext::operator=(RunContext&&) noexcept = default;

MotorCommand RunContext::control_step(double t, LogRecord* record) {
  Impl& im = *impl_;
  const ReferencePoint ref = sample(im.cfg.trajectory, t);
  const Posture actual{im.state[0], im.state[1], im.state[2]};
  const VelocityState true_eta{im.state[3], im.state[4]};

  VelocityState measured = true_eta;
  if (im.cfg.noise_std_v > 0.0) measured.v += im.cfg.noise_std_v * im.noise.next();
  if (im.cfg.noise_std_omega > 0.0) {
    measured.omega += im.cfg.noise_std_omega * im.noise.next();
  }

  const PostureError err = posture_error(actual, ref.posture);
  const VelocityState eta_cmd = clamp_velocities(
      kanayama_control(err, ref.v, ref.omega, im.cfg.motion_gains), im.cfg.robot);

  MotorCommand u_fb = velocity_feedback(im.pids, im.cfg.v_gains, im.cfg.omega_gains,
                                        eta_cmd, measured, im.cfg.control_period);
  if (im.cfg.force_zero_feedback) u_fb = MotorCommand{0.0, 0.0};

  MotorCommand u_ff{0.0, 0.0};
  MlpCache cache;
  if (im.nn_active) {
    const auto x = im.features.build(eta_cmd, measured, im.cfg.control_period);
    cache = mlp_forward(im.net, x);
    u_ff = MotorCommand{cache.output[0], cache.output[1]};
  }

  const MotorCommand pre{u_fb.left + u_ff.left, u_fb.right + u_ff.right};
  const MotorCommand u_total = saturate(pre, im.cfg.robot.u_max);
  const bool railed = std::abs(pre.left) >= im.cfg.robot.u_max ||
                      std::abs(pre.right) >= im.cfg.robot.u_max;

  // Feedback-error learning, gated off while the actuator is clipping.
  if (im.nn_active && !railed && im.cfg.nn.learning_rate > 0.0) {
    const std::array<double, 2> output_error{-u_fb.left, -u_fb.right};
    mlp_update(im.net, mlp_backward(im.net, cache, output_error),
               im.cfg.nn.learning_rate);
  }

  if (record != nullptr) {
    record->t = t;
    record->reference = ref.posture;
    record->actual = actual;
    record->eta_ref = eta_cmd;
    record->eta_meas = measured;
    record->u_fb = u_fb;
    record->u_ff = u_ff;
    record->u_total = u_total;
    record->error = err;
    record->u_fb_norm_sq = u_fb.left * u_fb.left + u_fb.right * u_fb.right;
  }
  return u_total;
}

void RunContext::integrate_control_period(const MotorCommand& u, double t0) {
  Impl& im = *impl_;
  const long long n = im.cfg.substeps();
  auto f = [&im, &u](double t, const StateVector& s) { return im.derivative(t, s, u); };
  for (long long i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * im.cfg.plant_dt;
    im.state = rk4_step(f, im.state, t, im.cfg.plant_dt);
    im.state[2] = normalize_angle(im.state[2]);
    for (std::size_t c = 0; c < im.state.size(); ++c) {
      if (!std::isfinite(im.state[c])) {
        throw NumericError("plant state became non-finite at component " +
                               std::to_string(c),
                           c);
      }
    }
    im.emit_substep(t + im.cfg.plant_dt, u);
  }
}

std::vector<LogRecord> RunContext::run() {
  Impl& im = *impl_;
  const long long ticks = im.cfg.control_ticks();
  std::vector<LogRecord> log;
  log.reserve(static_cast<std::size_t>(ticks));
  for (long long k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * im.cfg.control_period;
    try {
      LogRecord record;
      const MotorCommand u = control_step(t, &record);
      log.push_back(record);
      integrate_control_period(u, t);
    } catch (const NumericError& e) {
      throw SimAbort(e.what(), static_cast<std::size_t>(k), std::move(log));
    }
  }
  return log;
}

std::span<const double> RunContext::plant_state() const { return impl_->state; }

void RunContext::set_plant_state(const Posture& pose, const VelocityState& eta) {
  impl_->state = {pose.x, pose.y, normalize_angle(pose.theta), eta.v, eta.omega};
}

const Mlp* RunContext::network() const {
  return impl_->nn_active ? &impl_->net : nullptr;
}

void RunContext::set_substep_hook(SubstepHook hook) {
  impl_->substep_hook = std::move(hook);
}

const SimConfig& RunContext::config() const { return impl_->cfg; }

std::vector<LogRecord> run_simulation(const SimConfig& cfg) {
  RunContext ctx(cfg);
  std::vector<LogRecord> log = ctx.run();
  if (cfg.nn.enabled && !cfg.nn.weights_out.empty()) {
    save_mlp_file(*ctx.network(), cfg.nn.weights_out);
  }
  return log;
}

namespace {

struct Accumulator {
  double sum_sq = 0.0;
  double peak = 0.0;
  std::size_t count = 0;

  void add(double value) {
    sum_sq += value * value;
    peak = std::max(peak, std::abs(value));
    ++count;
  }
  double rms() const { return count > 0 ? std::sqrt(sum_sq / count) : 0.0; }
};

}  // namespace

Metrics compute_metrics(const std::vector<LogRecord>& log) {
  if (log.empty()) throw DomainError("compute_metrics: empty log");
  const std::size_t n = log.size();
  const std::size_t tail_start = n / 2;
  const std::size_t window = std::max<std::size_t>(1, n / 5);

  Metrics m;
  Accumulator pos_full, pos_tail, head_full, head_tail;
  Accumulator v_full, v_tail, w_full, w_tail;
  double vel_sq_full = 0.0, vel_sq_tail = 0.0;
  double ufb_first = 0.0, ufb_last = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const LogRecord& r = log[i];
    const double pos = hypot2(r.error.longitudinal, r.error.lateral);
    const double heading = std::abs(r.error.heading);
    const double ev = r.eta_ref.v - r.eta_meas.v;
    const double ew = r.eta_ref.omega - r.eta_meas.omega;

    pos_full.add(pos);
    head_full.add(heading);
    v_full.add(ev);
    w_full.add(ew);
    vel_sq_full += ev * ev + ew * ew;
    if (i >= tail_start) {
      pos_tail.add(pos);
      head_tail.add(heading);
      v_tail.add(ev);
      w_tail.add(ew);
      vel_sq_tail += ev * ev + ew * ew;
    }
    if (i < window) ufb_first += hypot2(r.u_fb.left, r.u_fb.right);
    if (i >= n - window) ufb_last += hypot2(r.u_fb.left, r.u_fb.right);
  }

  m.pos_rms_full = pos_full.rms();
  m.pos_max_full = pos_full.peak;
  m.pos_rms_tail = pos_tail.rms();
  m.pos_max_tail = pos_tail.peak;
  m.heading_rms_full = head_full.rms();
  m.heading_max_full = head_full.peak;
  m.heading_rms_tail = head_tail.rms();
  m.heading_max_tail = head_tail.peak;
  m.ufb_mean_first = ufb_first / static_cast<double>(window);
  m.ufb_mean_last = ufb_last / static_cast<double>(window);
  m.v_rms_full = v_full.rms();
  m.omega_rms_full = w_full.rms();
  m.vel_rms_full = std::sqrt(vel_sq_full / static_cast<double>(n));
  m.v_rms_tail = v_tail.rms();
  m.omega_rms_tail = w_tail.rms();
  m.vel_rms_tail =
      std::sqrt(vel_sq_tail / static_cast<double>(n - tail_start));
  return m;
}

namespace {

void push_row(std::vector<MetricComparison>& rows, const std::string& name, double a,
              double b) {
  MetricComparison row;
  row.name = name;
  row.a = a;
  row.b = b;
  if (a == 0.0 && b == 0.0) {
    row.ratio = 1.0;
  } else if (a == 0.0) {
    row.ratio = std::numeric_limits<double>::infinity();
  } else {
    row.ratio = b / a;
  }
  row.winner = (b < a) ? 1 : (a < b ? -1 : 0);
  rows.push_back(row);
}

}  // namespace

ComparisonReport compare_runs(const std::vector<LogRecord>& log_a,
                              const std::vector<LogRecord>& log_b) {
  if (log_a.size() != log_b.size()) {
    throw UsageError("compare_runs: logs have different lengths");
  }
  for (std::size_t i = 0; i < log_a.size(); ++i) {
    const bool same_scenario = log_a[i].t == log_b[i].t &&
                               log_a[i].reference.x == log_b[i].reference.x &&
                               log_a[i].reference.y == log_b[i].reference.y &&
                               log_a[i].reference.theta == log_b[i].reference.theta;
    if (!same_scenario) {
      throw UsageError("compare_runs: logs come from different scenarios (record " +
                       std::to_string(i) + ")");
    }
  }

  ComparisonReport report;
  report.metrics_a = compute_metrics(log_a);
  report.metrics_b = compute_metrics(log_b);
  const Metrics& a = report.metrics_a;
  const Metrics& b = report.metrics_b;
  push_row(report.rows, "pos_rms_full", a.pos_rms_full, b.pos_rms_full);
  push_row(report.rows, "pos_max_full", a.pos_max_full, b.pos_max_full);
  push_row(report.rows, "pos_rms_tail50", a.pos_rms_tail, b.pos_rms_tail);
  push_row(report.rows, "pos_max_tail50", a.pos_max_tail, b.pos_max_tail);
  push_row(report.rows, "heading_rms_full", a.heading_rms_full, b.heading_rms_full);
  push_row(report.rows, "heading_max_full", a.heading_max_full, b.heading_max_full);
  push_row(report.rows, "heading_rms_tail50", a.heading_rms_tail, b.heading_rms_tail);
  push_row(report.rows, "heading_max_tail50", a.heading_max_tail, b.heading_max_tail);
  push_row(report.rows, "ufb_mean_first20", a.ufb_mean_first, b.ufb_mean_first);
  push_row(report.rows, "ufb_mean_last20", a.ufb_mean_last, b.ufb_mean_last);
  push_row(report.rows, "v_rms_full", a.v_rms_full, b.v_rms_full);
  push_row(report.rows, "omega_rms_full", a.omega_rms_full, b.omega_rms_full);
  push_row(report.rows, "vel_rms_full", a.vel_rms_full, b.vel_rms_full);
  push_row(report.rows, "v_rms_tail50", a.v_rms_tail, b.v_rms_tail);
  push_row(report.rows, "omega_rms_tail50", a.omega_rms_tail, b.omega_rms_tail);
  push_row(report.rows, "vel_rms_tail50", a.vel_rms_tail, b.vel_rms_tail);
  return report;
}

}  // namespace mrsim
