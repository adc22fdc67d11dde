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

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mrsim/controllers.hpp"
#include "mrsim/errors.hpp"
#include "mrsim/nn_feedforward.hpp"
#include "mrsim/trajectory.hpp"
#include "mrsim/vehicle_model.hpp"

namespace mrsim {

/// Feed-forward compensator settings. When disabled, every other field is
/// inert and the run is a plain PID experiment.
struct NnSettings {
  bool enabled = false;
  int hidden_units = 8;
  double learning_rate = 1e-3;
  double init_scale = 0.1;
  double grad_clip = 10.0;
  std::uint64_t seed = 0;
  bool seed_set = false;  // whether the experiment file pinned the seed
  /// Optional override of the feature normalization scales; empty means
  /// derive them from the robot's velocity bounds.
  std::vector<double> feature_scales;
  std::string weights_in;   // replay a saved compensator instead of mlp_init
  std::string weights_out;  // export the trained compensator after the run
};

/// Everything one closed-loop experiment needs. The controller always
/// works from the nominal RobotParams; the simulated plant uses the
/// perturbed set.
struct SimConfig {
  RobotParams robot;
  UncertaintySpec uncertainty;
  TrajectorySpec trajectory;
  KanayamaGains motion_gains;
  PidGains v_gains;
  PidGains omega_gains;
  NnSettings nn;
  double plant_dt = 1e-3;        // s
  double control_period = 0.01;  // s, integer multiple of plant_dt
  double duration = 60.0;        // s
  double noise_std_v = 0.0;      // measurement noise std, m/s
  double noise_std_omega = 0.0;  // measurement noise std, rad/s
  std::uint64_t seed = 0;        // measurement-noise seed
  bool force_zero_feedback = false;  // test hook: zero the PID teaching signal
  std::string debug_substep_path;    // optional plant substep CSV

  void validate() const;
  /// Number of control ticks (records) the run produces.
  long long control_ticks() const;
  /// Plant integration substeps per control tick.
  long long substeps() const;
};

/// One control tick of the closed loop, everything the result figures
/// plot: reference and actual postures, the velocity reference and
/// measurement, command components, and the body-frame posture error.
struct LogRecord {
  double t = 0.0;
  Posture reference;
  Posture actual;
  VelocityState eta_ref;
  VelocityState eta_meas;
  MotorCommand u_fb;
  MotorCommand u_ff;
  MotorCommand u_total;  // post-saturation, what the plant receives
  PostureError error;
  double u_fb_norm_sq = 0.0;  // learning-pressure proxy
};

/// Run aborted on a non-finite state; carries the log up to the failure.
class SimAbort : public std::runtime_error {
 public:
  SimAbort(const std::string& what, std::size_t tick, std::vector<LogRecord> partial)
      : std::runtime_error(what + " at control tick " + std::to_string(tick)),
        tick_(tick),
        partial_(std::move(partial)) {}

  std::size_t tick() const noexcept { return tick_; }
  const std::vector<LogRecord>& partial_log() const noexcept { return partial_; }

 private:
  std::size_t tick_;
  std::vector<LogRecord> partial_;
};

/// Scalar summaries of one run. "tail" slices cover the final 50% of the
/// records (indices [n/2, n)); the feedback-effort windows cover the
/// first and last max(1, n/5) records.
struct Metrics {
  double pos_rms_full = 0.0;
  double pos_max_full = 0.0;
  double pos_rms_tail = 0.0;
  double pos_max_tail = 0.0;
  double heading_rms_full = 0.0;
  double heading_max_full = 0.0;
  double heading_rms_tail = 0.0;
  double heading_max_tail = 0.0;
  double ufb_mean_first = 0.0;  // mean ||U_fb||, first 20% of records
  double ufb_mean_last = 0.0;   // mean ||U_fb||, last 20% of records
  double v_rms_full = 0.0;      // velocity-tracking RMS, v channel
  double omega_rms_full = 0.0;
  double vel_rms_full = 0.0;    // combined sqrt(mean(e_v^2 + e_w^2))
  double v_rms_tail = 0.0;
  double omega_rms_tail = 0.0;
  double vel_rms_tail = 0.0;
};

/// Throws DomainError on an empty log.
Metrics compute_metrics(const std::vector<LogRecord>& log);

/// One metric of run B against run A. All metrics are lower-is-better;
/// winner is -1 when A is strictly lower, +1 when B is, 0 on a tie.
struct MetricComparison {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double ratio = 1.0;  // b / a; 1 when both are exactly zero
  int winner = 0;
};

struct ComparisonReport {
  Metrics metrics_a;
  Metrics metrics_b;
  std::vector<MetricComparison> rows;
};

/// Side-by-side metrics of two runs of the same scenario (same tick
/// times and reference trajectory); throws UsageError otherwise.
ComparisonReport compare_runs(const std::vector<LogRecord>& log_a,
                              const std::vector<LogRecord>& log_b);

/// Owns the mutable state of one closed-loop run: plant state, PID
/// states, the compensator network, and the noise stream. One instance
/// per run; independent runs are safe to execute concurrently.
class RunContext {
 public:
  explicit RunContext(const SimConfig& cfg);
  ~RunContext();
  RunContext(RunContext&&) noexcept;
  RunContext& operator=(RunContext&&) noexcept;
  RunContext(const RunContext&) = delete;
  RunContext& operator=(const RunContext&) = delete;

  /// One pass of the control hierarchy at time t: trajectory sample,
  /// posture error, motion control, velocity feedback, compensator
  /// inference plus gated learning, saturation. Fills *record when given.
  MotorCommand control_step(double t, LogRecord* record = nullptr);

  /// Integrates the plant over one control period under a held command.
  void integrate_control_period(const MotorCommand& u, double t0);

  /// Full closed-loop run; throws SimAbort on numeric failure.
  std::vector<LogRecord> run();

  /// Plant state as [x, y, theta, v, omega].
  std::span<const double> plant_state() const;
  void set_plant_state(const Posture& pose, const VelocityState& eta);

  /// Compensator network, or nullptr when the NN is disabled.
  const Mlp* network() const;

  /// Test/debug sink invoked after every plant substep.
  using SubstepHook =
      std::function<void(double t, std::span<const double> state, const MotorCommand& u)>;
  void set_substep_hook(SubstepHook hook);

  const SimConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs the configured closed loop and returns one record per control
/// tick. Deterministic for a fixed config.
std::vector<LogRecord> run_simulation(const SimConfig& cfg);

}  // namespace mrsim
