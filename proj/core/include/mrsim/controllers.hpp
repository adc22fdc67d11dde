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

#include "mrsim/vehicle_model.hpp"

namespace mrsim {

/// Tracking error expressed in the vehicle body frame: longitudinal and
/// lateral offsets plus the normalized heading error.
struct PostureError {
  double longitudinal = 0.0;  // e_x, m
  double lateral = 0.0;       // e_y, m
  double heading = 0.0;       // e_theta, rad, in (-pi, pi]
};

/// Rotates the world-frame difference (reference - current) into the
/// current body frame.
PostureError posture_error(const Posture& current, const Posture& reference);

/// Gains of the posture-tracking motion controller.
struct KanayamaGains {
  double k_x = 10.0;
  double k_y = 64.0;
  double k_theta = 16.0;

  void validate() const;
};

/// Posture-tracking law producing the velocity references
///   v     = v_ref cos(e_theta) + k_x e_x
///   omega = omega_ref + v_ref (k_y e_y + k_theta sin(e_theta))
/// The returned pair is unclamped; callers bound it via clamp_velocities.
VelocityState kanayama_control(const PostureError& e, double v_ref, double omega_ref,
                               const KanayamaGains& g);

/// Per-channel PID gains. i_max bounds the integral contribution k_i * I
/// in output units (volts here), the usual anti-windup limit on the
/// integrator's actuator authority.
struct PidGains {
  double k_p = 8.0;
  double k_i = 20.0;
  double k_d = 0.0;
  double i_max = 10.0;

  void validate() const;
};

/// Integrator accumulator and previous error of one PID channel.
struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool has_prev = false;
};

/// One discrete PID update. The derivative acts on the error and uses
/// prev_error = error on the very first step (no derivative kick).
/// Updates state in place and returns the controller output.
double pid_step(PidState& state, const PidGains& g, double error, double dt);

/// PID states for the two velocity channels.
struct VelocityPidState {
  PidState v;
  PidState omega;
};

/// Inner-loop feedback controller: runs one PID per velocity channel and
/// mixes the channel outputs (u_v, u_w) into per-wheel voltages
/// u_l = u_v - u_w, u_r = u_v + u_w.
MotorCommand velocity_feedback(VelocityPidState& state, const PidGains& v_gains,
                               const PidGains& omega_gains, const VelocityState& ref,
                               const VelocityState& measured, double dt);

/// Componentwise voltage clamp to [-u_max, u_max].
MotorCommand saturate(const MotorCommand& u, double u_max);

}  // namespace mrsim
