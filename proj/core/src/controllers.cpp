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

#include "mrsim/controllers.hpp"

#include <algorithm>
#include <cmath>

#include "mrsim/errors.hpp"

namespace mrsim {

PostureError posture_error(const Posture& current, const Posture& reference) {
  const double dx = reference.x - current.x;
  const double dy = reference.y - current.y;
  const double c = std::cos(current.theta);
  const double s = std::sin(current.theta);
  return PostureError{c * dx + s * dy, -s * dx + c * dy,
                      normalize_angle(reference.theta - current.theta)};
}

void KanayamaGains::validate() const {
  if (!(k_x >= 0.0 && k_y >= 0.0 && k_theta >= 0.0)) {
    throw ParameterError("motion_controller: gains must be >= 0");
  }
}

VelocityState kanayama_control(const PostureError& e, double v_ref, double omega_ref,
                               const KanayamaGains& g) {
  g.validate();
  const double v = v_ref * std::cos(e.heading) + g.k_x * e.longitudinal;
  const double omega =
      omega_ref + v_ref * (g.k_y * e.lateral + g.k_theta * std::sin(e.heading));
  return VelocityState{v, omega};
}

void PidGains::validate() const {
  if (!(k_p >= 0.0 && k_i >= 0.0 && k_d >= 0.0)) {
    throw ParameterError("velocity_controller: PID gains must be >= 0");
  }
  if (!(i_max > 0.0)) {
    throw ParameterError("velocity_controller: i_max must be > 0");
  }
}

double pid_step(PidState& state, const PidGains& g, double error, double dt) {
  if (!(dt > 0.0)) throw ParameterError("pid_step: dt must be > 0");

  // Anti-windup: the accumulator is clamped so the integral term
  // k_i * integral never exceeds i_max in magnitude, and the accumulator
  // itself never exceeds i_max either.
  const double acc_limit =
      g.k_i > 0.0 ? std::min(g.i_max, g.i_max / g.k_i) : g.i_max;
  state.integral = std::clamp(state.integral + error * dt, -acc_limit, acc_limit);

  const double prev = state.has_prev ? state.prev_error : error;
  const double derivative = (error - prev) / dt;
  state.prev_error = error;
  state.has_prev = true;

  return g.k_p * error + g.k_i * state.integral + g.k_d * derivative;
}

MotorCommand velocity_feedback(VelocityPidState& state, const PidGains& v_gains,
                               const PidGains& omega_gains, const VelocityState& ref,
                               const VelocityState& measured, double dt) {
  const double u_v = pid_step(state.v, v_gains, ref.v - measured.v, dt);
  const double u_w = pid_step(state.omega, omega_gains, ref.omega - measured.omega, dt);
  return MotorCommand{u_v - u_w, u_v + u_w};
}

MotorCommand saturate(const MotorCommand& u, double u_max) {
  if (!(u_max >= 0.0)) throw ParameterError("saturate: u_max must be >= 0");
  return MotorCommand{std::clamp(u.left, -u_max, u_max),
                      std::clamp(u.right, -u_max, u_max)};
}

}  // namespace mrsim
