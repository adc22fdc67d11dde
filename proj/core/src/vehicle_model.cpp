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

#include "mrsim/vehicle_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mrsim/errors.hpp"

namespace mrsim {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw ParameterError(message);
}

}  // namespace

void RobotParams::validate() const {
  require(mass_kg > 0.0, "robot: mass_kg must be > 0");
  require(inertia_kgm2 > 0.0, "robot: inertia_kgm2 must be > 0");
  require(wheel_radius_m > 0.0, "robot: wheel_radius_m must be > 0");
  require(half_track_m > 0.0, "robot: half_track_m must be > 0");
  require(wheelbase_m > 0.0, "robot: wheelbase_m must be > 0");
  require(gear_ratio >= 1.0, "robot: gear_ratio must be >= 1");
  require(torque_constant > 0.0, "robot: torque_constant must be > 0");
  require(terminal_resistance > 0.0, "robot: terminal_resistance must be > 0");
  require(back_emf_constant >= 0.0, "robot: back_emf_constant must be >= 0");
  require(no_load_current >= 0.0, "robot: no_load_current must be >= 0");
  require(v_max > 0.0, "robot: v_max must be > 0");
  require(omega_max > 0.0, "robot: omega_max must be > 0");
  // u_max == 0 is allowed: it models a disabled actuator.
  require(u_max >= 0.0, "robot: u_max must be >= 0");
}

double normalize_angle(double angle) {
  angle = std::fmod(angle, 2.0 * std::numbers::pi);
  if (angle > std::numbers::pi) {
    angle -= 2.0 * std::numbers::pi;
  } else if (angle <= -std::numbers::pi) {
    angle += 2.0 * std::numbers::pi;
  }
  return angle;
}

CarKinState kinematic_derivative(const CarKinState& s, double u1, double u2,
                                 const RobotParams& p, SignConvention convention,
                                 double steer_limit) {
  p.validate();
  if (!(steer_limit > 0.0)) throw ParameterError("steer_limit must be > 0");
  if (std::abs(s.steer) > steer_limit) {
    throw DomainError("steering angle " + std::to_string(s.steer) +
                      " exceeds limit " + std::to_string(steer_limit));
  }

  const double cos_theta = std::cos(s.theta);
  const double sin_theta = std::sin(s.theta);
  const double cos_steer = std::cos(s.steer);
  const double sin_steer = std::sin(s.steer);
  const double y_sign = (convention == SignConvention::Standard) ? 1.0 : -1.0;
  const double d_over_l = p.half_track_m / p.wheelbase_m;

  CarKinState d;
  d.x = cos_theta * cos_steer * u1;
  d.y = y_sign * sin_theta * cos_steer * u1;
  d.theta = sin_steer * u1 / p.wheelbase_m;
  d.steer = u2;
  d.front_wheel_angle = u1 / p.wheel_radius_m;
  d.left_wheel_angle = (cos_steer + d_over_l * sin_steer) * u1 / p.wheel_radius_m;
  d.right_wheel_angle = (cos_steer - d_over_l * sin_steer) * u1 / p.wheel_radius_m;
  return d;
}

Posture steering_kinematics(const Posture& pose, const VelocityState& eta) {
  return Posture{eta.v * std::cos(pose.theta), eta.v * std::sin(pose.theta),
                 eta.omega};
}

double motor_torque(double u, double v_wheel, const RobotParams& p) {
  p.validate();
  const double rpm_per_mps =
      60.0 * p.gear_ratio / (2.0 * std::numbers::pi * p.wheel_radius_m);
  const double drive = p.torque_constant / p.terminal_resistance * u;
  const double back_emf = p.torque_constant * p.back_emf_constant /
                          p.terminal_resistance * rpm_per_mps * v_wheel;
  const double no_load = p.torque_constant * p.no_load_current;
  return p.gear_ratio * (drive - back_emf - no_load);
}

WheelVelocities wheel_velocities(const VelocityState& eta, const RobotParams& p) {
  return WheelVelocities{eta.v - p.half_track_m * eta.omega,
                         eta.v + p.half_track_m * eta.omega};
}

VelocityState body_velocities(const WheelVelocities& w, const RobotParams& p) {
  return VelocityState{0.5 * (w.left + w.right),
                       (w.right - w.left) / (2.0 * p.half_track_m)};
}

BodyAcceleration dynamic_derivative(const VelocityState& eta, const MotorCommand& u,
                                    const RobotParams& p) {
  const WheelVelocities w = wheel_velocities(eta, p);
  const WheelTorques torques{motor_torque(u.left, w.left, p),
                             motor_torque(u.right, w.right, p)};
  // Coefficient layout kept in one place: (P_r + P_l)/(2 r M) and
  // r (P_r - P_l)/(2 D J).
  const double v_dot = (torques.right + torques.left) /
                       (2.0 * p.wheel_radius_m * p.mass_kg);
  const double omega_dot = p.wheel_radius_m * (torques.right - torques.left) /
                           (2.0 * p.half_track_m * p.inertia_kgm2);
  return BodyAcceleration{v_dot, omega_dot};
}

VelocityState clamp_velocities(const VelocityState& eta, const RobotParams& p) {
  return VelocityState{std::clamp(eta.v, -p.v_max, p.v_max),
                       std::clamp(eta.omega, -p.omega_max, p.omega_max)};
}

void UncertaintySpec::validate() const {
  require(mass_factor > 0.0, "uncertainty: mass_factor must be > 0");
  require(inertia_factor > 0.0, "uncertainty: inertia_factor must be > 0");
  require(radius_factor > 0.0, "uncertainty: radius_factor must be > 0");
}

RobotParams perturb_params(const RobotParams& nominal, const UncertaintySpec& spec) {
  spec.validate();
  RobotParams truth = nominal;
  truth.mass_kg *= spec.mass_factor;
  truth.inertia_kgm2 *= spec.inertia_factor;
  truth.wheel_radius_m *= spec.radius_factor;
  return truth;
}

}  // namespace mrsim
