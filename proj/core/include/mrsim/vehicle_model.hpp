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

namespace mrsim {

/// Physical and electrical constants of the platform and its two geared
/// DC drive motors. All values are for the nominal (design) plant; the
/// simulated "true" plant is derived via perturb_params().
struct RobotParams {
  double mass_kg = 10.0;                // platform mass M
  double inertia_kgm2 = 0.5;            // yaw inertia J about the vertical axis
  double wheel_radius_m = 0.1;          // drive wheel radius r
  double half_track_m = 0.25;           // half distance between rear wheels D
  double wheelbase_m = 0.5;             // axle separation L (car-like model)
  double gear_ratio = 20.0;             // motor-to-wheel reduction N
  double torque_constant = 0.05;        // k_M, N*m/A
  double terminal_resistance = 1.0;     // R_a, ohm
  double back_emf_constant = 0.01;      // k_E, V per motor rpm
  double no_load_current = 0.0;         // I_0, A
  double v_max = 1.0;                   // linear speed bound, m/s
  double omega_max = 2.0;               // rotation speed bound, rad/s
  double u_max = 24.0;                  // motor voltage saturation, V

  /// Throws ParameterError on any out-of-range field.
  void validate() const;
};

/// Planar pose (x, y, heading) of the platform reference point, the
/// midpoint between the rear wheels. Heading convention: (-pi, pi].
struct Posture {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Linear velocity along the main axis plus rotation velocity, the two
/// controlled outputs of the platform.
struct VelocityState {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

/// Linear velocities of the left and right rear wheels.
struct WheelVelocities {
  double left = 0.0;   // m/s
  double right = 0.0;  // m/s
};

/// Terminal voltages applied to the left and right motors.
struct MotorCommand {
  double left = 0.0;   // V
  double right = 0.0;  // V
};

/// Drive torques delivered at the wheels.
struct WheelTorques {
  double left = 0.0;   // N*m
  double right = 0.0;  // N*m
};

/// Body-level accelerations produced by the platform dynamics.
struct BodyAcceleration {
  double v_dot = 0.0;      // m/s^2
  double omega_dot = 0.0;  // rad/s^2
};

/// Full state of the car-like kinematic model: pose, steering angle of
/// the orientable front wheel, and the accumulated rotation angles of
/// the front, rear-left and rear-right wheels.
struct CarKinState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double steer = 0.0;              // front wheel steering angle, rad
  double front_wheel_angle = 0.0;  // rad
  double left_wheel_angle = 0.0;   // rad
  double right_wheel_angle = 0.0;  // rad
};

/// Sign convention for the lateral (y) kinematic equation of the
/// car-like model. Standard uses +sin(theta) so the 7-state model and
/// the unicycle steering model agree; MirroredY uses -sin(theta), which
/// traces the y-mirrored path. Both are exposed for fidelity
/// experiments; Standard is the default everywhere.
enum class SignConvention { Standard, MirroredY };

inline constexpr double kDefaultSteerLimit = 1.0471975511965976;  // pi/3

/// Time derivative of the car-like kinematic state driven by the
/// forward rolling speed u1 (m/s) and the steering rate u2 (rad/s).
/// Throws DomainError when |steer| exceeds steer_limit.
CarKinState kinematic_derivative(const CarKinState& s, double u1, double u2,
                                 const RobotParams& p,
                                 SignConvention convention = SignConvention::Standard,
                                 double steer_limit = kDefaultSteerLimit);

/// Unicycle steering kinematics: returns (x_dot, y_dot, theta_dot) =
/// (v cos(theta), v sin(theta), omega) packed into a Posture.
Posture steering_kinematics(const Posture& pose, const VelocityState& eta);

/// Torque at the wheel produced by one geared DC motor at terminal
/// voltage u (V) with the wheel moving at v_wheel (m/s). Includes the
/// back-EMF term (wheel linear velocity converted to motor rpm through
/// 60*N/(2*pi*r)) and the constant no-load loss.
double motor_torque(double u, double v_wheel, const RobotParams& p);

/// Differential-drive decomposition: body (v, omega) to wheel speeds.
WheelVelocities wheel_velocities(const VelocityState& eta, const RobotParams& p);

/// Inverse of wheel_velocities.
VelocityState body_velocities(const WheelVelocities& w, const RobotParams& p);

/// Body accelerations from the platform dynamics under motor voltages u:
/// wheel speeds follow from eta, per-side torques from motor_torque, then
///   v_dot     = (P_r + P_l) / (2 r M)
///   omega_dot = r (P_r - P_l) / (2 D J)
BodyAcceleration dynamic_derivative(const VelocityState& eta, const MotorCommand& u,
                                    const RobotParams& p);

/// Componentwise clamp of (v, omega) to the configured velocity box.
VelocityState clamp_velocities(const VelocityState& eta, const RobotParams& p);

/// Multiplicative parameter-uncertainty factors applied to the nominal
/// plant; 1.0 everywhere means the true plant equals the nominal one.
struct UncertaintySpec {
  double mass_factor = 1.0;
  double inertia_factor = 1.0;
  double radius_factor = 1.0;

  /// Throws ParameterError if any factor is not strictly positive.
  void validate() const;
};

/// Builds the "true plant" parameter set by scaling mass, inertia and
/// wheel radius of the nominal set. The nominal set is not modified.
RobotParams perturb_params(const RobotParams& nominal, const UncertaintySpec& spec);

}  // namespace mrsim
