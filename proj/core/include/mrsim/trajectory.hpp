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

#include <array>
#include <vector>

#include "mrsim/vehicle_model.hpp"

namespace mrsim {

/// Reference posture plus the feed-forward reference velocities consumed
/// by the motion controller. The posture path and (v, omega) are
/// analytically consistent: x_dot = v cos(theta), y_dot = v sin(theta),
/// theta_dot = omega.
struct ReferencePoint {
  Posture posture;
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

enum class TrajectoryKind { Line, Circle, Lemniscate, WaypointPolyline };

/// Geometric description of a reference trajectory.
///
/// Line:        from (start_x, start_y) at constant heading and speed.
/// Circle:      left turn of the given radius, tangent heading at start.
/// Lemniscate:  Bernoulli figure-eight of half-length `scale` centered at
///              (start_x, start_y), rotated by `heading`; `speed` is the
///              peak path speed (reached at the self-crossing).
/// WaypointPolyline: piecewise lines through `waypoints` with smooth
///              speed ramps (peak accel `accel`) and smooth in-place
///              turns at interior corners (peak rate `turn_rate`); its
///              duration is derived from the geometry.
struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Circle;
  double speed = 0.5;
  double radius = 2.0;
  double scale = 2.0;
  double start_x = 0.0;
  double start_y = 0.0;
  double heading = 0.0;
  double duration = 60.0;
  std::vector<std::array<double, 2>> waypoints;
  double accel = 0.5;
  double turn_rate = 1.0;

  /// Feasibility against the velocity box. Throws ParameterError.
  void validate(double v_max, double omega_max) const;

  /// Time span over which sample() is defined.
  double total_duration() const;
};

/// Analytic reference at time t in [0, total_duration()]. Pure function;
/// throws DomainError outside the time span.
ReferencePoint sample(const TrajectorySpec& spec, double t);

}  // namespace mrsim
