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

#include "mrsim/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mrsim/errors.hpp"

namespace mrsim {

namespace {

// Cubic smoothstep: C1 speed ramps (zero slope at both ends).
double ramp(double tau) { return tau * tau * (3.0 - 2.0 * tau); }
double ramp_integral(double tau) { return tau * tau * tau * (1.0 - 0.5 * tau); }
constexpr double kRampPeakSlope = 1.5;  // max of ramp'(tau)

// Quintic smootherstep: C2 heading profile for in-place turns.
double turn_shape(double tau) {
  return tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
}
double turn_shape_rate(double tau) {
  const double a = tau * (1.0 - tau);
  return 30.0 * a * a;
}
constexpr double kTurnPeakSlope = 1.875;  // max of turn_shape'(tau)

ReferencePoint sample_line(const TrajectorySpec& spec, double t) {
  const double c = std::cos(spec.heading);
  const double s = std::sin(spec.heading);
  ReferencePoint p;
  p.posture = {spec.start_x + spec.speed * t * c, spec.start_y + spec.speed * t * s,
               normalize_angle(spec.heading)};
  p.v = spec.speed;
  p.omega = 0.0;
  return p;
}

ReferencePoint sample_circle(const TrajectorySpec& spec, double t) {
  const double omega = spec.speed / spec.radius;
  const double a0 = spec.heading;
  const double a = a0 + omega * t;
  ReferencePoint p;
  p.posture = {spec.start_x + spec.radius * (std::sin(a) - std::sin(a0)),
               spec.start_y - spec.radius * (std::cos(a) - std::cos(a0)),
               normalize_angle(a)};
  p.v = spec.speed;
  p.omega = omega;
  return p;
}

// Bernoulli lemniscate x = a cos s / (1 + sin^2 s), y = a sin s cos s /
// (1 + sin^2 s). The parametric speed reduces to a / sqrt(1 + sin^2 s)
// and the turn rate to 3 cos s / (1 + sin^2 s) per unit of s, both exact.
ReferencePoint sample_lemniscate(const TrajectorySpec& spec, double t) {
  const double a = spec.scale;
  const double rate = spec.speed / a;  // ds/dt; peak path speed = a * rate
  const double s = rate * t;
  const double u = std::sin(s);
  const double c = std::cos(s);
  const double d = 1.0 + u * u;

  const double x = a * c / d;
  const double y = a * u * c / d;
  const double dx_ds = -a * u * (3.0 - u * u) / (d * d);
  const double dy_ds = a * (1.0 - 3.0 * u * u) / (d * d);

  const double ch = std::cos(spec.heading);
  const double sh = std::sin(spec.heading);
  ReferencePoint p;
  p.posture = {spec.start_x + ch * x - sh * y, spec.start_y + sh * x + ch * y,
               normalize_angle(std::atan2(dy_ds, dx_ds) + spec.heading)};
  p.v = rate * a / std::sqrt(d);
  p.omega = rate * 3.0 * c / d;
  return p;
}

// --- waypoint polyline -----------------------------------------------

struct MovePhase {
  double t0 = 0.0, t1 = 0.0;
  double x0 = 0.0, y0 = 0.0;  // segment start
  double heading = 0.0;
  double cruise = 0.0;      // cruise speed (peak speed for short segments)
  double ramp_time = 0.0;   // duration of each speed ramp
  double cruise_time = 0.0; // zero for triangular profiles
};

struct TurnPhase {
  double t0 = 0.0, t1 = 0.0;
  double x = 0.0, y = 0.0;
  double heading0 = 0.0;
  double delta = 0.0;  // signed heading change
};

struct PolylinePlan {
  std::vector<MovePhase> moves;
  std::vector<TurnPhase> turns;  // turns[i] precedes moves[i+1]
  double total = 0.0;
};

PolylinePlan build_plan(const TrajectorySpec& spec) {
  if (spec.waypoints.size() < 2) {
    throw ParameterError("trajectory: polyline needs at least 2 waypoints");
  }
  if (!(spec.accel > 0.0)) throw ParameterError("trajectory: accel must be > 0");
  if (!(spec.turn_rate > 0.0)) {
    throw ParameterError("trajectory: turn_rate must be > 0");
  }

  PolylinePlan plan;
  double t = 0.0;
  double prev_heading = 0.0;
  for (std::size_t i = 0; i + 1 < spec.waypoints.size(); ++i) {
    const double sx = spec.waypoints[i][0];
    const double sy = spec.waypoints[i][1];
    const double ex = spec.waypoints[i + 1][0];
    const double ey = spec.waypoints[i + 1][1];
    const double len = std::hypot(ex - sx, ey - sy);
    if (!(len > 0.0)) {
      throw ParameterError("trajectory: zero-length polyline segment at waypoint " +
                           std::to_string(i));
    }
    const double heading = std::atan2(ey - sy, ex - sx);

    if (i > 0) {
      const double delta = normalize_angle(heading - prev_heading);
      if (std::abs(delta) > 1e-12) {
        TurnPhase turn;
        turn.x = sx;
        turn.y = sy;
        turn.heading0 = prev_heading;
        turn.delta = delta;
        turn.t0 = t;
        turn.t1 = t + kTurnPeakSlope * std::abs(delta) / spec.turn_rate;
        t = turn.t1;
        plan.turns.push_back(turn);
      } else {
        plan.turns.push_back(TurnPhase{t, t, sx, sy, prev_heading, 0.0});
      }
    }

    MovePhase move;
    move.x0 = sx;
    move.y0 = sy;
    move.heading = heading;
    move.cruise = spec.speed;
    move.ramp_time = kRampPeakSlope * move.cruise / spec.accel;
    // Each ramp covers cruise * ramp_time / 2 of distance.
    if (len < move.cruise * move.ramp_time) {
      move.cruise = std::sqrt(len * spec.accel / kRampPeakSlope);
      move.ramp_time = kRampPeakSlope * move.cruise / spec.accel;
      move.cruise_time = 0.0;
    } else {
      move.cruise_time = (len - move.cruise * move.ramp_time) / move.cruise;
    }
    move.t0 = t;
    move.t1 = t + 2.0 * move.ramp_time + move.cruise_time;
    t = move.t1;
    plan.moves.push_back(move);
    prev_heading = heading;
  }
  plan.total = t;
  return plan;
}

ReferencePoint sample_move(const MovePhase& m, double t) {
  const double local = t - m.t0;
  double dist = 0.0;
  double speed = 0.0;
  const double ramp_dist = 0.5 * m.cruise * m.ramp_time;
  if (local < m.ramp_time) {
    const double tau = local / m.ramp_time;
    speed = m.cruise * ramp(tau);
    dist = m.cruise * m.ramp_time * ramp_integral(tau);
  } else if (local < m.ramp_time + m.cruise_time) {
    speed = m.cruise;
    dist = ramp_dist + m.cruise * (local - m.ramp_time);
  } else {
    const double tau = (local - m.ramp_time - m.cruise_time) / m.ramp_time;
    speed = m.cruise * ramp(1.0 - tau);
    dist = ramp_dist + m.cruise * m.cruise_time +
           m.cruise * m.ramp_time * (0.5 - ramp_integral(1.0 - tau));
  }
  ReferencePoint p;
  p.posture = {m.x0 + dist * std::cos(m.heading), m.y0 + dist * std::sin(m.heading),
               normalize_angle(m.heading)};
  p.v = speed;
  p.omega = 0.0;
  return p;
}

ReferencePoint sample_turn(const TurnPhase& turn, double t) {
  const double span = turn.t1 - turn.t0;
  const double tau = span > 0.0 ? (t - turn.t0) / span : 1.0;
  ReferencePoint p;
  p.posture = {turn.x, turn.y,
               normalize_angle(turn.heading0 + turn.delta * turn_shape(tau))};
  p.v = 0.0;
  p.omega = span > 0.0 ? turn.delta * turn_shape_rate(tau) / span : 0.0;
  return p;
}

// Phases alternate move[0], turn[0], move[1], turn[1], ... in time.
ReferencePoint sample_polyline(const TrajectorySpec& spec, double t) {
  const PolylinePlan plan = build_plan(spec);
  for (std::size_t i = 0; i < plan.moves.size(); ++i) {
    if (i > 0 && t < plan.moves[i].t0) return sample_turn(plan.turns[i - 1], t);
    if (t <= plan.moves[i].t1) return sample_move(plan.moves[i], t);
  }
  return sample_move(plan.moves.back(), plan.moves.back().t1);
}

}  // namespace

void TrajectorySpec::validate(double v_max, double omega_max) const {
  if (!(speed > 0.0)) throw ParameterError("trajectory: speed must be > 0");
  if (speed > v_max) {
    throw ParameterError("trajectory: speed exceeds the linear velocity bound");
  }
  switch (kind) {
    case TrajectoryKind::Line:
      if (!(duration > 0.0)) throw ParameterError("trajectory: duration must be > 0");
      break;
    case TrajectoryKind::Circle:
      if (!(radius > 0.0)) throw ParameterError("trajectory: radius must be > 0");
      if (speed / radius > omega_max) {
        throw ParameterError(
            "trajectory: circle turn rate speed/radius exceeds the rotation bound");
      }
      if (!(duration > 0.0)) throw ParameterError("trajectory: duration must be > 0");
      break;
    case TrajectoryKind::Lemniscate:
      if (!(scale > 0.0)) throw ParameterError("trajectory: scale must be > 0");
      // Peak turn rate 3 * speed / scale occurs at the self-crossing.
      if (3.0 * speed / scale > omega_max) {
        throw ParameterError(
            "trajectory: lemniscate peak turn rate exceeds the rotation bound");
      }
      if (!(duration > 0.0)) throw ParameterError("trajectory: duration must be > 0");
      break;
    case TrajectoryKind::WaypointPolyline: {
      if (turn_rate > omega_max) {
        throw ParameterError("trajectory: turn_rate exceeds the rotation bound");
      }
      build_plan(*this);  // validates waypoints, accel, turn_rate
      break;
    }
  }
}

double TrajectorySpec::total_duration() const {
  if (kind == TrajectoryKind::WaypointPolyline) return build_plan(*this).total;
  return duration;
}

ReferencePoint sample(const TrajectorySpec& spec, double t) {
  const double span = spec.total_duration();
  if (!(t >= 0.0) || t > span) {
    throw DomainError("trajectory: t = " + std::to_string(t) +
                      " outside [0, " + std::to_string(span) + "]");
  }
  switch (spec.kind) {
    case TrajectoryKind::Line:
      return sample_line(spec, t);
    case TrajectoryKind::Circle:
      return sample_circle(spec, t);
    case TrajectoryKind::Lemniscate:
      return sample_lemniscate(spec, t);
    case TrajectoryKind::WaypointPolyline:
      return sample_polyline(spec, t);
  }
  throw UsageError("trajectory: unknown kind");
}

}  // namespace mrsim
