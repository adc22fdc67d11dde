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

#include <doctest.h>

#include "mrsim/errors.hpp"

using namespace mrsim;

namespace {

TrajectorySpec line_spec() {
  TrajectorySpec s;
  s.kind = TrajectoryKind::Line;
  s.speed = 1.0;
  s.heading = 0.0;
  s.duration = 10.0;
  return s;
}

TrajectorySpec circle_spec() {
  TrajectorySpec s;
  s.kind = TrajectoryKind::Circle;
  s.radius = 2.0;
  s.speed = 1.0;
  s.duration = 60.0;
  return s;
}

TrajectorySpec lemniscate_spec() {
  TrajectorySpec s;
  s.kind = TrajectoryKind::Lemniscate;
  s.scale = 2.0;
  s.speed = 0.5;
  s.duration = 60.0;
  return s;
}

TrajectorySpec polyline_spec() {
  TrajectorySpec s;
  s.kind = TrajectoryKind::WaypointPolyline;
  s.speed = 0.5;
  s.accel = 0.5;
  s.turn_rate = 1.0;
  s.waypoints = {{0.0, 0.0}, {3.0, 0.0}, {3.0, 2.0}, {0.0, 2.0}};
  return s;
}

// Central-difference consistency of the posture path against the
// declared reference velocities.
void check_consistency(const TrajectorySpec& spec, int points, double tol) {
  const double h = 1e-4;
  const double span = spec.total_duration();
  for (int i = 0; i < points; ++i) {
    const double t = h + (span - 2.0 * h) * (i + 0.5) / points;
    const ReferencePoint mid = sample(spec, t);
    const ReferencePoint plus = sample(spec, t + h);
    const ReferencePoint minus = sample(spec, t - h);

    const double x_dot = (plus.posture.x - minus.posture.x) / (2.0 * h);
    const double y_dot = (plus.posture.y - minus.posture.y) / (2.0 * h);
    const double theta_dot =
        normalize_angle(plus.posture.theta - minus.posture.theta) / (2.0 * h);

    CHECK(std::abs(x_dot - mid.v * std::cos(mid.posture.theta)) < tol);
    CHECK(std::abs(y_dot - mid.v * std::sin(mid.posture.theta)) < tol);
    CHECK(std::abs(theta_dot - mid.omega) < tol);
  }
}

}  // namespace

TEST_CASE("line sample") {
  const ReferencePoint p = sample(line_spec(), 2.0);
  CHECK(p.posture.x == doctest::Approx(2.0));
  CHECK(p.posture.y == doctest::Approx(0.0));
  CHECK(p.posture.theta == doctest::Approx(0.0));
  CHECK(p.v == 1.0);
  CHECK(p.omega == 0.0);
}

TEST_CASE("circle sample: turn rate and closure") {
  const TrajectorySpec spec = circle_spec();
  const ReferencePoint start = sample(spec, 0.0);
  CHECK(start.omega == doctest::Approx(0.5));
  CHECK(start.v == doctest::Approx(1.0));
  CHECK(start.posture.x == doctest::Approx(0.0));
  CHECK(start.posture.y == doctest::Approx(0.0));

  const double lap = 2.0 * std::numbers::pi * spec.radius / spec.speed;
  const ReferencePoint closed = sample(spec, lap);
  CHECK(std::abs(closed.posture.x - start.posture.x) < 1e-9);
  CHECK(std::abs(closed.posture.y - start.posture.y) < 1e-9);
  CHECK(std::abs(normalize_angle(closed.posture.theta - start.posture.theta)) < 1e-9);
}

TEST_CASE("lemniscate sample: peak speed and crossing turn rate") {
  const TrajectorySpec spec = lemniscate_spec();
  const ReferencePoint start = sample(spec, 0.0);
  CHECK(start.v == doctest::Approx(spec.speed).epsilon(1e-12));
  CHECK(start.omega == doctest::Approx(3.0 * spec.speed / spec.scale).epsilon(1e-12));
}

TEST_CASE("polyline sample: rest-to-rest, passes waypoints") {
  const TrajectorySpec spec = polyline_spec();
  const double span = spec.total_duration();
  CHECK(span > 0.0);

  const ReferencePoint start = sample(spec, 0.0);
  CHECK(start.v == doctest::Approx(0.0));
  CHECK(start.posture.x == doctest::Approx(0.0));
  const ReferencePoint end = sample(spec, span);
  CHECK(end.v == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(end.posture.x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(end.posture.y == doctest::Approx(2.0).epsilon(1e-9));

  // The path visits every waypoint (minimum distance over a dense scan).
  for (const auto& wp : spec.waypoints) {
    double best = 1e9;
    for (int i = 0; i <= 2000; ++i) {
      const ReferencePoint p = sample(spec, span * i / 2000.0);
      best = std::min(best, std::hypot(p.posture.x - wp[0], p.posture.y - wp[1]));
    }
    CHECK(best < 1e-3);
  }
}

TEST_CASE("finite-difference consistency of every kind") {
  check_consistency(line_spec(), 200, 1e-6);
  check_consistency(circle_spec(), 200, 1e-6);
  check_consistency(lemniscate_spec(), 200, 1e-6);
  check_consistency(polyline_spec(), 200, 1e-6);
}

TEST_CASE("emitted references respect the velocity box") {
  const double v_max = 1.0;
  const double omega_max = 2.0;
  for (const TrajectorySpec& spec :
       {line_spec(), circle_spec(), lemniscate_spec(), polyline_spec()}) {
    spec.validate(v_max, omega_max);
    const double span = spec.total_duration();
    for (int i = 0; i <= 1000; ++i) {
      const ReferencePoint p = sample(spec, span * i / 1000.0);
      CHECK(std::abs(p.v) <= v_max * (1.0 + 1e-12));
      CHECK(std::abs(p.omega) <= omega_max * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("sample is pure") {
  const TrajectorySpec spec = lemniscate_spec();
  const ReferencePoint a = sample(spec, 12.345);
  const ReferencePoint b = sample(spec, 12.345);
  CHECK(a.posture.x == b.posture.x);
  CHECK(a.posture.y == b.posture.y);
  CHECK(a.posture.theta == b.posture.theta);
  CHECK(a.v == b.v);
  CHECK(a.omega == b.omega);
}

TEST_CASE("domain and feasibility errors") {
  const TrajectorySpec spec = circle_spec();
  CHECK_THROWS_AS(sample(spec, -0.1), DomainError);
  CHECK_THROWS_AS(sample(spec, spec.duration + 1.0), DomainError);

  TrajectorySpec tight = circle_spec();
  tight.radius = 0.1;  // speed / radius = 10 rad/s
  CHECK_THROWS_AS(tight.validate(1.0, 2.0), ParameterError);

  TrajectorySpec fast = line_spec();
  fast.speed = 3.0;
  CHECK_THROWS_AS(fast.validate(1.0, 2.0), ParameterError);

  TrajectorySpec sharp = lemniscate_spec();
  sharp.scale = 0.5;  // peak turn rate 3 v / a = 3 rad/s
  CHECK_THROWS_AS(sharp.validate(1.0, 2.0), ParameterError);

  TrajectorySpec short_poly = polyline_spec();
  short_poly.waypoints = {{0.0, 0.0}};
  CHECK_THROWS_AS(short_poly.validate(1.0, 2.0), ParameterError);

  TrajectorySpec degenerate = polyline_spec();
  degenerate.waypoints = {{0.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(degenerate.validate(1.0, 2.0), ParameterError);
}
