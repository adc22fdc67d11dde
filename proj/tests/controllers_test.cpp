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

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "mrsim/errors.hpp"

using namespace mrsim;

TEST_CASE("posture_error examples") {
  const PostureError zero = posture_error(Posture{1, 2, 0.5}, Posture{1, 2, 0.5});
  CHECK(zero.longitudinal == doctest::Approx(0.0));
  CHECK(zero.lateral == doctest::Approx(0.0));
  CHECK(zero.heading == doctest::Approx(0.0));

  const PostureError ahead = posture_error(Posture{0, 0, 0}, Posture{1, 0, 0});
  CHECK(ahead.longitudinal == doctest::Approx(1.0));
  CHECK(ahead.lateral == doctest::Approx(0.0));
  CHECK(ahead.heading == doctest::Approx(0.0));

  // Offset (1, 0) seen from a frame rotated by pi/2; the independent
  // oracle is the plain 2D rotation by -theta.
  const double theta = std::numbers::pi / 2;
  const double ex_oracle = std::cos(-theta) * 1.0 - std::sin(-theta) * 0.0;
  const double ey_oracle = std::sin(-theta) * 1.0 + std::cos(-theta) * 0.0;
  const PostureError side = posture_error(Posture{0, 0, theta}, Posture{1, 0, theta});
  CHECK(side.longitudinal == doctest::Approx(ex_oracle).epsilon(1e-12));
  CHECK(side.lateral == doctest::Approx(ey_oracle).epsilon(1e-12));
  CHECK(side.longitudinal == doctest::Approx(0.0));
  CHECK(side.lateral == doctest::Approx(-1.0));
  CHECK(side.heading == doctest::Approx(0.0));
}

TEST_CASE("posture_error is invariant under rigid world transforms") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const Posture current{pos(rng), pos(rng), ang(rng)};
    const Posture reference{pos(rng), pos(rng), ang(rng)};
    const double phi = ang(rng);
    const double tx = pos(rng);
    const double ty = pos(rng);
    auto transform = [&](const Posture& p) {
      return Posture{std::cos(phi) * p.x - std::sin(phi) * p.y + tx,
                     std::sin(phi) * p.x + std::cos(phi) * p.y + ty, p.theta + phi};
    };
    const PostureError base = posture_error(current, reference);
    const PostureError moved = posture_error(transform(current), transform(reference));
    CHECK(moved.longitudinal == doctest::Approx(base.longitudinal).epsilon(1e-11));
    CHECK(moved.lateral == doctest::Approx(base.lateral).epsilon(1e-11));
    CHECK(std::abs(normalize_angle(moved.heading - base.heading)) < 1e-11);
  }
}

TEST_CASE("kanayama_control examples") {
  KanayamaGains g;
  const VelocityState pass = kanayama_control(PostureError{0, 0, 0}, 0.7, 0.3, g);
  CHECK(pass.v == doctest::Approx(0.7));
  CHECK(pass.omega == doctest::Approx(0.3));

  g.k_x = 0.5;
  const VelocityState longitudinal =
      kanayama_control(PostureError{1.0, 0, 0}, 0.0, 0.0, g);
  CHECK(longitudinal.v == doctest::Approx(0.5));
  CHECK(longitudinal.omega == doctest::Approx(0.0));

  KanayamaGains g2;
  g2.k_y = 2.0;
  g2.k_theta = 1.0;
  const VelocityState turn =
      kanayama_control(PostureError{0.0, 0.2, 0.1}, 1.0, 0.0, g2);
  CHECK(turn.omega == doctest::Approx(2.0 * 0.2 + std::sin(0.1)).epsilon(1e-12));
  CHECK(turn.omega == doctest::Approx(0.49983).epsilon(1e-5));
}

TEST_CASE("kanayama_control with zero gains reduces to the reference terms") {
  KanayamaGains zero{0.0, 0.0, 0.0};
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const PostureError e{dist(rng), dist(rng), dist(rng)};
    const double v_ref = dist(rng);
    const double omega_ref = dist(rng);
    const VelocityState out = kanayama_control(e, v_ref, omega_ref, zero);
    CHECK(out.v == v_ref * std::cos(e.heading));
    CHECK(out.omega == omega_ref);
  }
}

TEST_CASE("pid_step examples") {
  PidGains g;
  g.k_p = 2.0;
  g.k_i = 0.0;
  g.k_d = 0.0;

  PidState fresh;
  CHECK(pid_step(fresh, g, 0.0, 0.01) == doctest::Approx(0.0));
  CHECK(fresh.integral == 0.0);
  CHECK(fresh.prev_error == 0.0);

  PidState p_only;
  CHECK(pid_step(p_only, g, 1.0, 0.01) == doctest::Approx(2.0));

  PidGains integ;
  integ.k_p = 0.0;
  integ.k_i = 10.0;
  integ.k_d = 0.0;
  PidState i_state;
  CHECK(pid_step(i_state, integ, 1.0, 0.01) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("pid_step is memoryless without integral and derivative gains") {
  PidGains g;
  g.k_p = 3.0;
  g.k_i = 0.0;
  g.k_d = 0.0;
  PidState walked;
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) pid_step(walked, g, dist(rng), 0.01);

  const double probe = 0.435;
  PidState fresh;
  CHECK(pid_step(walked, g, probe, 0.01) ==
        doctest::Approx(pid_step(fresh, g, probe, 0.01)));
}

TEST_CASE("pid_step anti-windup holds for any gain") {
  SUBCASE("high integral gain") {
    PidGains g;  // k_i = 20, i_max = 10
    PidState s;
    for (int i = 0; i < 100000; ++i) pid_step(s, g, 1.0, 0.01);
    CHECK(std::abs(s.integral) <= g.i_max);
    CHECK(std::abs(g.k_i * s.integral) <= g.i_max * (1.0 + 1e-12));
  }
  SUBCASE("fractional integral gain") {
    PidGains g;
    g.k_i = 0.5;
    PidState s;
    for (int i = 0; i < 100000; ++i) pid_step(s, g, -1.0, 0.01);
    CHECK(std::abs(s.integral) <= g.i_max);
  }
}

TEST_CASE("pid_step derivative uses the error without a first-step kick") {
  PidGains g;
  g.k_p = 0.0;
  g.k_i = 0.0;
  g.k_d = 1.0;
  PidState s;
  CHECK(pid_step(s, g, 5.0, 0.1) == doctest::Approx(0.0));  // no kick
  CHECK(pid_step(s, g, 6.0, 0.1) == doctest::Approx(10.0));
}

TEST_CASE("velocity_feedback mixing structure") {
  PidGains g;
  VelocityPidState s;

  const MotorCommand idle = velocity_feedback(s, g, g, VelocityState{0.5, 0.2},
                                              VelocityState{0.5, 0.2}, 0.01);
  CHECK(idle.left == doctest::Approx(0.0));
  CHECK(idle.right == doctest::Approx(0.0));

  VelocityPidState sv;
  const MotorCommand v_only = velocity_feedback(sv, g, g, VelocityState{0.6, 0.0},
                                                VelocityState{0.4, 0.0}, 0.01);
  CHECK(v_only.left == doctest::Approx(v_only.right));
  CHECK(v_only.left > 0.0);

  VelocityPidState sw;
  const MotorCommand w_only = velocity_feedback(sw, g, g, VelocityState{0.0, 0.5},
                                                VelocityState{0.0, 0.1}, 0.01);
  CHECK(w_only.left == doctest::Approx(-w_only.right));
}

TEST_CASE("velocity_feedback is linear in the error for pure P gains") {
  PidGains g;
  g.k_i = 0.0;
  g.k_d = 0.0;
  const double a = 3.7;

  VelocityPidState s1, s2;
  const MotorCommand base = velocity_feedback(s1, g, g, VelocityState{0.2, -0.1},
                                              VelocityState{0, 0}, 0.01);
  const MotorCommand scaled = velocity_feedback(
      s2, g, g, VelocityState{a * 0.2, a * -0.1}, VelocityState{0, 0}, 0.01);
  CHECK(scaled.left == doctest::Approx(a * base.left).epsilon(1e-12));
  CHECK(scaled.right == doctest::Approx(a * base.right).epsilon(1e-12));
}

TEST_CASE("saturate: clamp and idempotence") {
  const MotorCommand inside = saturate(MotorCommand{1.0, -1.0}, 24.0);
  CHECK(inside.left == 1.0);
  CHECK(inside.right == -1.0);

  const MotorCommand clipped = saturate(MotorCommand{30.0, -30.0}, 24.0);
  CHECK(clipped.left == 24.0);
  CHECK(clipped.right == -24.0);

  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> dist(-100.0, 100.0);
  for (int i = 0; i < 300; ++i) {
    const MotorCommand u{dist(rng), dist(rng)};
    const MotorCommand once = saturate(u, 24.0);
    const MotorCommand twice = saturate(once, 24.0);
    CHECK(once.left == twice.left);
    CHECK(once.right == twice.right);
  }

  CHECK_THROWS_AS(saturate(MotorCommand{1, 1}, -1.0), ParameterError);
}
