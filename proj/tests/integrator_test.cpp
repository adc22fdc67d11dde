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

#include "mrsim/integrator.hpp"

#include <cmath>

#include <doctest.h>

using namespace mrsim;

namespace {

StateVector decay(double, const StateVector& s) { return StateVector{-s[0]}; }
StateVector constant_one(double, const StateVector&) { return StateVector{1.0}; }
StateVector zero(double, const StateVector& s) { return StateVector(s.size(), 0.0); }

double global_error(bool use_rk4, double h) {
  StateVector s{1.0};
  const int steps = static_cast<int>(std::round(1.0 / h));
  for (int i = 0; i < steps; ++i) {
    s = use_rk4 ? rk4_step(decay, s, i * h, h) : euler_step(decay, s, i * h, h);
  }
  return std::abs(s[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("euler_step basics") {
  const StateVector frozen = euler_step(zero, StateVector{2.0, -1.0}, 0.0, 0.1);
  CHECK(frozen[0] == 2.0);
  CHECK(frozen[1] == -1.0);

  CHECK(euler_step(decay, StateVector{1.0}, 0.0, 0.1)[0] == doctest::Approx(0.9));
  CHECK(euler_step(constant_one, StateVector{0.0}, 0.0, 0.05)[0] ==
        doctest::Approx(0.05));
}

TEST_CASE("rk4_step basics") {
  const StateVector frozen = rk4_step(zero, StateVector{3.0}, 0.0, 0.1);
  CHECK(frozen[0] == 3.0);

  // One decay step; the independent oracle is the degree-4 Taylor factor
  // 1 - h + h^2/2 - h^3/6 + h^4/24, which is what the scheme produces for
  // a linear field, and it must sit within h^5/120 of the exponential.
  const double h = 0.1;
  const double taylor = 1.0 - h + h * h / 2.0 - h * h * h / 6.0 +
                        h * h * h * h / 24.0;
  CHECK(taylor == doctest::Approx(0.9048375).epsilon(1e-12));
  const double stepped = rk4_step(decay, StateVector{1.0}, 0.0, h)[0];
  CHECK(stepped == doctest::Approx(taylor).epsilon(1e-15));
  CHECK(std::abs(stepped - std::exp(-h)) < 1e-7);

  CHECK(rk4_step(constant_one, StateVector{1.0}, 0.0, 0.05)[0] ==
        doctest::Approx(1.05).epsilon(1e-15));
}

TEST_CASE("convergence order on the decay equation") {
  const double euler_ratio = global_error(false, 0.1) / global_error(false, 0.05);
  CHECK(euler_ratio > 1.8);
  CHECK(euler_ratio < 2.2);

  const double rk4_ratio = global_error(true, 0.1) / global_error(true, 0.05);
  CHECK(rk4_ratio > 12.0);
  CHECK(rk4_ratio < 20.0);
}

TEST_CASE("steppers are deterministic") {
  const StateVector s{0.3, -0.7, 1.1};
  auto f = [](double t, const StateVector& v) {
    return StateVector{std::sin(v[1]) + t, v[2] * v[0], -v[1]};
  };
  const StateVector a = rk4_step(f, s, 0.2, 0.01);
  const StateVector b = rk4_step(f, s, 0.2, 0.01);
  CHECK(a == b);
  CHECK(euler_step(f, s, 0.2, 0.01) == euler_step(f, s, 0.2, 0.01));
}

TEST_CASE("rk4 degenerates to euler for state- and time-independent fields") {
  auto f = [](double, const StateVector&) { return StateVector{0.37, -1.4}; };
  const StateVector s{1.0, 2.0};
  const StateVector a = euler_step(f, s, 0.0, 0.02);
  const StateVector b = rk4_step(f, s, 0.0, 0.02);
  CHECK(b[0] == doctest::Approx(a[0]).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(a[1]).epsilon(1e-15));
}

TEST_CASE("invalid step size and non-finite derivatives are rejected") {
  CHECK_THROWS_AS(euler_step(decay, StateVector{1.0}, 0.0, 0.0), ParameterError);
  CHECK_THROWS_AS(rk4_step(decay, StateVector{1.0}, 0.0, -0.1), ParameterError);

  auto blows_up = [](double, const StateVector& s) {
    return StateVector{s[0], std::numeric_limits<double>::quiet_NaN()};
  };
  try {
    euler_step(blows_up, StateVector{1.0, 1.0}, 0.0, 0.1);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.component() == 1);
  }
}
