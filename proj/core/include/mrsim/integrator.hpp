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

#include <cmath>
#include <cstddef>
#include <vector>

#include "mrsim/errors.hpp"

namespace mrsim {

using StateVector = std::vector<double>;

namespace detail {

inline void check_finite(const StateVector& ds, const char* where) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!std::isfinite(ds[i])) {
      throw NumericError(std::string(where) + ": non-finite derivative at component " +
                             std::to_string(i),
                         i);
    }
  }
}

}  // namespace detail

/// One explicit Euler step: s + dt * f(t, s).
template <typename F>
StateVector euler_step(F&& f, const StateVector& s, double t, double dt) {
  if (!(dt > 0.0)) throw ParameterError("euler_step: dt must be > 0");
  StateVector ds = f(t, s);
  detail::check_finite(ds, "euler_step");
  StateVector out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + dt * ds[i];
  return out;
}

/// One classical fourth-order Runge-Kutta step.
template <typename F>
StateVector rk4_step(F&& f, const StateVector& s, double t, double dt) {
  if (!(dt > 0.0)) throw ParameterError("rk4_step: dt must be > 0");
  const std::size_t n = s.size();
  StateVector k1 = f(t, s);
  detail::check_finite(k1, "rk4_step");

  StateVector tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
  StateVector k2 = f(t + 0.5 * dt, tmp);
  detail::check_finite(k2, "rk4_step");

  for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
  StateVector k3 = f(t + 0.5 * dt, tmp);
  detail::check_finite(k3, "rk4_step");

  for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + dt * k3[i];
  StateVector k4 = f(t + dt, tmp);
  detail::check_finite(k4, "rk4_step");

  StateVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace mrsim
