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

#include <iosfwd>
#include <string>
#include <vector>

#include "mrsim/sim_engine.hpp"

namespace mrsim {

/// Frozen log schema. The version comment line changes whenever the
/// column set does.
inline constexpr char kCsvVersionLine[] = "# mrsim-log v1";
inline constexpr char kCsvHeader[] =
    "t_s,x_ref_m,y_ref_m,theta_ref_rad,x_m,y_m,theta_rad,"
    "v_ref_mps,omega_ref_radps,v_meas_mps,omega_meas_radps,"
    "u_fb_l_V,u_fb_r_V,u_ff_l_V,u_ff_r_V,u_l_V,u_r_V,"
    "e_x_m,e_y_m,e_theta_rad,ufb_norm_sq_V2";

/// One row per control tick, full decimal precision.
void write_csv(const std::vector<LogRecord>& log, std::ostream& out);
void write_csv_file(const std::vector<LogRecord>& log, const std::string& path);

}  // namespace mrsim
