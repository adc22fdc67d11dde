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

#include "mrsim/experiment_config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "mrsim/errors.hpp"

namespace mrsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, int line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + value + "'", line);
  }
  if (used != value.size()) {
    throw ConfigError("trailing characters after number '" + value + "'", line);
  }
  return out;
}

int parse_int(const std::string& value, int line) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected an integer, got '" + value + "'", line);
  }
  if (used != value.size()) {
    throw ConfigError("trailing characters after integer '" + value + "'", line);
  }
  return static_cast<int>(out);
}

std::uint64_t parse_seed(const std::string& value, int line) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected an unsigned integer seed, got '" + value + "'", line);
  }
  if (used != value.size()) {
    throw ConfigError("trailing characters after seed '" + value + "'", line);
  }
  return out;
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") {
    return false;
  }
  throw ConfigError("expected a boolean (true/false), got '" + value + "'", line);
}

TrajectoryKind parse_kind(const std::string& value, int line) {
  if (value == "line") return TrajectoryKind::Line;
  if (value == "circle") return TrajectoryKind::Circle;
  if (value == "lemniscate") return TrajectoryKind::Lemniscate;
  if (value == "polyline") return TrajectoryKind::WaypointPolyline;
  throw ConfigError(
      "trajectory kind must be one of line|circle|lemniscate|polyline, got '" + value +
          "'",
      line);
}

// "x y; x y; ..." with coordinates separated by whitespace or a comma.
std::vector<std::array<double, 2>> parse_waypoints(const std::string& value,
                                                   int line) {
  std::vector<std::array<double, 2>> points;
  std::stringstream pairs(value);
  std::string pair;
  while (std::getline(pairs, pair, ';')) {
    std::string cleaned = pair;
    for (char& c : cleaned) {
      if (c == ',') c = ' ';
    }
    std::stringstream coords(cleaned);
    double x = 0.0, y = 0.0;
    std::string rest;
    if (!(coords >> x >> y) || (coords >> rest)) {
      throw ConfigError("waypoint '" + trim(pair) + "' is not an x y pair", line);
    }
    points.push_back({x, y});
  }
  if (points.empty()) throw ConfigError("waypoints list is empty", line);
  return points;
}

std::vector<double> parse_double_list(const std::string& value, int line) {
  std::string cleaned = value;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::stringstream in(cleaned);
  std::vector<double> out;
  double x = 0.0;
  while (in >> x) out.push_back(x);
  if (!in.eof()) throw ConfigError("malformed number list '" + value + "'", line);
  return out;
}

using KeyHandler = std::function<void(SimConfig&, const std::string&, int)>;

const std::map<std::string, std::map<std::string, KeyHandler>>& key_table() {
  auto d = [](double SimConfig::* field) {
    return [field](SimConfig& c, const std::string& v, int line) {
      c.*field = parse_double(v, line);
    };
  };
  static const std::map<std::string, std::map<std::string, KeyHandler>> table = {
      {"robot",
       {
           {"mass_kg", [](SimConfig& c, const std::string& v, int l) { c.robot.mass_kg = parse_double(v, l); }},
           {"inertia_kgm2", [](SimConfig& c, const std::string& v, int l) { c.robot.inertia_kgm2 = parse_double(v, l); }},
           {"wheel_radius_m", [](SimConfig& c, const std::string& v, int l) { c.robot.wheel_radius_m = parse_double(v, l); }},
           {"half_track_m", [](SimConfig& c, const std::string& v, int l) { c.robot.half_track_m = parse_double(v, l); }},
           {"wheelbase_m", [](SimConfig& c, const std::string& v, int l) { c.robot.wheelbase_m = parse_double(v, l); }},
           {"gear_ratio", [](SimConfig& c, const std::string& v, int l) { c.robot.gear_ratio = parse_double(v, l); }},
           {"torque_constant_NmA", [](SimConfig& c, const std::string& v, int l) { c.robot.torque_constant = parse_double(v, l); }},
           {"terminal_resistance_ohm", [](SimConfig& c, const std::string& v, int l) { c.robot.terminal_resistance = parse_double(v, l); }},
           {"back_emf_V_per_rpm", [](SimConfig& c, const std::string& v, int l) { c.robot.back_emf_constant = parse_double(v, l); }},
           {"no_load_current_A", [](SimConfig& c, const std::string& v, int l) { c.robot.no_load_current = parse_double(v, l); }},
           {"v_max_mps", [](SimConfig& c, const std::string& v, int l) { c.robot.v_max = parse_double(v, l); }},
           {"omega_max_radps", [](SimConfig& c, const std::string& v, int l) { c.robot.omega_max = parse_double(v, l); }},
           {"u_max_V", [](SimConfig& c, const std::string& v, int l) { c.robot.u_max = parse_double(v, l); }},
       }},
      {"uncertainty",
       {
           {"mass_factor", [](SimConfig& c, const std::string& v, int l) { c.uncertainty.mass_factor = parse_double(v, l); }},
           {"inertia_factor", [](SimConfig& c, const std::string& v, int l) { c.uncertainty.inertia_factor = parse_double(v, l); }},
           {"radius_factor", [](SimConfig& c, const std::string& v, int l) { c.uncertainty.radius_factor = parse_double(v, l); }},
       }},
      {"trajectory",
       {
           {"kind", [](SimConfig& c, const std::string& v, int l) { c.trajectory.kind = parse_kind(v, l); }},
           {"speed_mps", [](SimConfig& c, const std::string& v, int l) { c.trajectory.speed = parse_double(v, l); }},
           {"radius_m", [](SimConfig& c, const std::string& v, int l) { c.trajectory.radius = parse_double(v, l); }},
           {"scale_m", [](SimConfig& c, const std::string& v, int l) { c.trajectory.scale = parse_double(v, l); }},
           {"start_x_m", [](SimConfig& c, const std::string& v, int l) { c.trajectory.start_x = parse_double(v, l); }},
           {"start_y_m", [](SimConfig& c, const std::string& v, int l) { c.trajectory.start_y = parse_double(v, l); }},
           {"heading_rad", [](SimConfig& c, const std::string& v, int l) { c.trajectory.heading = parse_double(v, l); }},
           {"duration_s", [](SimConfig& c, const std::string& v, int l) { c.trajectory.duration = parse_double(v, l); }},
           {"waypoints", [](SimConfig& c, const std::string& v, int l) { c.trajectory.waypoints = parse_waypoints(v, l); }},
           {"accel_mps2", [](SimConfig& c, const std::string& v, int l) { c.trajectory.accel = parse_double(v, l); }},
           {"turn_rate_radps", [](SimConfig& c, const std::string& v, int l) { c.trajectory.turn_rate = parse_double(v, l); }},
       }},
      {"motion_controller",
       {
           {"k_x", [](SimConfig& c, const std::string& v, int l) { c.motion_gains.k_x = parse_double(v, l); }},
           {"k_y", [](SimConfig& c, const std::string& v, int l) { c.motion_gains.k_y = parse_double(v, l); }},
           {"k_theta", [](SimConfig& c, const std::string& v, int l) { c.motion_gains.k_theta = parse_double(v, l); }},
       }},
      {"velocity_controller",
       {
           {"v_kp", [](SimConfig& c, const std::string& v, int l) { c.v_gains.k_p = parse_double(v, l); }},
           {"v_ki", [](SimConfig& c, const std::string& v, int l) { c.v_gains.k_i = parse_double(v, l); }},
           {"v_kd", [](SimConfig& c, const std::string& v, int l) { c.v_gains.k_d = parse_double(v, l); }},
           {"v_i_max", [](SimConfig& c, const std::string& v, int l) { c.v_gains.i_max = parse_double(v, l); }},
           {"w_kp", [](SimConfig& c, const std::string& v, int l) { c.omega_gains.k_p = parse_double(v, l); }},
           {"w_ki", [](SimConfig& c, const std::string& v, int l) { c.omega_gains.k_i = parse_double(v, l); }},
           {"w_kd", [](SimConfig& c, const std::string& v, int l) { c.omega_gains.k_d = parse_double(v, l); }},
           {"w_i_max", [](SimConfig& c, const std::string& v, int l) { c.omega_gains.i_max = parse_double(v, l); }},
       }},
      {"nn",
       {
           {"enabled", [](SimConfig& c, const std::string& v, int l) { c.nn.enabled = parse_bool(v, l); }},
           {"hidden_units", [](SimConfig& c, const std::string& v, int l) { c.nn.hidden_units = parse_int(v, l); }},
           {"learning_rate", [](SimConfig& c, const std::string& v, int l) { c.nn.learning_rate = parse_double(v, l); }},
           {"init_scale", [](SimConfig& c, const std::string& v, int l) { c.nn.init_scale = parse_double(v, l); }},
           {"grad_clip", [](SimConfig& c, const std::string& v, int l) { c.nn.grad_clip = parse_double(v, l); }},
           {"seed",
            [](SimConfig& c, const std::string& v, int l) {
              c.nn.seed = parse_seed(v, l);
              c.nn.seed_set = true;
            }},
           {"feature_scales", [](SimConfig& c, const std::string& v, int l) { c.nn.feature_scales = parse_double_list(v, l); }},
           {"weights_in", [](SimConfig& c, const std::string& v, int) { c.nn.weights_in = v; }},
           {"weights_out", [](SimConfig& c, const std::string& v, int) { c.nn.weights_out = v; }},
       }},
      {"sim",
       {
           {"plant_dt_s", d(&SimConfig::plant_dt)},
           {"control_period_s", d(&SimConfig::control_period)},
           {"duration_s", d(&SimConfig::duration)},
           {"noise_std_v_mps", d(&SimConfig::noise_std_v)},
           {"noise_std_omega_radps", d(&SimConfig::noise_std_omega)},
           {"seed", [](SimConfig& c, const std::string& v, int l) { c.seed = parse_seed(v, l); }},
       }},
  };
  return table;
}

}  // namespace

SimConfig load_config(std::istream& in, const std::string& name) {
  SimConfig cfg;
  std::string line;
  std::string section;
  int line_no = 0;
  std::map<std::string, bool> seen;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;

    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError(name + ": unterminated section header", line_no);
      }
      section = trim(text.substr(1, text.size() - 2));
      if (key_table().find(section) == key_table().end()) {
        throw ConfigError(name + ": unknown section [" + section + "]", line_no);
      }
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ": expected 'key = value'", line_no);
    }
    if (section.empty()) {
      throw ConfigError(name + ": key outside any section", line_no);
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(name + ": empty key", line_no);

    const auto& handlers = key_table().at(section);
    const auto it = handlers.find(key);
    if (it == handlers.end()) {
      throw ConfigError(name + ": unknown key '" + key + "' in section [" + section +
                            "]",
                        line_no);
    }
    const std::string qualified = section + "." + key;
    if (seen[qualified]) {
      throw ConfigError(name + ": duplicate key '" + qualified + "'", line_no);
    }
    seen[qualified] = true;
    it->second(cfg, value, line_no);
  }

  if (cfg.nn.enabled && !cfg.nn.seed_set) {
    throw ConfigError(name + ": [nn] seed is required when the network is enabled");
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return load_config(in, path);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_config(const SimConfig& cfg, std::ostream& out) {
  out << "[robot]\n";
  out << "mass_kg = " << fmt(cfg.robot.mass_kg) << "\n";
  out << "inertia_kgm2 = " << fmt(cfg.robot.inertia_kgm2) << "\n";
  out << "wheel_radius_m = " << fmt(cfg.robot.wheel_radius_m) << "\n";
  out << "half_track_m = " << fmt(cfg.robot.half_track_m) << "\n";
  out << "wheelbase_m = " << fmt(cfg.robot.wheelbase_m) << "\n";
  out << "gear_ratio = " << fmt(cfg.robot.gear_ratio) << "\n";
  out << "torque_constant_NmA = " << fmt(cfg.robot.torque_constant) << "\n";
  out << "terminal_resistance_ohm = " << fmt(cfg.robot.terminal_resistance) << "\n";
  out << "back_emf_V_per_rpm = " << fmt(cfg.robot.back_emf_constant) << "\n";
  out << "no_load_current_A = " << fmt(cfg.robot.no_load_current) << "\n";
  out << "v_max_mps = " << fmt(cfg.robot.v_max) << "\n";
  out << "omega_max_radps = " << fmt(cfg.robot.omega_max) << "\n";
  out << "u_max_V = " << fmt(cfg.robot.u_max) << "\n";
  out << "\n[uncertainty]\n";
  out << "mass_factor = " << fmt(cfg.uncertainty.mass_factor) << "\n";
  out << "inertia_factor = " << fmt(cfg.uncertainty.inertia_factor) << "\n";
  out << "radius_factor = " << fmt(cfg.uncertainty.radius_factor) << "\n";
  out << "\n[trajectory]\n";
  const char* kind = "circle";
  switch (cfg.trajectory.kind) {
    case TrajectoryKind::Line: kind = "line"; break;
    case TrajectoryKind::Circle: kind = "circle"; break;
    case TrajectoryKind::Lemniscate: kind = "lemniscate"; break;
    case TrajectoryKind::WaypointPolyline: kind = "polyline"; break;
  }
  out << "kind = " << kind << "\n";
  out << "speed_mps = " << fmt(cfg.trajectory.speed) << "\n";
  out << "radius_m = " << fmt(cfg.trajectory.radius) << "\n";
  out << "scale_m = " << fmt(cfg.trajectory.scale) << "\n";
  out << "start_x_m = " << fmt(cfg.trajectory.start_x) << "\n";
  out << "start_y_m = " << fmt(cfg.trajectory.start_y) << "\n";
  out << "heading_rad = " << fmt(cfg.trajectory.heading) << "\n";
  out << "duration_s = " << fmt(cfg.trajectory.duration) << "\n";
  if (!cfg.trajectory.waypoints.empty()) {
    out << "waypoints = ";
    for (std::size_t i = 0; i < cfg.trajectory.waypoints.size(); ++i) {
      out << fmt(cfg.trajectory.waypoints[i][0]) << " "
          << fmt(cfg.trajectory.waypoints[i][1]);
      if (i + 1 < cfg.trajectory.waypoints.size()) out << "; ";
    }
    out << "\n";
  }
  out << "accel_mps2 = " << fmt(cfg.trajectory.accel) << "\n";
  out << "turn_rate_radps = " << fmt(cfg.trajectory.turn_rate) << "\n";
  out << "\n[motion_controller]\n";
  out << "k_x = " << fmt(cfg.motion_gains.k_x) << "\n";
  out << "k_y = " << fmt(cfg.motion_gains.k_y) << "\n";
  out << "k_theta = " << fmt(cfg.motion_gains.k_theta) << "\n";
  out << "\n[velocity_controller]\n";
  out << "v_kp = " << fmt(cfg.v_gains.k_p) << "\n";
  out << "v_ki = " << fmt(cfg.v_gains.k_i) << "\n";
  out << "v_kd = " << fmt(cfg.v_gains.k_d) << "\n";
  out << "v_i_max = " << fmt(cfg.v_gains.i_max) << "\n";
  out << "w_kp = " << fmt(cfg.omega_gains.k_p) << "\n";
  out << "w_ki = " << fmt(cfg.omega_gains.k_i) << "\n";
  out << "w_kd = " << fmt(cfg.omega_gains.k_d) << "\n";
  out << "w_i_max = " << fmt(cfg.omega_gains.i_max) << "\n";
  out << "\n[nn]\n";
  out << "enabled = " << (cfg.nn.enabled ? "true" : "false") << "\n";
  out << "hidden_units = " << cfg.nn.hidden_units << "\n";
  out << "learning_rate = " << fmt(cfg.nn.learning_rate) << "\n";
  out << "init_scale = " << fmt(cfg.nn.init_scale) << "\n";
  out << "grad_clip = " << fmt(cfg.nn.grad_clip) << "\n";
  out << "seed = " << cfg.nn.seed << "\n";
  if (!cfg.nn.feature_scales.empty()) {
    out << "feature_scales = ";
    for (std::size_t i = 0; i < cfg.nn.feature_scales.size(); ++i) {
      out << fmt(cfg.nn.feature_scales[i])
          << (i + 1 < cfg.nn.feature_scales.size() ? " " : "");
    }
    out << "\n";
  }
  if (!cfg.nn.weights_in.empty()) out << "weights_in = " << cfg.nn.weights_in << "\n";
  if (!cfg.nn.weights_out.empty()) {
    out << "weights_out = " << cfg.nn.weights_out << "\n";
  }
  out << "\n[sim]\n";
  out << "plant_dt_s = " << fmt(cfg.plant_dt) << "\n";
  out << "control_period_s = " << fmt(cfg.control_period) << "\n";
  out << "duration_s = " << fmt(cfg.duration) << "\n";
  out << "noise_std_v_mps = " << fmt(cfg.noise_std_v) << "\n";
  out << "noise_std_omega_radps = " << fmt(cfg.noise_std_omega) << "\n";
  out << "seed = " << cfg.seed << "\n";
}

}  // namespace mrsim
