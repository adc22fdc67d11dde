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

#include "mrsim/csv_log.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "mrsim/errors.hpp"

namespace mrsim {

void write_csv(const std::vector<LogRecord>& log, std::ostream& out) {
  out << kCsvVersionLine << "\n" << kCsvHeader << "\n";
  char buf[640];
  for (const LogRecord& r : log) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g,%.17g\n",
                  r.t, r.reference.x, r.reference.y, r.reference.theta, r.actual.x,
                  r.actual.y, r.actual.theta, r.eta_ref.v, r.eta_ref.omega,
                  r.eta_meas.v, r.eta_meas.omega, r.u_fb.left, r.u_fb.right,
                  r.u_ff.left, r.u_ff.right, r.u_total.left, r.u_total.right,
                  r.error.longitudinal, r.error.lateral, r.error.heading,
                  r.u_fb_norm_sq);
    out << buf;
  }
}

void write_csv_file(const std::vector<LogRecord>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file for writing: " + path);
  write_csv(log, out);
  out.flush();
  if (!out.good()) throw ConfigError("failed writing log: " + path);
}

}  // namespace mrsim
