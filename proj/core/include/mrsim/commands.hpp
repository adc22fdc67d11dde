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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/sim_engine.hpp"

namespace mrsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // usage, config and I/O problems
inline constexpr int kExitNumeric = 2;  // numeric failure mid-run

struct CommandOptions {
  std::optional<std::uint64_t> seed;  // overrides [sim] seed and [nn] seed
  bool quiet = false;
  int parallel = 1;            // sweep: concurrent comparisons
  std::string debug_substeps;  // run: optional plant substep CSV path
};

/// Runs one experiment, writes the CSV log to output_path, prints a
/// metrics summary. On numeric failure the partial log is still written.
int cmd_run(const std::string& config_path, const std::string& output_path,
            const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Runs the scenario twice (PID only, PID + NN), writes both logs plus a
/// comparison report (CSV and text) into output_dir.
int cmd_compare(const std::string& config_path, const std::string& output_dir,
                const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// One comparison per swept value plus an aggregate metrics-vs-value CSV.
/// Comparisons may run in parallel; outputs are ordered by value.
int cmd_sweep(const std::string& config_path, const std::string& parameter,
              const std::vector<double>& values, const std::string& output_dir,
              const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Parses and re-emits the normalized configuration.
int cmd_echo_config(const std::string& config_path, const CommandOptions& opts,
                    std::ostream& out, std::ostream& err);

/// Config fields cmd_sweep accepts, as dotted names.
std::vector<std::string> sweepable_parameters();

void print_metrics(const Metrics& m, std::ostream& out);
void print_comparison(const ComparisonReport& report, std::ostream& out);
void write_comparison_csv(const ComparisonReport& report, std::ostream& out);

}  // namespace mrsim
