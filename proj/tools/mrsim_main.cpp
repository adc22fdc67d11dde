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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrsim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "mrsim: closed-loop mobile-robot tracking simulator with a PID velocity "
      "controller and an online-learning neural feed-forward compensator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool quiet = false;
  int parallel = 1;
  std::string debug_substeps;
  std::string parameter;
  std::vector<double> values;

  auto add_common = [&](CLI::App* cmd, bool with_output) {
    cmd->add_option("config", config_path, "experiment config file")->required();
    if (with_output) {
      cmd->add_option("-o,--output", output, "output path")->required();
    }
    cmd->add_option("--seed", seed, "override [sim] and [nn] seeds")
        ->each([&](const std::string&) { seed_given = true; });
    cmd->add_flag("-q,--quiet", quiet, "suppress the stdout summary");
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment, write the CSV log");
  add_common(run, true);
  run->add_option("--debug-substeps", debug_substeps,
                  "also log every plant substep to this CSV");

  CLI::App* compare = app.add_subcommand(
      "compare", "run PID-only vs PID+NN on the same scenario, write a report");
  add_common(compare, true);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "one PID vs PID+NN comparison per swept parameter value");
  add_common(sweep, true);
  sweep->add_option("--param", parameter, "config field to sweep (dotted name)")
      ->required();
  sweep->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--parallel", parallel, "max concurrent comparisons");

  CLI::App* echo = app.add_subcommand(
      "echo-config", "parse a config and print its normalized form");
  add_common(echo, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mrsim::kExitOk : mrsim::kExitUsage;
  }

  mrsim::CommandOptions opts;
  if (seed_given) opts.seed = seed;
  opts.quiet = quiet;
  opts.parallel = parallel;
  opts.debug_substeps = debug_substeps;

  if (run->parsed()) {
    return mrsim::cmd_run(config_path, output, opts, std::cout, std::cerr);
  }
  if (compare->parsed()) {
    return mrsim::cmd_compare(config_path, output, opts, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    return mrsim::cmd_sweep(config_path, parameter, values, output, opts, std::cout,
                            std::cerr);
  }
  if (echo->parsed()) {
    return mrsim::cmd_echo_config(config_path, opts, std::cout, std::cerr);
  }
  return mrsim::kExitUsage;
}
