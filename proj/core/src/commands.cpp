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

#include "mrsim/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <utility>

#include "mrsim/csv_log.hpp"
#include "mrsim/experiment_config.hpp"

namespace mrsim {

namespace {

namespace fs = std::filesystem;

void apply_overrides(SimConfig& cfg, const CommandOptions& opts) {
  if (opts.seed.has_value()) {
    cfg.seed = *opts.seed;
    cfg.nn.seed = *opts.seed;
    cfg.nn.seed_set = true;
  }
  if (!opts.debug_substeps.empty()) cfg.debug_substep_path = opts.debug_substeps;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ComparePair {
  std::vector<LogRecord> pid;
  std::vector<LogRecord> nn;
  ComparisonReport report;
};

ComparePair run_compare_pair(const SimConfig& base) {
  SimConfig cfg_pid = base;
  cfg_pid.nn.enabled = false;
  cfg_pid.debug_substep_path.clear();
  SimConfig cfg_nn = base;
  cfg_nn.nn.enabled = true;
  cfg_nn.debug_substep_path.clear();

  ComparePair pair;
  pair.pid = run_simulation(cfg_pid);
  pair.nn = run_simulation(cfg_nn);
  pair.report = compare_runs(pair.pid, pair.nn);
  return pair;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("cannot create output directory: " + dir +
                      (ec ? " (" + ec.message() + ")" : ""));
  }
}

const char* winner_label(int winner) {
  return winner > 0 ? "pid_nn" : (winner < 0 ? "pid" : "tie");
}

// Everything that is a user/config/I-O problem exits 1; a numeric failure
// mid-run exits 2.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const SimAbort& e) {
    err << "error: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "error: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

void print_metrics(const Metrics& m, std::ostream& out) {
  out << "metrics:\n";
  out << "  pos_rms_full        = " << fmt(m.pos_rms_full) << "\n";
  out << "  pos_max_full        = " << fmt(m.pos_max_full) << "\n";
  out << "  pos_rms_tail50      = " << fmt(m.pos_rms_tail) << "\n";
  out << "  pos_max_tail50      = " << fmt(m.pos_max_tail) << "\n";
  out << "  heading_rms_full    = " << fmt(m.heading_rms_full) << "\n";
  out << "  heading_max_full    = " << fmt(m.heading_max_full) << "\n";
  out << "  heading_rms_tail50  = " << fmt(m.heading_rms_tail) << "\n";
  out << "  heading_max_tail50  = " << fmt(m.heading_max_tail) << "\n";
  out << "  ufb_mean_first20    = " << fmt(m.ufb_mean_first) << "\n";
  out << "  ufb_mean_last20     = " << fmt(m.ufb_mean_last) << "\n";
  out << "  v_rms_full          = " << fmt(m.v_rms_full) << "\n";
  out << "  omega_rms_full      = " << fmt(m.omega_rms_full) << "\n";
  out << "  vel_rms_full        = " << fmt(m.vel_rms_full) << "\n";
  out << "  v_rms_tail50        = " << fmt(m.v_rms_tail) << "\n";
  out << "  omega_rms_tail50    = " << fmt(m.omega_rms_tail) << "\n";
  out << "  vel_rms_tail50      = " << fmt(m.vel_rms_tail) << "\n";
}

void print_comparison(const ComparisonReport& report, std::ostream& out) {
  out << "comparison (A = PID only, B = PID + NN feed-forward)\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %14s %14s %12s %8s\n", "metric", "A", "B",
                "B/A", "winner");
  out << buf;
  for (const MetricComparison& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-22s %14s %14s %12s %8s\n", row.name.c_str(),
                  fmt(row.a).c_str(), fmt(row.b).c_str(), fmt(row.ratio).c_str(),
                  winner_label(row.winner));
    out << buf;
  }
}

void write_comparison_csv(const ComparisonReport& report, std::ostream& out) {
  out << "metric,pid,pid_nn,ratio_nn_over_pid,winner\n";
  for (const MetricComparison& row : report.rows) {
    out << row.name << "," << fmt_full(row.a) << "," << fmt_full(row.b) << ","
        << fmt_full(row.ratio) << "," << winner_label(row.winner) << "\n";
  }
}

int cmd_run(const std::string& config_path, const std::string& output_path,
            const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    SimConfig cfg = load_config_file(config_path);
    apply_overrides(cfg, opts);

    std::vector<LogRecord> log;
    try {
      log = run_simulation(cfg);
    } catch (const SimAbort& abort) {
      write_csv_file(abort.partial_log(), output_path);
      err << "error: numeric failure: " << abort.what() << "; partial log written to "
          << output_path << "\n";
      return kExitNumeric;
    }

    write_csv_file(log, output_path);
    if (!opts.quiet) {
      out << "run: " << log.size() << " control ticks -> " << output_path << "\n";
      if (!log.empty()) print_metrics(compute_metrics(log), out);
    }
    return kExitOk;
  });
}

int cmd_compare(const std::string& config_path, const std::string& output_dir,
                const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    SimConfig cfg = load_config_file(config_path);
    apply_overrides(cfg, opts);
    if (!cfg.nn.seed_set) {
      throw ConfigError(config_path +
                        ": compare needs [nn] seed (or the --seed override)");
    }
    ensure_directory(output_dir);

    const ComparePair pair = run_compare_pair(cfg);
    const fs::path dir(output_dir);
    write_csv_file(pair.pid, (dir / "pid.csv").string());
    write_csv_file(pair.nn, (dir / "pid_nn.csv").string());

    std::ofstream report_csv(dir / "compare.csv");
    if (!report_csv) throw ConfigError("cannot write comparison CSV");
    write_comparison_csv(pair.report, report_csv);

    std::ofstream report_txt(dir / "compare.txt");
    if (!report_txt) throw ConfigError("cannot write comparison report");
    print_comparison(pair.report, report_txt);

    if (!opts.quiet) {
      print_comparison(pair.report, out);
      out << "logs and report written to " << output_dir << "\n";
    }
    return kExitOk;
  });
}

namespace {

struct SweepField {
  std::string name;
  void (*apply)(SimConfig&, double);
};

const std::vector<SweepField>& sweep_fields() {
  static const std::vector<SweepField> fields = {
      {"uncertainty.mass_factor",
       [](SimConfig& c, double v) { c.uncertainty.mass_factor = v; }},
      {"uncertainty.inertia_factor",
       [](SimConfig& c, double v) { c.uncertainty.inertia_factor = v; }},
      {"uncertainty.radius_factor",
       [](SimConfig& c, double v) { c.uncertainty.radius_factor = v; }},
      {"nn.learning_rate", [](SimConfig& c, double v) { c.nn.learning_rate = v; }},
      {"nn.init_scale", [](SimConfig& c, double v) { c.nn.init_scale = v; }},
      {"nn.grad_clip", [](SimConfig& c, double v) { c.nn.grad_clip = v; }},
      {"motion_controller.k_x",
       [](SimConfig& c, double v) { c.motion_gains.k_x = v; }},
      {"motion_controller.k_y",
       [](SimConfig& c, double v) { c.motion_gains.k_y = v; }},
      {"motion_controller.k_theta",
       [](SimConfig& c, double v) { c.motion_gains.k_theta = v; }},
      {"velocity_controller.v_kp", [](SimConfig& c, double v) { c.v_gains.k_p = v; }},
      {"velocity_controller.v_ki", [](SimConfig& c, double v) { c.v_gains.k_i = v; }},
      {"velocity_controller.v_kd", [](SimConfig& c, double v) { c.v_gains.k_d = v; }},
      {"velocity_controller.v_i_max",
       [](SimConfig& c, double v) { c.v_gains.i_max = v; }},
      {"velocity_controller.w_kp",
       [](SimConfig& c, double v) { c.omega_gains.k_p = v; }},
      {"velocity_controller.w_ki",
       [](SimConfig& c, double v) { c.omega_gains.k_i = v; }},
      {"velocity_controller.w_kd",
       [](SimConfig& c, double v) { c.omega_gains.k_d = v; }},
      {"velocity_controller.w_i_max",
       [](SimConfig& c, double v) { c.omega_gains.i_max = v; }},
  };
  return fields;
}

}  // namespace

std::vector<std::string> sweepable_parameters() {
  std::vector<std::string> names;
  names.reserve(sweep_fields().size());
  for (const SweepField& f : sweep_fields()) names.push_back(f.name);
  return names;
}

int cmd_sweep(const std::string& config_path, const std::string& parameter,
              const std::vector<double>& values, const std::string& output_dir,
              const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    const auto& fields = sweep_fields();
    const auto field = std::find_if(fields.begin(), fields.end(),
                                    [&](const SweepField& f) { return f.name == parameter; });
    if (field == fields.end()) {
      std::string names;
      for (const std::string& n : sweepable_parameters()) names += "\n  " + n;
      throw UsageError("unknown sweep parameter '" + parameter +
                       "'; sweepable fields:" + names);
    }
    if (values.empty()) throw UsageError("sweep needs at least one value");
    if (opts.parallel < 1) throw UsageError("--parallel must be >= 1");

    SimConfig base = load_config_file(config_path);
    apply_overrides(base, opts);
    if (!base.nn.seed_set) {
      throw ConfigError(config_path +
                        ": sweep needs [nn] seed (or the --seed override)");
    }
    ensure_directory(output_dir);

    std::vector<double> ordered = values;
    std::sort(ordered.begin(), ordered.end());

    struct Job {
      double value = 0.0;
      std::string dir;
      ComparePair pair;
    };
    std::vector<Job> jobs(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      jobs[i].value = ordered[i];
      char tag[64];
      std::snprintf(tag, sizeof tag, "%s_%g", parameter.c_str(), ordered[i]);
      jobs[i].dir = (fs::path(output_dir) / tag).string();
    }

    auto execute = [&](Job& job) {
      SimConfig cfg = base;
      field->apply(cfg, job.value);
      cfg.validate();
      job.pair = run_compare_pair(cfg);
      ensure_directory(job.dir);
      const fs::path dir(job.dir);
      write_csv_file(job.pair.pid, (dir / "pid.csv").string());
      write_csv_file(job.pair.nn, (dir / "pid_nn.csv").string());
      std::ofstream report_csv(dir / "compare.csv");
      if (!report_csv) throw ConfigError("cannot write comparison CSV in " + job.dir);
      write_comparison_csv(job.pair.report, report_csv);
      std::ofstream report_txt(dir / "compare.txt");
      if (!report_txt) throw ConfigError("cannot write report in " + job.dir);
      print_comparison(job.pair.report, report_txt);
    };

    // Bounded fan-out; results land in job slots, so aggregate order is
    // by value no matter when jobs finish.
    const std::size_t width = static_cast<std::size_t>(opts.parallel);
    for (std::size_t begin = 0; begin < jobs.size(); begin += width) {
      const std::size_t end = std::min(jobs.size(), begin + width);
      std::vector<std::future<void>> batch;
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, execute, std::ref(jobs[i])));
      }
      for (auto& f : batch) f.get();
    }

    std::ofstream agg(fs::path(output_dir) / "sweep.csv");
    if (!agg) throw ConfigError("cannot write sweep aggregate CSV");
    agg << "value,pid_vel_rms_tail50,nn_vel_rms_tail50,ratio_vel_rms_tail50,"
           "pid_pos_rms_tail50,nn_pos_rms_tail50,ratio_pos_rms_tail50,"
           "nn_ufb_mean_first20,nn_ufb_mean_last20,winner_vel_rms_tail50\n";
    for (const Job& job : jobs) {
      const Metrics& a = job.pair.report.metrics_a;
      const Metrics& b = job.pair.report.metrics_b;
      const auto row = std::find_if(
          job.pair.report.rows.begin(), job.pair.report.rows.end(),
          [](const MetricComparison& r) { return r.name == "vel_rms_tail50"; });
      const auto pos = std::find_if(
          job.pair.report.rows.begin(), job.pair.report.rows.end(),
          [](const MetricComparison& r) { return r.name == "pos_rms_tail50"; });
      agg << fmt_full(job.value) << "," << fmt_full(a.vel_rms_tail) << ","
          << fmt_full(b.vel_rms_tail) << "," << fmt_full(row->ratio) << ","
          << fmt_full(a.pos_rms_tail) << "," << fmt_full(b.pos_rms_tail) << ","
          << fmt_full(pos->ratio) << "," << fmt_full(b.ufb_mean_first) << ","
          << fmt_full(b.ufb_mean_last) << "," << winner_label(row->winner) << "\n";
    }
    agg.flush();
    if (!agg.good()) throw ConfigError("failed writing sweep aggregate CSV");

    if (!opts.quiet) {
      out << "sweep over " << parameter << ": " << jobs.size()
          << " comparisons -> " << output_dir << "\n";
    }
    return kExitOk;
  });
}

int cmd_echo_config(const std::string& config_path, const CommandOptions& opts,
                    std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    SimConfig cfg = load_config_file(config_path);
    apply_overrides(cfg, opts);
    write_config(cfg, out);
    return kExitOk;
  });
}

}  // namespace mrsim
