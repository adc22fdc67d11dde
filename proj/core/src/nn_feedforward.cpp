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

#include "mrsim/nn_feedforward.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "mrsim/errors.hpp"

namespace mrsim {

namespace {

// Uniform double in [0, 1) from the raw 64-bit stream; keeps
// initialization bit-identical across standard library implementations.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_dims(int n_in, int n_hidden, int n_out) {
  if (n_in < 1 || n_hidden < 1 || n_out < 1) {
    throw ParameterError("mlp: layer sizes must be >= 1");
  }
}

}  // namespace

Mlp mlp_init(int n_in, int n_hidden, int n_out, std::uint64_t seed,
             double init_scale) {
  check_dims(n_in, n_hidden, n_out);
  if (!(init_scale >= 0.0)) throw ParameterError("mlp: init_scale must be >= 0");

  Mlp net;
  net.n_in = n_in;
  net.n_hidden = n_hidden;
  net.n_out = n_out;
  net.w1.resize(static_cast<std::size_t>(n_hidden) * n_in);
  net.b1.assign(static_cast<std::size_t>(n_hidden), 0.0);
  net.w2.resize(static_cast<std::size_t>(n_out) * n_hidden);
  net.b2.assign(static_cast<std::size_t>(n_out), 0.0);

  std::mt19937_64 rng(seed);
  for (double& w : net.w1) w = init_scale * (2.0 * next_unit(rng) - 1.0);
  for (double& w : net.w2) w = init_scale * (2.0 * next_unit(rng) - 1.0);
  return net;
}

MlpCache mlp_forward(const Mlp& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.n_in) {
    throw UsageError("mlp_forward: input size " + std::to_string(x.size()) +
                     " does not match network input " + std::to_string(net.n_in));
  }

  MlpCache cache;
  cache.input.assign(x.begin(), x.end());
  cache.hidden.resize(static_cast<std::size_t>(net.n_hidden));
  cache.output.resize(static_cast<std::size_t>(net.n_out));
  cache.revision = net.revision;

  for (int j = 0; j < net.n_hidden; ++j) {
    double acc = net.b1[static_cast<std::size_t>(j)];
    const double* row = &net.w1[static_cast<std::size_t>(j) * net.n_in];
    for (int i = 0; i < net.n_in; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
    cache.hidden[static_cast<std::size_t>(j)] = std::tanh(acc);
  }
  for (int k = 0; k < net.n_out; ++k) {
    double acc = net.b2[static_cast<std::size_t>(k)];
    const double* row = &net.w2[static_cast<std::size_t>(k) * net.n_hidden];
    for (int j = 0; j < net.n_hidden; ++j) {
      acc += row[j] * cache.hidden[static_cast<std::size_t>(j)];
    }
    cache.output[static_cast<std::size_t>(k)] = acc;
  }
  return cache;
}

MlpGradients mlp_backward(const Mlp& net, const MlpCache& cache,
                          std::span<const double> output_error) {
  if (cache.revision != net.revision) {
    throw UsageError("mlp_backward: cache is stale (network was updated)");
  }
  if (static_cast<int>(cache.input.size()) != net.n_in ||
      static_cast<int>(cache.hidden.size()) != net.n_hidden ||
      static_cast<int>(cache.output.size()) != net.n_out) {
    throw UsageError("mlp_backward: cache does not match network shape");
  }
  if (static_cast<int>(output_error.size()) != net.n_out) {
    throw UsageError("mlp_backward: output_error size mismatch");
  }

  MlpGradients g;
  g.w1.assign(net.w1.size(), 0.0);
  g.b1.assign(net.b1.size(), 0.0);
  g.w2.assign(net.w2.size(), 0.0);
  g.b2.assign(net.b2.size(), 0.0);

  // Output layer: dL/dy = output_error.
  for (int k = 0; k < net.n_out; ++k) {
    const double delta = output_error[static_cast<std::size_t>(k)];
    g.b2[static_cast<std::size_t>(k)] = delta;
    double* row = &g.w2[static_cast<std::size_t>(k) * net.n_hidden];
    for (int j = 0; j < net.n_hidden; ++j) {
      row[j] = delta * cache.hidden[static_cast<std::size_t>(j)];
    }
  }
  // Hidden layer: delta_h = (w2^T delta) * (1 - h^2).
  for (int j = 0; j < net.n_hidden; ++j) {
    double back = 0.0;
    for (int k = 0; k < net.n_out; ++k) {
      back += net.w2[static_cast<std::size_t>(k) * net.n_hidden + j] *
              output_error[static_cast<std::size_t>(k)];
    }
    const double h = cache.hidden[static_cast<std::size_t>(j)];
    const double delta = back * (1.0 - h * h);
    g.b1[static_cast<std::size_t>(j)] = delta;
    double* row = &g.w1[static_cast<std::size_t>(j) * net.n_in];
    for (int i = 0; i < net.n_in; ++i) {
      row[i] = delta * cache.input[static_cast<std::size_t>(i)];
    }
  }
  return g;
}

namespace {

double squared_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

void check_gradients_finite(const MlpGradients& g) {
  auto check = [](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) {
        throw NumericError(std::string("mlp_update: non-finite gradient in ") + name,
                           i);
      }
    }
  };
  check(g.w1, "w1");
  check(g.b1, "b1");
  check(g.w2, "w2");
  check(g.b2, "b2");
}

void axpy(std::vector<double>& w, const std::vector<double>& g, double factor) {
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += factor * g[i];
}

}  // namespace

void mlp_update(Mlp& net, const MlpGradients& g, double learning_rate) {
  if (!(learning_rate >= 0.0)) {
    throw ParameterError("mlp_update: learning_rate must be >= 0");
  }
  if (g.w1.size() != net.w1.size() || g.b1.size() != net.b1.size() ||
      g.w2.size() != net.w2.size() || g.b2.size() != net.b2.size()) {
    throw UsageError("mlp_update: gradient shape mismatch");
  }
  check_gradients_finite(g);
  if (learning_rate == 0.0) return;

  double scale = 1.0;
  if (net.grad_clip > 0.0) {
    const double norm = std::sqrt(squared_norm(g.w1) + squared_norm(g.b1) +
                                  squared_norm(g.w2) + squared_norm(g.b2));
    if (norm > net.grad_clip) scale = net.grad_clip / norm;
  }
  const double factor = -learning_rate * scale;
  axpy(net.w1, g.w1, factor);
  axpy(net.b1, g.b1, factor);
  axpy(net.w2, g.w2, factor);
  axpy(net.b2, g.b2, factor);
  ++net.revision;
}

MotorCommand feedback_error_learn_step(Mlp& net, std::span<const double> x,
                                       const MotorCommand& u_fb,
                                       double learning_rate) {
  if (net.n_out != 2) {
    throw UsageError("feedback_error_learn_step: network must have 2 outputs");
  }
  const MlpCache cache = mlp_forward(net, x);
  const MotorCommand u_ff{cache.output[0], cache.output[1]};
  if (learning_rate > 0.0) {
    const std::array<double, 2> output_error{-u_fb.left, -u_fb.right};
    mlp_update(net, mlp_backward(net, cache, output_error), learning_rate);
  }
  return u_ff;
}

namespace {

constexpr char kMagic[] = "mrsim-mlp";
constexpr int kFormatVersion = 1;

void write_block(std::ostream& out, const std::vector<double>& v) {
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << buf << (i + 1 == v.size() ? "\n" : " ");
  }
  if (v.empty()) out << "\n";
}

void read_block(std::istream& in, std::vector<double>& v) {
  for (double& x : v) {
    if (!(in >> x)) throw ConfigError("mlp record: truncated weight block");
  }
}

}  // namespace

void save_mlp(const Mlp& net, std::ostream& out) {
  out << kMagic << " v" << kFormatVersion << "\n";
  out << net.n_in << " " << net.n_hidden << " " << net.n_out << " "
      << net.grad_clip << "\n";
  write_block(out, net.w1);
  write_block(out, net.b1);
  write_block(out, net.w2);
  write_block(out, net.b2);
}

Mlp load_mlp(std::istream& in) {
  std::string magic, version;
  if (!(in >> magic >> version) || magic != kMagic) {
    throw ConfigError("mlp record: bad header");
  }
  if (version != "v1") {
    throw ConfigError("mlp record: unsupported format version " + version);
  }
  int n_in = 0, n_hidden = 0, n_out = 0;
  double grad_clip = 0.0;
  if (!(in >> n_in >> n_hidden >> n_out >> grad_clip)) {
    throw ConfigError("mlp record: bad layer-size header");
  }
  check_dims(n_in, n_hidden, n_out);
  Mlp net = mlp_init(n_in, n_hidden, n_out, 0, 0.0);
  net.grad_clip = grad_clip;
  read_block(in, net.w1);
  read_block(in, net.b1);
  read_block(in, net.w2);
  read_block(in, net.b2);
  return net;
}

void save_mlp_file(const Mlp& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open mlp record for writing: " + path);
  save_mlp(net, out);
  if (!out.good()) throw ConfigError("failed writing mlp record: " + path);
}

Mlp load_mlp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mlp record: " + path);
  return load_mlp(in);
}

FeatureScales FeatureScales::from_limits(double v_max, double omega_max) {
  FeatureScales s;
  s.values = {v_max, omega_max, 10.0 * v_max, 10.0 * omega_max, v_max, omega_max};
  return s;
}

std::array<double, kFeatureCount> FeatureTracker::build(const VelocityState& ref,
                                                        const VelocityState& measured,
                                                        double dt) {
  if (!(dt > 0.0)) throw ParameterError("FeatureTracker: dt must be > 0");
  const double dv_ref = has_prev_ ? (ref.v - prev_v_ref_) / dt : 0.0;
  const double domega_ref = has_prev_ ? (ref.omega - prev_omega_ref_) / dt : 0.0;
  prev_v_ref_ = ref.v;
  prev_omega_ref_ = ref.omega;
  has_prev_ = true;

  std::array<double, kFeatureCount> raw{ref.v,      ref.omega, dv_ref,
                                        domega_ref, measured.v, measured.omega};
  std::array<double, kFeatureCount> out{};
  for (int i = 0; i < kFeatureCount; ++i) {
    out[static_cast<std::size_t>(i)] =
        raw[static_cast<std::size_t>(i)] / scales_.values[static_cast<std::size_t>(i)];
  }
  return out;
}

void FeatureTracker::reset() {
  has_prev_ = false;
  prev_v_ref_ = 0.0;
  prev_omega_ref_ = 0.0;
}

}  // namespace mrsim
