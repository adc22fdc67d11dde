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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mrsim/vehicle_model.hpp"

namespace mrsim {

/// Fully-connected feed-forward network with one tanh hidden layer and a
/// linear output layer. Used as the online-trained feed-forward velocity
/// compensator; trained by gradient descent with the feedback command as
/// the teaching signal (feedback-error learning).
struct Mlp {
  int n_in = 0;
  int n_hidden = 0;
  int n_out = 0;
  std::vector<double> w1;  // n_hidden x n_in, row-major
  std::vector<double> b1;  // n_hidden
  std::vector<double> w2;  // n_out x n_hidden, row-major
  std::vector<double> b2;  // n_out
  double grad_clip = 10.0;  // global gradient-norm bound; 0 disables clipping
  std::uint64_t revision = 0;  // bumped by every applied update

  std::size_t parameter_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
  }
};

/// Weights drawn uniformly from [-init_scale, init_scale] with a seeded
/// generator (bit-reproducible per seed); biases start at zero.
Mlp mlp_init(int n_in, int n_hidden, int n_out, std::uint64_t seed,
             double init_scale);

/// Activations recorded by a forward pass, consumed by mlp_backward.
struct MlpCache {
  std::vector<double> input;
  std::vector<double> hidden;  // post-tanh
  std::vector<double> output;
  std::uint64_t revision = 0;  // network revision the pass was computed with
};

/// Forward pass: hidden = tanh(w1 x + b1), output = w2 hidden + b2.
MlpCache mlp_forward(const Mlp& net, std::span<const double> x);

/// Gradients of 0.5 * ||output_error||^2 with respect to every parameter,
/// treating output_error as (output - target).
struct MlpGradients {
  std::vector<double> w1, b1, w2, b2;
};

/// Backprop through the cached pass. Throws UsageError when the cache does
/// not match the network (shape or revision).
MlpGradients mlp_backward(const Mlp& net, const MlpCache& cache,
                          std::span<const double> output_error);

/// Gradient-descent update w <- w - rate * g with the network's global
/// gradient-norm clip applied. A non-finite gradient throws NumericError
/// and leaves the network unchanged.
void mlp_update(Mlp& net, const MlpGradients& g, double learning_rate);

/// One feedback-error learning step: returns the feed-forward command for
/// features x and, when learning_rate > 0, performs one gradient update
/// with output_error = -u_fb, driving the network to absorb the feedback
/// command. learning_rate 0 is pure inference.
MotorCommand feedback_error_learn_step(Mlp& net, std::span<const double> x,
                                       const MotorCommand& u_fb,
                                       double learning_rate);

/// Versioned flat text record (layer sizes header, then row-major weights
/// and biases at full precision) so a trained compensator can be replayed.
void save_mlp(const Mlp& net, std::ostream& out);
Mlp load_mlp(std::istream& in);
void save_mlp_file(const Mlp& net, const std::string& path);
Mlp load_mlp_file(const std::string& path);

inline constexpr int kFeatureCount = 6;

/// Per-component normalization scales of the controller feature vector.
struct FeatureScales {
  std::array<double, kFeatureCount> values{1.0, 2.0, 10.0, 20.0, 1.0, 2.0};

  /// Reference velocities and measurements scale with the velocity bounds;
  /// discrete reference derivatives with 10x those bounds.
  static FeatureScales from_limits(double v_max, double omega_max);
};

/// Builds the 6-component network input at each control tick: reference
/// velocities, their discrete derivatives, and the measured velocities,
/// each divided by its scale. Keeps the previous references for the
/// derivative terms; the first tick uses zero derivatives.
class FeatureTracker {
 public:
  FeatureTracker() = default;
  explicit FeatureTracker(const FeatureScales& scales) : scales_(scales) {}

  std::array<double, kFeatureCount> build(const VelocityState& ref,
                                          const VelocityState& measured, double dt);
  void reset();

 private:
  FeatureScales scales_;
  bool has_prev_ = false;
  double prev_v_ref_ = 0.0;
  double prev_omega_ref_ = 0.0;
};

}  // namespace mrsim
