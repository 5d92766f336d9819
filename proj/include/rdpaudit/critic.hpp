// Copyright 2026 The rdpaudit Authors
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

#ifndef RDPAUDIT_CRITIC_HPP_
#define RDPAUDIT_CRITIC_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdpaudit/types.hpp"

namespace rdpaudit {

struct ParamGradient;

// The statistics network T_theta: a small fully connected net with rectifier
// hidden layers and an identity (optionally tanh-squashed) scalar output.
//
// Two optional contracts back the certified-CI mode:
//   clamp_bound M:  |T(z)| <= M for every z, via the smooth squash
//                   M * tanh(raw / M) on the output;
//   param_radius K: ||theta||_2 <= K after every update, via projection.
class CriticNetwork {
 public:
  // Weights uniform on [-a, a] with a = sqrt(6 / (fan_in + fan_out)), biases
  // zero; drawn layer by layer, row-major, from the seeded stream.
  static CriticNetwork init(std::uint64_t seed,
                            const std::vector<int>& layer_sizes,
                            std::optional<double> clamp_bound = std::nullopt,
                            std::optional<double> param_radius = std::nullopt);

  double forward(std::span<const double> x) const;
  double forward_scalar(double x) const;

  // T values for a batch of scalar inputs (input dimension must be 1).
  std::vector<double> forward_batch(std::span<const double> xs) const;

  // Gradient ascent step theta += step * grad, then projection onto the
  // radius-K ball when param_radius is set.
  void ascend(const ParamGradient& grad, double step);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  std::size_t num_layers() const { return weights_.size(); }
  std::size_t param_count() const;
  double param_norm() const;

  const Eigen::MatrixXd& weight(std::size_t layer) const {
    return weights_[layer];
  }
  const Eigen::VectorXd& bias(std::size_t layer) const {
    return biases_[layer];
  }
  Eigen::MatrixXd& mutable_weight(std::size_t layer) {
    return weights_[layer];
  }
  Eigen::VectorXd& mutable_bias(std::size_t layer) { return biases_[layer]; }

  std::optional<double> clamp_bound() const { return clamp_bound_; }
  std::optional<double> param_radius() const { return param_radius_; }
  std::uint64_t seed() const { return seed_; }

  // Optional affine input preprocessing x -> (x - shift) / scale, applied
  // before the first layer. Not part of theta; recorded on serialization.
  void set_input_transform(double shift, double scale);
  double input_shift() const { return input_shift_; }
  double input_scale() const { return input_scale_; }

  bool same_parameters(const CriticNetwork& other) const;

 private:
  friend struct BatchForward;

  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;  // weights_[l]: sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> biases_;
  std::optional<double> clamp_bound_;
  std::optional<double> param_radius_;
  double input_shift_ = 0.0;
  double input_scale_ = 1.0;
  std::uint64_t seed_ = 0;

  void project();
};

// Per-layer gradient arrays, shape-congruent with the owning network.
struct ParamGradient {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static ParamGradient zeros_like(const CriticNetwork& net);
  double norm() const;
};

// One batched forward pass whose activations are retained so a weighted
// gradient can be taken without recomputing the forward.
struct BatchForward {
  BatchForward(const CriticNetwork& net, std::span<const double> xs);

  const std::vector<double>& outputs() const { return outputs_; }

  // Exact gradient of sum_i w_i * T_theta(x_i) by reverse accumulation.
  ParamGradient weighted_gradient(std::span<const double> weights) const;

 private:
  const CriticNetwork& net_;
  std::vector<Eigen::MatrixXd> activations_;      // per layer, cols = batch
  std::vector<Eigen::MatrixXd> preactivations_;   // hidden + output raw
  std::vector<double> outputs_;
};

// Gradient of sum_i weights[i] * T_theta(inputs[i]) for scalar inputs.
ParamGradient weighted_param_gradient(const CriticNetwork& net,
                                      std::span<const double> inputs,
                                      std::span<const double> weights);

// theta' = theta + step * grad (projected); value-semantics variant of
// CriticNetwork::ascend.
CriticNetwork apply_update(const CriticNetwork& net, const ParamGradient& grad,
                           double step);

// Self-describing JSON serialization (layer sizes, row-major parameters,
// seed, clamp/radius/input-transform settings). Round-trips exactly.
void save_critic(const CriticNetwork& net, const std::string& path);
CriticNetwork load_critic(const std::string& path);
std::string critic_to_json(const CriticNetwork& net);
CriticNetwork critic_from_json(const std::string& text);

}  // namespace rdpaudit

#endif  // RDPAUDIT_CRITIC_HPP_
