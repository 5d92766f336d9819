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

#ifndef RDPAUDIT_MECHANISMS_HPP_
#define RDPAUDIT_MECHANISMS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "rdpaudit/rng.hpp"
#include "rdpaudit/types.hpp"

namespace rdpaudit {

// A scalar Gaussian mechanism answering a query whose value is
// value_without / value_with on the two neighboring datasets; the exact
// D_alpha between the output distributions is available in closed form.
struct GaussianMechanismSpec {
  double value_without = 0.0;
  double value_with = 1.0;
  double sigma = 1.0;
};

// Private training configuration: iterations, per-example clip, noise
// multiplier (noise stddev = noise_multiplier * clip per coordinate),
// Poisson sampling probability, learning rate, initial parameters.
struct DpSgdConfig {
  int iterations = 1;
  double clip = 1.0;
  double noise_multiplier = 1.0;
  double sample_prob = 1.0;
  double learning_rate = 0.1;
  std::vector<double> init_params;
  std::uint64_t seed = 0;
  // When true, the with-/without-canary runs draw the identical noise
  // stream (variance-reduced paired audits); default keeps the runs
  // independent, matching the two independent training executions.
  bool paired_noise = false;
};

// Binary-labeled dataset with logistic loss and one attacker-chosen canary
// record. Parameters carry an intercept: w has dimension(features) + 1.
struct SyntheticTask {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;  // in {0, 1}
  std::vector<double> canary_features;
  int canary_label = 1;

  std::size_t feature_dim() const {
    return features.empty() ? canary_features.size() : features.front().size();
  }
  std::size_t param_dim() const { return feature_dim() + 1; }
};

// Two seeded Gaussian blobs (around (+1,+1) and (-1,-1)), 2 features,
// `n` points, with the blank canary: all-zero features, label 1.
SyntheticTask make_blob_task(int n, std::uint64_t seed);

// Stable logistic loss log(1 + exp(-(2y-1) z)) with z = <w, x> + bias term.
double logistic_loss(const std::vector<double>& w,
                     const std::vector<double>& x, int y);
double mean_logistic_loss(const std::vector<double>& w,
                          const SyntheticTask& task);
std::vector<double> logistic_gradient(const std::vector<double>& w,
                                      const std::vector<double>& x, int y);

// min{1, c/||g||_2} * g; the zero vector passes through untouched.
std::vector<double> clip_gradient(const std::vector<double>& g, double c);

// Independent inclusion of each index with probability q.
std::vector<std::size_t> poisson_sample(std::size_t n, double q, Rng& rng);

// n draws from N(value_without, sigma^2) and N(value_with, sigma^2);
// deterministic per seed, with independent substreams per side.
std::pair<SampleSet, SampleSet> gaussian_pair_samples(
    const GaussianMechanismSpec& spec, int n, std::uint64_t seed);

// n draws of Bern(tpr) and Bern(fpr) encoded as {0.0, 1.0} scalars.
std::pair<SampleSet, SampleSet> bernoulli_channel_samples(double tpr,
                                                          double fpr, int n,
                                                          std::uint64_t seed);

struct DpSgdResult {
  std::vector<double> final_params;
  double canary_loss = 0.0;
};

// Poisson-sampled, per-example-clipped, Gaussian-noised gradient descent on
// the task (canary appended iff include_canary); returns final parameters
// and the canary's logistic loss under them. Deterministic per seed.
DpSgdResult dp_sgd_train(const SyntheticTask& task, const DpSgdConfig& config,
                         bool include_canary);

// Non-private pretraining on the first half of the dataset; the private
// phase is meant to run on the second half. epochs = 0 yields the zero
// vector.
std::vector<double> warm_start_params(const SyntheticTask& task, int epochs,
                                      double lr, std::uint64_t seed);

// The training subset a warm-started private phase should use: the second
// half of the dataset (the first half fed the pretraining).
SyntheticTask second_half(const SyntheticTask& task);

}  // namespace rdpaudit

#endif  // RDPAUDIT_MECHANISMS_HPP_
