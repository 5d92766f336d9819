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

#include "rdpaudit/mechanisms.hpp"

#include <cmath>
#include <numeric>

#include "rdpaudit/math_util.hpp"

namespace rdpaudit {

namespace {

double dot_with_bias(const std::vector<double>& w,
                     const std::vector<double>& x) {
  if (w.size() != x.size() + 1) {
    throw std::invalid_argument("parameter dimension " + std::to_string(w.size()) +
                                " does not match feature dimension " +
                                std::to_string(x.size()) + " + 1");
  }
  double z = w.back();
  for (std::size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
  return z;
}

void check_dp_config(const DpSgdConfig& c, std::size_t param_dim) {
  if (c.iterations < 1) throw std::invalid_argument("DpSgdConfig: iterations >= 1 required");
  if (!(c.clip > 0.0)) throw std::invalid_argument("DpSgdConfig: clip must be positive");
  if (!(c.noise_multiplier > 0.0)) {
    throw std::invalid_argument("DpSgdConfig: noise_multiplier must be positive");
  }
  if (!(c.sample_prob > 0.0 && c.sample_prob <= 1.0)) {
    throw std::invalid_argument("DpSgdConfig: sample_prob must lie in (0,1]");
  }
  if (c.learning_rate < 0.0) {
    throw std::invalid_argument("DpSgdConfig: learning_rate must be nonnegative");
  }
  if (!c.init_params.empty() && c.init_params.size() != param_dim) {
    throw std::invalid_argument("DpSgdConfig: init_params dimension mismatch");
  }
}

}  // namespace

SyntheticTask make_blob_task(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("make_blob_task: need n >= 2");
  SyntheticTask task;
  Rng rng(derive_seed(seed, {0x626c6f62}));  // "blob"
  task.features.reserve(static_cast<std::size_t>(n));
  task.labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    const double cx = label == 1 ? 1.0 : -1.0;
    task.features.push_back({cx + 0.8 * rng.normal(), cx + 0.8 * rng.normal()});
    task.labels.push_back(label);
  }
  task.canary_features = {0.0, 0.0};  // blank canary
  task.canary_label = 1;
  return task;
}

double logistic_loss(const std::vector<double>& w,
                     const std::vector<double>& x, int y) {
  const double z = dot_with_bias(w, x);
  const double sign = y == 1 ? 1.0 : -1.0;
  return softplus(-sign * z);
}

double mean_logistic_loss(const std::vector<double>& w,
                          const SyntheticTask& task) {
  double acc = 0.0;
  for (std::size_t i = 0; i < task.features.size(); ++i) {
    acc += logistic_loss(w, task.features[i], task.labels[i]);
  }
  return acc / static_cast<double>(task.features.size());
}

std::vector<double> logistic_gradient(const std::vector<double>& w,
                                      const std::vector<double>& x, int y) {
  const double z = dot_with_bias(w, x);
  const double residual = sigmoid(z) - static_cast<double>(y);
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = residual * x[i];
  g.back() = residual;
  return g;
}

std::vector<double> clip_gradient(const std::vector<double>& g, double c) {
  if (!(c > 0.0)) throw std::domain_error("clip_gradient: c must be positive");
  double sq = 0.0;
  for (double v : g) sq += v * v;
  const double norm = std::sqrt(sq);
  std::vector<double> out = g;
  if (norm > c) {
    const double scale = c / norm;
    for (double& v : out) v *= scale;
  }
  return out;
}

std::vector<std::size_t> poisson_sample(std::size_t n, double q, Rng& rng) {
  std::vector<std::size_t> idx;
  if (q >= 1.0) {
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(q)) idx.push_back(i);
  }
  return idx;
}

std::pair<SampleSet, SampleSet> gaussian_pair_samples(
    const GaussianMechanismSpec& spec, int n, std::uint64_t seed) {
  if (!(spec.sigma > 0.0)) {
    throw std::domain_error("gaussian_pair_samples: sigma must be positive");
  }
  if (n < 1) throw std::invalid_argument("gaussian_pair_samples: n >= 1 required");
  Rng rng_without(derive_seed(seed, {0}));
  Rng rng_with(derive_seed(seed, {1}));
  SampleSet without{{}, "gaussian-without"};
  SampleSet with{{}, "gaussian-with"};
  without.values.reserve(static_cast<std::size_t>(n));
  with.values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    without.values.push_back(spec.value_without + spec.sigma * rng_without.normal());
    with.values.push_back(spec.value_with + spec.sigma * rng_with.normal());
  }
  return {std::move(without), std::move(with)};
}

std::pair<SampleSet, SampleSet> bernoulli_channel_samples(double tpr,
                                                          double fpr, int n,
                                                          std::uint64_t seed) {
  if (tpr < 0.0 || tpr > 1.0 || fpr < 0.0 || fpr > 1.0) {
    throw std::domain_error("bernoulli_channel_samples: rates must lie in [0,1]");
  }
  if (n < 1) throw std::invalid_argument("bernoulli_channel_samples: n >= 1 required");
  Rng rng_t(derive_seed(seed, {0}));
  Rng rng_f(derive_seed(seed, {1}));
  SampleSet ts{{}, "bernoulli-tpr"};
  SampleSet fs{{}, "bernoulli-fpr"};
  for (int i = 0; i < n; ++i) {
    ts.values.push_back(rng_t.bernoulli(tpr) ? 1.0 : 0.0);
    fs.values.push_back(rng_f.bernoulli(fpr) ? 1.0 : 0.0);
  }
  return {std::move(ts), std::move(fs)};
}

DpSgdResult dp_sgd_train(const SyntheticTask& task, const DpSgdConfig& config,
                         bool include_canary) {
  if (task.features.empty()) {
    throw std::invalid_argument("dp_sgd_train: empty dataset");
  }
  if (task.canary_features.size() != task.feature_dim()) {
    throw std::invalid_argument("dp_sgd_train: canary dimension mismatch");
  }
  check_dp_config(config, task.param_dim());

  std::vector<double> w = config.init_params.empty()
                              ? std::vector<double>(task.param_dim(), 0.0)
                              : config.init_params;

  // Separate substreams for sampling and noise. In paired mode the noise
  // stream ignores the canary flag so both runs see identical draws.
  const std::uint64_t canary_tag = include_canary ? 1 : 0;
  Rng sample_rng(derive_seed(config.seed, {0x73616d70, canary_tag}));
  Rng noise_rng(derive_seed(
      config.seed, {0x6e6f6973, config.paired_noise ? 0 : canary_tag}));

  const std::size_t n_base = task.features.size();
  const std::size_t n_total = n_base + (include_canary ? 1 : 0);
  const double noise_sd = config.noise_multiplier * config.clip;

  for (int t = 0; t < config.iterations; ++t) {
    const std::vector<std::size_t> batch =
        poisson_sample(n_total, config.sample_prob, sample_rng);
    std::vector<double> update(w.size(), 0.0);
    for (std::size_t idx : batch) {
      const bool is_canary = idx == n_base;
      const std::vector<double> g =
          is_canary
              ? logistic_gradient(w, task.canary_features, task.canary_label)
              : logistic_gradient(w, task.features[idx], task.labels[idx]);
      const std::vector<double> clipped = clip_gradient(g, config.clip);
      for (std::size_t j = 0; j < w.size(); ++j) update[j] += clipped[j];
    }
    for (std::size_t j = 0; j < w.size(); ++j) {
      update[j] += noise_sd * noise_rng.normal();
      w[j] -= config.learning_rate * update[j];
    }
  }

  return DpSgdResult{w, logistic_loss(w, task.canary_features, task.canary_label)};
}

SyntheticTask second_half(const SyntheticTask& task) {
  SyntheticTask out = task;
  const std::size_t half = task.features.size() / 2;
  out.features.assign(task.features.begin() + static_cast<long>(half),
                      task.features.end());
  out.labels.assign(task.labels.begin() + static_cast<long>(half),
                    task.labels.end());
  return out;
}

std::vector<double> warm_start_params(const SyntheticTask& task, int epochs,
                                      double lr, std::uint64_t seed) {
  if (task.features.size() < 2) {
    throw std::invalid_argument("warm_start_params: dataset too small to split");
  }
  if (epochs < 0) throw std::invalid_argument("warm_start_params: epochs >= 0");
  std::vector<double> w(task.param_dim(), 0.0);
  if (epochs == 0) return w;

  const std::size_t half = task.features.size() / 2;
  Rng rng(derive_seed(seed, {0x7761726d}));  // "warm"
  std::vector<std::size_t> idx(half);
  std::iota(idx.begin(), idx.end(), 0);
  for (int e = 0; e < epochs; ++e) {
    rng.shuffle(idx);
    for (std::size_t i : idx) {
      const std::vector<double> g =
          logistic_gradient(w, task.features[i], task.labels[i]);
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= lr * g[j];
    }
  }
  return w;
}

}  // namespace rdpaudit
