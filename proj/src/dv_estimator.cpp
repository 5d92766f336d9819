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

#include "rdpaudit/dv_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdpaudit/math_util.hpp"
#include "rdpaudit/rng.hpp"

namespace rdpaudit {

namespace {

// First-k / last-(n-k) deterministic split; shuffling, when wanted, happens
// upstream under the caller's seed.
struct Split {
  std::vector<double> train;
  std::vector<double> validation;
};

Split split_set(const SampleSet& s, double fraction) {
  Split out;
  const auto n = s.values.size();
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n);
  out.train.assign(s.values.begin(), s.values.begin() + static_cast<long>(k));
  out.validation.assign(s.values.begin() + static_cast<long>(k), s.values.end());
  if (out.validation.empty()) out.validation = out.train;
  return out;
}

void check_config(const DvConfig& c) {
  if (c.batch_size <= 0) throw std::invalid_argument("DvConfig: batch_size must be positive");
  if (!(c.ema_rate > 0.0 && c.ema_rate < 1.0)) {
    throw std::invalid_argument("DvConfig: ema_rate must lie in (0,1)");
  }
  if (!(c.step_size > 0.0)) throw std::invalid_argument("DvConfig: step_size must be positive");
  if (c.epochs <= 0) throw std::invalid_argument("DvConfig: epochs must be positive");
  if (!(c.train_fraction > 0.0 && c.train_fraction <= 1.0)) {
    throw std::invalid_argument("DvConfig: train_fraction must lie in (0,1]");
  }
}

}  // namespace

double dv_objective(std::span<const double> t_on_q,
                    std::span<const double> t_on_p, Order order) {
  if (t_on_q.empty() || t_on_p.empty()) {
    throw std::invalid_argument("dv_objective: empty critic-value sequence");
  }
  const double a = order.alpha();
  std::vector<double> sq(t_on_q.size()), sp(t_on_p.size());
  for (std::size_t i = 0; i < t_on_q.size(); ++i) sq[i] = (a - 1.0) * t_on_q[i];
  for (std::size_t i = 0; i < t_on_p.size(); ++i) sp[i] = a * t_on_p[i];
  return log_mean_exp(sq) / (a - 1.0) - log_mean_exp(sp) / a;
}

double evaluate(const CriticNetwork& critic, const SampleSet& samples_q,
                const SampleSet& samples_p, Order order) {
  validate(samples_q);
  validate(samples_p);
  const std::vector<double> tq = critic.forward_batch(samples_q.values);
  const std::vector<double> tp = critic.forward_batch(samples_p.values);
  return dv_objective(tq, tp, order);
}

DvEstimate train(const SampleSet& samples_q, const SampleSet& samples_p,
                 const DvConfig& config) {
  validate(samples_q);
  validate(samples_p);
  check_config(config);

  const Split q = split_set(samples_q, config.train_fraction);
  const Split p = split_set(samples_p, config.train_fraction);
  const auto b = static_cast<std::size_t>(config.batch_size);
  if (q.train.size() < b || p.train.size() < b) {
    throw std::invalid_argument(
        "train: insufficient samples; need at least batch_size/train_fraction "
        "observations per side");
  }

  CriticNetwork critic =
      CriticNetwork::init(derive_seed(config.seed, {0}), config.layer_sizes,
                          config.clamp_bound, config.param_radius);
  if (config.standardize) {
    double sum = 0.0, sq = 0.0;
    const double n =
        static_cast<double>(q.train.size() + p.train.size());
    for (double v : q.train) { sum += v; sq += v * v; }
    for (double v : p.train) { sum += v; sq += v * v; }
    const double mean = sum / n;
    const double var = std::max(sq / n - mean * mean, 0.0);
    const double sd = std::sqrt(var);
    critic.set_input_transform(mean, sd > 0.0 ? sd : 1.0);
  }

  Rng shuffle_rng(derive_seed(config.seed, {1}));
  const double a = config.order.alpha();
  const double log_beta = std::log(config.ema_rate);
  const double log_one_minus_beta = std::log1p(-config.ema_rate);
  const double log_b = std::log(static_cast<double>(b));

  // EMA denominators kept in log space. Initialized from the first minibatch
  // instead of zero, which would make the first division singular.
  double log_m_q = 0.0, log_m_p = 0.0;
  bool ema_started = false;

  std::vector<std::size_t> order_q(q.train.size()), order_p(p.train.size());
  std::iota(order_q.begin(), order_q.end(), 0);
  std::iota(order_p.begin(), order_p.end(), 0);

  const std::size_t batches_per_epoch =
      std::min(q.train.size(), p.train.size()) / b;
  std::vector<double> xs_q(b), xs_p(b), w_q(b), w_p(b), sq(b), sp(b);

  DvEstimate est;
  est.objective_trace.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order_q);
    shuffle_rng.shuffle(order_p);
    double epoch_objective = 0.0;
    for (std::size_t batch = 0; batch < batches_per_epoch; ++batch) {
      for (std::size_t i = 0; i < b; ++i) {
        xs_q[i] = q.train[order_q[batch * b + i]];
        xs_p[i] = p.train[order_p[batch * b + i]];
      }
      BatchForward fq(critic, xs_q);
      BatchForward fp(critic, xs_p);
      for (std::size_t i = 0; i < b; ++i) {
        sq[i] = (a - 1.0) * fq.outputs()[i];
        sp[i] = a * fp.outputs()[i];
      }
      const double log_mb_q = log_mean_exp(sq);
      const double log_mb_p = log_mean_exp(sp);
      const double objective = log_mb_q / (a - 1.0) - log_mb_p / a;
      if (!std::isfinite(objective)) {
        throw training_error("train: objective diverged at epoch " +
                                 std::to_string(epoch),
                             epoch);
      }
      epoch_objective += objective;
      if (!ema_started) {
        log_m_q = log_mb_q;
        log_m_p = log_mb_p;
        ema_started = true;
      } else {
        log_m_q = logaddexp(log_beta + log_m_q, log_one_minus_beta + log_mb_q);
        log_m_p = logaddexp(log_beta + log_m_p, log_one_minus_beta + log_mb_p);
      }
      // Ascent direction: numerators from the current batch, denominators
      // from the EMA. The (a-1) and a factors cancel between the chain rule
      // and the 1/(a-1), 1/a prefactors, leaving pure exponential weights.
      for (std::size_t i = 0; i < b; ++i) {
        w_q[i] = std::exp(sq[i] - log_b - log_m_q);
        w_p[i] = std::exp(sp[i] - log_b - log_m_p);
      }
      ParamGradient grad = fq.weighted_gradient(w_q);
      const ParamGradient grad_p = fp.weighted_gradient(w_p);
      for (std::size_t l = 0; l < grad.weights.size(); ++l) {
        grad.weights[l] -= grad_p.weights[l];
        grad.biases[l] -= grad_p.biases[l];
      }
      critic.ascend(grad, config.step_size);
    }
    est.objective_trace.push_back(epoch_objective /
                                  static_cast<double>(batches_per_epoch));
  }

  SampleSet q_val{q.validation, samples_q.label + ":validation"};
  SampleSet p_val{p.validation, samples_p.label + ":validation"};
  est.r_hat = evaluate(critic, q_val, p_val, config.order);
  est.d_hat = a * est.r_hat;
  est.critic = std::move(critic);
  est.config = config;
  return est;
}

}  // namespace rdpaudit
