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

#include "rdpaudit/divergence.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rdpaudit/math_util.hpp"

namespace rdpaudit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void validate(const SampleSet& s) {
  if (s.values.empty()) {
    throw std::invalid_argument("SampleSet '" + s.label + "' is empty");
  }
  for (double v : s.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("SampleSet '" + s.label +
                                  "' contains a non-finite value");
    }
  }
}

double renyi_gaussian(double mu_p, double mu_q, double sigma, Order order) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("renyi_gaussian: sigma must be positive");
  }
  const double diff = mu_p - mu_q;
  return order.alpha() * diff * diff / (2.0 * sigma * sigma);
}

double renyi_bernoulli(double p, double q, Order order) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
    throw std::domain_error("renyi_bernoulli: probabilities must be in [0,1]");
  }
  if (q == 0.0 || q == 1.0) {
    return (p == q) ? 0.0 : kInf;
  }
  const double a = order.alpha();
  // log of p^a q^{1-a} + (1-p)^a (1-q)^{1-a}, each term in log space.
  // A zero p (or 1-p) simply removes that term for a > 1; for a in (0,1)
  // the exponent a keeps the term at zero as well.
  const double t1 =
      (p == 0.0) ? -kInf : a * std::log(p) + (1.0 - a) * std::log(q);
  const double t2 = (p == 1.0)
                        ? -kInf
                        : a * std::log(1.0 - p) + (1.0 - a) * std::log(1.0 - q);
  return logaddexp(t1, t2) / (a - 1.0);
}

double renyi_discrete(std::span<const double> p_mass,
                      std::span<const double> q_mass, Order order) {
  if (p_mass.size() != q_mass.size() || p_mass.empty()) {
    throw std::invalid_argument("renyi_discrete: mass vectors must be "
                                "nonempty and of equal length");
  }
  const double a = order.alpha();
  std::vector<double> log_terms;
  log_terms.reserve(p_mass.size());
  for (std::size_t i = 0; i < p_mass.size(); ++i) {
    const double p = p_mass[i];
    const double q = q_mass[i];
    if (p < 0.0 || q < 0.0) {
      throw std::domain_error("renyi_discrete: negative mass");
    }
    if (p == 0.0) continue;  // zero contribution for any valid alpha
    if (q == 0.0) return kInf;
    log_terms.push_back(a * std::log(p) + (1.0 - a) * std::log(q));
  }
  if (log_terms.empty()) return kInf;
  return log_sum_exp(log_terms) / (a - 1.0);
}

PluginEstimate plugin_estimate(const SampleSet& samples_q,
                               const LogRatioOracle& oracle, Order order) {
  validate(samples_q);
  const double a = order.alpha();
  std::vector<double> scaled;
  scaled.reserve(samples_q.size());
  for (double x : samples_q.values) {
    scaled.push_back(a * oracle(x));
  }
  PluginEstimate est;
  est.log_z_hat = log_mean_exp(scaled);
  est.z_hat = std::exp(est.log_z_hat);
  est.d_hat = est.log_z_hat / (a - 1.0);
  return est;
}

double renyi_numeric_oracle(const Density& density_p, const Density& density_q,
                            Order order, const QuadratureGrid& grid) {
  if (!(grid.step > 0.0) || !(grid.hi > grid.lo)) {
    throw std::invalid_argument("renyi_numeric_oracle: malformed grid");
  }
  const double a = order.alpha();
  const auto n = static_cast<std::size_t>(
      std::floor((grid.hi - grid.lo) / grid.step)) + 1;
  // Trapezoid weights in log space: endpoints carry half weight.
  std::vector<double> log_terms;
  log_terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.lo + static_cast<double>(i) * grid.step;
    const double p = density_p(x);
    const double q = density_q(x);
    if (p < 0.0 || q < 0.0) {
      throw std::domain_error("renyi_numeric_oracle: negative density");
    }
    if (p == 0.0) continue;
    if (q == 0.0) return kInf;
    double lt = a * std::log(p) + (1.0 - a) * std::log(q);
    if (i == 0 || i + 1 == n) lt -= std::log(2.0);
    log_terms.push_back(lt);
  }
  if (log_terms.empty()) return kInf;
  const double log_integral = log_sum_exp(log_terms) + std::log(grid.step);
  return log_integral / (a - 1.0);
}

}  // namespace rdpaudit
