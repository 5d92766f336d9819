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

#include "rdpaudit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdpaudit {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::domain_error("confidence parameter must lie in (0,1), got " +
                            std::to_string(beta));
  }
}

void check_class_spec(const CriticClassSpec& spec) {
  if (spec.d <= 0 || !(spec.K > 0.0) || !(spec.M > 0.0) ||
      !(spec.lipschitz > 0.0)) {
    throw std::domain_error("CriticClassSpec: all fields must be positive");
  }
}

}  // namespace

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::kLower: return "lower";
    case BoundKind::kUpper: return "upper";
    case BoundKind::kTwoSided: return "two_sided";
  }
  return "?";
}

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::kMarkov: return "markov";
    case BoundMethod::kHoeffdingLower: return "hoeffding_lower";
    case BoundMethod::kHoeffdingUpper: return "hoeffding_upper";
    case BoundMethod::kDvCovering: return "dv_covering";
  }
  return "?";
}

ConfidenceBound markov_lower_bound(double d_hat, Order order, double beta) {
  if (!order.is_standard()) {
    throw std::domain_error("markov_lower_bound: requires alpha > 1");
  }
  check_beta(beta);
  ConfidenceBound b;
  b.kind = BoundKind::kLower;
  b.lower = d_hat - std::log(1.0 / beta) / (order.alpha() - 1.0);
  b.level = 1.0 - beta;
  b.method = BoundMethod::kMarkov;
  return b;
}

ConfidenceBound hoeffding_upper_bound(double z_hat, std::int64_t n, double B,
                                      Order order, double beta) {
  if (n <= 0) throw std::domain_error("hoeffding_upper_bound: n must be positive");
  if (!order.is_standard()) {
    throw std::domain_error("hoeffding_upper_bound: requires alpha > 1");
  }
  if (z_hat < 0.0) throw std::domain_error("hoeffding_upper_bound: z_hat < 0");
  check_beta(beta);
  const double a = order.alpha();
  const double dev = std::exp(a * B) *
                     std::sqrt(std::log(2.0 / beta) / (2.0 * static_cast<double>(n)));
  ConfidenceBound b;
  b.kind = BoundKind::kUpper;
  b.upper = std::log(z_hat + dev) / (a - 1.0);
  b.level = 1.0 - beta;
  b.method = BoundMethod::kHoeffdingUpper;
  return b;
}

ConfidenceBound hoeffding_lower_bound(double z_hat, std::int64_t n, double B,
                                      Order order, double beta) {
  if (n <= 0) throw std::domain_error("hoeffding_lower_bound: n must be positive");
  if (!order.is_standard()) {
    throw std::domain_error("hoeffding_lower_bound: requires alpha > 1");
  }
  if (z_hat < 0.0) throw std::domain_error("hoeffding_lower_bound: z_hat < 0");
  check_beta(beta);
  const double a = order.alpha();
  const double dev = std::exp(a * B) *
                     std::sqrt(std::log(1.0 / beta) / (2.0 * static_cast<double>(n)));
  ConfidenceBound b;
  b.kind = BoundKind::kLower;
  b.lower = std::log(std::max(1.0, z_hat - dev)) / (a - 1.0);
  b.level = 1.0 - beta;
  b.method = BoundMethod::kHoeffdingLower;
  return b;
}

double dv_radius_constant(Order order, double M) {
  const double a = order.alpha();
  return 4.0 * std::exp(2.0 * std::abs(a) * M) *
         std::max(1.0 / std::abs(a - 1.0), 1.0 / std::abs(a));
}

double dv_ci_radius(std::int64_t n, const CriticClassSpec& spec, Order order,
                    double delta, double eta) {
  if (n <= 0) throw std::domain_error("dv_ci_radius: n must be positive");
  check_class_spec(spec);
  check_beta(delta);
  if (eta == 0.0) eta = 1.0 / std::sqrt(static_cast<double>(n));
  if (!(eta > 0.0) || eta >= spec.K) {
    throw std::domain_error(
        "dv_ci_radius: eta must lie in (0, K); log(K/eta) would be "
        "nonpositive otherwise");
  }
  const double C = dv_radius_constant(order, spec.M);
  const double numer = static_cast<double>(spec.d) * std::log(spec.K / eta) +
                       std::log(1.0 / delta);
  return C * (std::sqrt(numer / static_cast<double>(n)) + eta);
}

ConfidenceBound dv_certificate(double r_hat, double radius, double delta_ci) {
  if (radius < 0.0) {
    throw std::domain_error("dv_certificate: radius must be nonnegative");
  }
  check_beta(delta_ci);
  ConfidenceBound b;
  b.kind = BoundKind::kTwoSided;
  b.lower = r_hat - radius;
  b.upper = r_hat + radius;
  b.level = 1.0 - delta_ci;
  b.method = BoundMethod::kDvCovering;
  return b;
}

double violation_epsilon(double lcb, Order order, double delta) {
  if (!order.is_standard()) {
    throw std::domain_error("violation_epsilon: requires alpha > 1");
  }
  check_beta(delta);
  return lcb + std::log(1.0 / delta) / (order.alpha() - 1.0);
}

AuditDecision hypothesis_test(double d_hat, double epsilon_null, Order order,
                              double beta) {
  if (!order.is_standard()) {
    throw std::domain_error("hypothesis_test: requires alpha > 1");
  }
  check_beta(beta);
  AuditDecision dec;
  dec.epsilon_null = epsilon_null;
  dec.beta = beta;
  dec.alpha = order.alpha();
  dec.sup_rejectable_epsilon =
      d_hat - std::log(1.0 / beta) / (order.alpha() - 1.0);
  dec.reject_null = dec.sup_rejectable_epsilon > epsilon_null;
  return dec;
}

SamplePlan required_samples(double target_eps, const CriticClassSpec& spec,
                            Order order, double delta) {
  if (!(target_eps > 0.0)) {
    throw std::domain_error("required_samples: target_eps must be positive");
  }
  check_class_spec(spec);
  check_beta(delta);

  SamplePlan plan;
  plan.radius_constant = dv_radius_constant(order, spec.M);
  plan.n_floor = static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(spec.d) / (target_eps * target_eps)));

  const auto radius_at = [&](std::uint64_t n) {
    const double eta = 1.0 / std::sqrt(static_cast<double>(n));
    if (eta >= spec.K) return std::numeric_limits<double>::infinity();
    return dv_ci_radius(static_cast<std::int64_t>(n), spec, order, delta, eta);
  };

  constexpr std::uint64_t kCap = 1ULL << 62;
  std::uint64_t hi = 1;
  while (radius_at(hi) > target_eps) {
    if (hi >= kCap) {
      throw infeasible_error(
          "required_samples: target " + std::to_string(target_eps) +
          " not reachable below n = 2^62");
    }
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // radius_at(lo) > target (or lo == 0)
  while (hi - lo > 1 && lo > 0) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (radius_at(mid) > target_eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  plan.n_upper = hi;
  return plan;
}

}  // namespace rdpaudit
