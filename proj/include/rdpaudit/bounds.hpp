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

#ifndef RDPAUDIT_BOUNDS_HPP_
#define RDPAUDIT_BOUNDS_HPP_

#include <cstdint>
#include <string>

#include "rdpaudit/types.hpp"

namespace rdpaudit {

enum class BoundKind { kLower, kUpper, kTwoSided };
enum class BoundMethod { kMarkov, kHoeffdingLower, kHoeffdingUpper, kDvCovering };

std::string to_string(BoundKind k);
std::string to_string(BoundMethod m);

// A one- or two-sided bound on a divergence at confidence `level` = 1 - beta
// (or 1 - delta_ci), tagged with the producing method.
struct ConfidenceBound {
  BoundKind kind = BoundKind::kLower;
  double lower = 0.0;  // meaningful for kLower / kTwoSided
  double upper = 0.0;  // meaningful for kUpper / kTwoSided
  double level = 0.0;
  BoundMethod method = BoundMethod::kMarkov;
};

// Critic-class description backing the covering-number confidence radius:
// d parameters inside the radius-K ball, outputs bounded by M. The Lipschitz
// constant is carried for reporting but does not enter the radius formula
// (it is absorbed into the O(eta) term of the underlying bound).
struct CriticClassSpec {
  int d = 0;
  double K = 0.0;
  double M = 0.0;
  double lipschitz = 1.0;
};

// Outcome of testing a null RDP claim against an audit estimate.
struct AuditDecision {
  bool reject_null = false;
  double epsilon_null = 0.0;
  double sup_rejectable_epsilon = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
};

// Markov lower confidence bound: d_hat - log(1/beta)/(alpha-1) at level
// 1-beta. Negative values are reported unchanged; flooring at zero is a
// presentation choice left to callers.
ConfidenceBound markov_lower_bound(double d_hat, Order order, double beta);

// Hoeffding bounds under the bounded-privacy-loss assumption L <= B, so the
// plug-in terms satisfy 0 <= Z_i <= e^{alpha B}.
ConfidenceBound hoeffding_upper_bound(double z_hat, std::int64_t n, double B,
                                      Order order, double beta);
ConfidenceBound hoeffding_lower_bound(double z_hat, std::int64_t n, double B,
                                      Order order, double beta);

// The explicit conservative constant in the covering-number radius:
//   C = 4 e^{2|alpha| M} max{1/|alpha-1|, 1/|alpha|}.
double dv_radius_constant(Order order, double M);

// Finite-sample confidence radius for the class-restricted DV estimator:
//   eps_n(delta) = C * ( sqrt((d log(K/eta) + log(1/delta)) / n) + eta ).
// Passing eta = 0 substitutes eta = n^{-1/2}.
double dv_ci_radius(std::int64_t n, const CriticClassSpec& spec, Order order,
                    double delta, double eta);

// Two-sided certificate [r_hat - radius, r_hat + radius]; the lower edge is
// the violation-certifying LCB.
ConfidenceBound dv_certificate(double r_hat, double radius, double delta_ci);

// Any claimed (eps, delta)-DP with eps below  lcb + log(1/delta)/(alpha-1)
// is certified violated at the certificate's confidence.
double violation_epsilon(double lcb, Order order, double delta);

// Markov-region hypothesis test: the largest rejectable epsilon is
// d_hat - log(1/beta)/(alpha-1); the null is rejected iff it exceeds
// epsilon_null.
AuditDecision hypothesis_test(double d_hat, double epsilon_null, Order order,
                              double beta);

// Sample-size planning: n_upper is the smallest n whose radius (at
// eta = n^{-1/2}) meets the target; n_floor = ceil(d / eps^2) is the
// order-of-magnitude information-theoretic floor with its undetermined
// constant set to 1.
struct SamplePlan {
  std::uint64_t n_upper = 0;
  std::uint64_t n_floor = 0;
  double radius_constant = 0.0;
};

SamplePlan required_samples(double target_eps, const CriticClassSpec& spec,
                            Order order, double delta);

}  // namespace rdpaudit

#endif  // RDPAUDIT_BOUNDS_HPP_
