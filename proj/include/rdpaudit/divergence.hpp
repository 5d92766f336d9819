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

#ifndef RDPAUDIT_DIVERGENCE_HPP_
#define RDPAUDIT_DIVERGENCE_HPP_

#include <span>

#include "rdpaudit/types.hpp"

namespace rdpaudit {

// Closed-form and plug-in Renyi divergence computations. These serve as
// ground-truth oracles for the trained estimator and as the density-aware
// auditing path. Divergent cases are reported as +infinity, never as an
// exception, so pipelines can report "unbounded" instead of aborting.

// Exact D_alpha between N(mu_p, sigma^2) and N(mu_q, sigma^2):
//   alpha * (mu_p - mu_q)^2 / (2 sigma^2).
double renyi_gaussian(double mu_p, double mu_q, double sigma, Order order);

// D_alpha(Bern(p) || Bern(q)) = log(p^a q^{1-a} + (1-p)^a (1-q)^{1-a})/(a-1).
// Requires p in [0,1]. For q in {0,1} with p != q the divergence is infinite
// and +infinity is returned.
double renyi_bernoulli(double p, double q, Order order);

// D_alpha over two discrete mass vectors of equal length:
//   (1/(a-1)) * log sum_i p_i^a q_i^{1-a}.
// Returns +infinity when some q_i = 0 carries p_i > 0 mass (for alpha > 1).
double renyi_discrete(std::span<const double> p_mass,
                      std::span<const double> q_mass, Order order);

// Plug-in estimate from samples of Q and a known log-ratio L = log(p/q):
//   z_hat = (1/n) sum_i exp(alpha * L(x_i))   (log-sum-exp stabilized)
//   d_hat = log(z_hat) / (alpha - 1)
struct PluginEstimate {
  double d_hat = 0.0;
  double z_hat = 0.0;
  double log_z_hat = 0.0;
};

PluginEstimate plugin_estimate(const SampleSet& samples_q,
                               const LogRatioOracle& oracle, Order order);

// Fixed-step trapezoidal quadrature grid on [lo, hi].
struct QuadratureGrid {
  double lo = -10.0;
  double hi = 10.0;
  double step = 1e-3;
};

// Brute-force quadrature oracle:
//   (1/(a-1)) * log \int p(x)^a q(x)^{1-a} dx   on the given grid.
// Returns +infinity when the integrand diverges (q = 0 where p > 0).
double renyi_numeric_oracle(const Density& density_p, const Density& density_q,
                            Order order, const QuadratureGrid& grid);

}  // namespace rdpaudit

#endif  // RDPAUDIT_DIVERGENCE_HPP_
