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

#ifndef RDPAUDIT_ACCOUNTING_HPP_
#define RDPAUDIT_ACCOUNTING_HPP_

#include <string>
#include <variant>

#include "rdpaudit/types.hpp"

namespace rdpaudit {

// The three privacy-accounting languages audits get compared against.
struct Rdp {
  double alpha = 2.0;    // > 1
  double eps_alpha = 0;  // >= 0
};

struct ApproxDp {
  double eps = 0.0;    // >= 0
  double delta = 0.0;  // in [0,1]
};

struct Gdp {
  double mu = 0.0;  // >= 0
};

using PrivacyGuarantee = std::variant<Rdp, ApproxDp, Gdp>;

// Standard normal CDF via erfc; absolute error well below 1e-10.
double normal_cdf(double x);

// log Phi(x), stable far into the lower tail (asymptotic expansion for
// x < -30 where erfc loses log-scale information).
double log_normal_cdf(double x);

// (alpha, eps_alpha)-RDP implies (eps_alpha + log(1/delta)/(alpha-1), delta)-DP.
ApproxDp rdp_to_approx_dp(const Rdp& g, double delta);

// mu-GDP implies (alpha, mu^2 * alpha / 2)-RDP for any alpha > 1.
Rdp gdp_to_rdp(const Gdp& g, double alpha);

// The exact GDP trade-off curve:
//   delta(eps) = Phi(-eps/mu + mu/2) - e^eps * Phi(-eps/mu - mu/2).
// The second term is evaluated in log space so large eps cannot overflow.
double gdp_to_approx_dp_delta(const Gdp& g, double eps);

// Numerically inverts the curve above: the mu in [1e-6, 100] with
// delta(eps; mu) = delta. Throws infeasible_error when no root lies in the
// bracket.
Gdp approx_dp_to_gdp(double eps, double delta);

// Group privacy for 2^c-stable dataset maps: requires alpha >= 2^{c+1} and
// yields (alpha / 2^c, 3^c * eps_alpha)-RDP.
Rdp group_privacy(const Rdp& g, int c);

// "rdp:alpha,eps" | "dp:eps,delta" | "gdp:mu"
PrivacyGuarantee parse_guarantee(const std::string& text);
std::string to_string(const PrivacyGuarantee& g);

}  // namespace rdpaudit

#endif  // RDPAUDIT_ACCOUNTING_HPP_
