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

#include "rdpaudit/accounting.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rdpaudit {

namespace {

constexpr double kMuBracketLo = 1e-6;
constexpr double kMuBracketHi = 100.0;

void check_rdp(const Rdp& g) {
  if (!(g.alpha > 1.0)) {
    throw std::domain_error("Rdp: alpha must exceed 1, got " +
                            std::to_string(g.alpha));
  }
  if (g.eps_alpha < 0.0) {
    throw std::domain_error("Rdp: eps_alpha must be nonnegative");
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("delta must lie in (0,1), got " +
                            std::to_string(delta));
  }
}

}  // namespace

double normal_cdf(double x) {
  return std::erfc(-x / std::numbers::sqrt2) / 2.0;
}

double log_normal_cdf(double x) {
  if (x > -30.0) {
    return std::log(normal_cdf(x));
  }
  // Lower-tail asymptotic: Phi(x) = phi(x)/(-x) (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
  const double x2 = x * x;
  const double series =
      1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * x2 - std::log(-x) +
         std::log(series);
}

ApproxDp rdp_to_approx_dp(const Rdp& g, double delta) {
  check_rdp(g);
  check_delta(delta);
  return ApproxDp{g.eps_alpha + std::log(1.0 / delta) / (g.alpha - 1.0), delta};
}

Rdp gdp_to_rdp(const Gdp& g, double alpha) {
  if (g.mu < 0.0) throw std::domain_error("Gdp: mu must be nonnegative");
  if (!(alpha > 1.0)) {
    throw std::domain_error("gdp_to_rdp: alpha must exceed 1");
  }
  return Rdp{alpha, 0.5 * g.mu * g.mu * alpha};
}

double gdp_to_approx_dp_delta(const Gdp& g, double eps) {
  if (g.mu < 0.0) throw std::domain_error("Gdp: mu must be nonnegative");
  if (eps < 0.0) throw std::domain_error("gdp_to_approx_dp_delta: eps < 0");
  if (g.mu == 0.0) return 0.0;  // perfectly private mechanism
  const double t1 = normal_cdf(-eps / g.mu + g.mu / 2.0);
  const double log_t2 = eps + log_normal_cdf(-eps / g.mu - g.mu / 2.0);
  const double delta = t1 - std::exp(log_t2);
  return std::max(delta, 0.0);
}

Gdp approx_dp_to_gdp(double eps, double delta) {
  if (eps < 0.0) throw std::domain_error("approx_dp_to_gdp: eps < 0");
  check_delta(delta);
  // delta(eps; mu) is increasing in mu, so bisect.
  double lo = kMuBracketLo, hi = kMuBracketHi;
  if (gdp_to_approx_dp_delta(Gdp{lo}, eps) > delta ||
      gdp_to_approx_dp_delta(Gdp{hi}, eps) < delta) {
    std::ostringstream msg;
    msg << "approx_dp_to_gdp: no mu in [" << kMuBracketLo << ", "
        << kMuBracketHi << "] matches delta = " << delta << " at eps = " << eps;
    throw infeasible_error(msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gdp_to_approx_dp_delta(Gdp{mid}, eps) < delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);
  if (std::abs(gdp_to_approx_dp_delta(Gdp{mu}, eps) - delta) > 1e-9) {
    throw infeasible_error("approx_dp_to_gdp: bisection failed to reach the "
                           "1e-9 delta tolerance");
  }
  return Gdp{mu};
}

Rdp group_privacy(const Rdp& g, int c) {
  check_rdp(g);
  if (c < 0) throw std::domain_error("group_privacy: c must be nonnegative");
  const double required = std::ldexp(1.0, c + 1);  // 2^{c+1}
  if (g.alpha < required) {
    throw std::domain_error("group_privacy: needs alpha >= 2^(c+1) = " +
                            std::to_string(required) + ", got alpha = " +
                            std::to_string(g.alpha));
  }
  const double scale = std::pow(3.0, c);
  return Rdp{g.alpha / std::ldexp(1.0, c), scale * g.eps_alpha};
}

PrivacyGuarantee parse_guarantee(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("parse_guarantee: expected 'kind:params', got '" +
                                text + "'");
  }
  const std::string kind = text.substr(0, colon);
  std::vector<double> params;
  {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) {
        throw std::invalid_argument("parse_guarantee: bad number '" + item + "'");
      }
      params.push_back(v);
    }
  }
  if (kind == "rdp" && params.size() == 2) {
    Rdp g{params[0], params[1]};
    check_rdp(g);
    return g;
  }
  if (kind == "dp" && params.size() == 2) {
    if (params[0] < 0.0 || params[1] < 0.0 || params[1] > 1.0) {
      throw std::invalid_argument("parse_guarantee: dp needs eps >= 0, delta in [0,1]");
    }
    return ApproxDp{params[0], params[1]};
  }
  if (kind == "gdp" && params.size() == 1) {
    if (params[0] < 0.0) {
      throw std::invalid_argument("parse_guarantee: gdp needs mu >= 0");
    }
    return Gdp{params[0]};
  }
  throw std::invalid_argument(
      "parse_guarantee: expected rdp:alpha,eps | dp:eps,delta | gdp:mu, got '" +
      text + "'");
}

std::string to_string(const PrivacyGuarantee& g) {
  std::ostringstream out;
  if (const auto* r = std::get_if<Rdp>(&g)) {
    out << "(" << r->alpha << ", " << r->eps_alpha << ")-RDP";
  } else if (const auto* d = std::get_if<ApproxDp>(&g)) {
    out << "(" << d->eps << ", " << d->delta << ")-DP";
  } else {
    out << std::get<Gdp>(g).mu << "-GDP";
  }
  return out.str();
}

}  // namespace rdpaudit
