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

#include "rdpaudit/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rdpaudit/rng.hpp"

namespace rdpaudit {

namespace {

void check_instance_params(double delta, double tau) {
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw std::domain_error("packing delta must lie in (0, 1/2]");
  }
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::domain_error("packing tau must lie in (0, 1]");
  }
}

// The value formulas are also well defined at delta = 0 (no signal).
void check_value_params(double delta, double tau) {
  if (!(delta >= 0.0 && delta <= 0.5)) {
    throw std::domain_error("delta must lie in [0, 1/2]");
  }
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::domain_error("tau must lie in (0, 1]");
  }
}

void check_same_dim(const Codeword& u, const Codeword& v) {
  if (u.size() != v.size() || u.empty()) {
    throw std::invalid_argument("codewords must share a positive dimension");
  }
}

void check_balanced(const Codeword& u, const char* where) {
  if (!is_balanced(u)) {
    throw std::invalid_argument(std::string(where) +
                                ": codeword is not balanced +/-1");
  }
}

}  // namespace

bool is_balanced(const Codeword& u) {
  int sum = 0;
  for (int x : u) {
    if (x != 1 && x != -1) return false;
    sum += x;
  }
  return sum == 0 && !u.empty();
}

int hamming_distance(const Codeword& u, const Codeword& v) {
  check_same_dim(u, v);
  int d = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != v[i]) ++d;
  }
  return d;
}

double correlation(const Codeword& u, const Codeword& v) {
  check_same_dim(u, v);
  long acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return static_cast<double>(acc) / static_cast<double>(u.size());
}

std::vector<double> q_u_masses(const Codeword& u, double delta) {
  check_balanced(u, "q_u_masses");
  const double d = static_cast<double>(u.size());
  std::vector<double> q(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    q[i] = (1.0 + delta * static_cast<double>(u[i])) / d;
  }
  return q;
}

PackingInstance build_balanced_packing(int d, int target_count,
                                       std::uint64_t seed, double delta,
                                       double tau) {
  if (d < 8 || d % 2 != 0) {
    throw std::invalid_argument("build_balanced_packing: d must be even and >= 8");
  }
  if (target_count < 2) {
    throw std::invalid_argument("build_balanced_packing: target_count >= 2 required");
  }
  check_instance_params(delta, tau);

  PackingInstance instance;
  instance.d = d;
  instance.delta = delta;
  instance.tau = tau;

  const int lo = d / 4;
  const int hi = 3 * d / 4;
  Rng rng(derive_seed(seed, {0x7061636b}));  // "pack"
  Codeword candidate(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) candidate[static_cast<std::size_t>(i)] = i < d / 2 ? 1 : -1;

  const long stall_bound = 2000L * target_count;
  long attempts = 0;
  long stall = 0;
  while (static_cast<int>(instance.codewords.size()) < target_count &&
         stall < stall_bound) {
    rng.shuffle(candidate);
    ++attempts;
    bool ok = true;
    for (const Codeword& kept : instance.codewords) {
      const int dist = hamming_distance(kept, candidate);
      if (dist < lo || dist > hi) {
        ok = false;
        break;
      }
    }
    if (ok) {
      instance.codewords.push_back(candidate);
      stall = 0;
    } else {
      ++stall;
    }
  }
  if (instance.codewords.size() < 2) {
    throw infeasible_error("build_balanced_packing: stalled with fewer than 2 "
                           "codewords after " + std::to_string(attempts) +
                           " attempts");
  }
  return instance;
}

double population_dv_value(const Codeword& u, const Codeword& v, Order alpha,
                           double tau, double delta) {
  check_balanced(u, "population_dv_value");
  check_balanced(v, "population_dv_value");
  check_same_dim(u, v);
  check_value_params(delta, tau);
  const double al = alpha.alpha();
  const double a = (al - 1.0) * tau;
  const double b = al * tau;
  const double arg = std::cosh(a) + delta * std::sinh(a) * correlation(u, v);
  if (!(arg > 0.0)) {
    // Cannot happen for delta <= 1/2, tau <= 1; kept as a hard check.
    throw std::domain_error("population_dv_value: nonpositive log argument");
  }
  return std::log(arg) / (al - 1.0) - std::log(std::cosh(b)) / al;
}

double population_dv_brute(const Codeword& u, const Codeword& v, Order alpha,
                           double tau, double delta) {
  check_balanced(u, "population_dv_brute");
  check_balanced(v, "population_dv_brute");
  check_same_dim(u, v);
  check_value_params(delta, tau);
  const double al = alpha.alpha();
  const double d = static_cast<double>(u.size());
  // E_{Q_u}[exp((al-1) T_v)] and E_P[exp(al T_v)] summed outcome by outcome.
  double eq = 0.0, ep = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = tau * static_cast<double>(v[i]);
    eq += (1.0 + delta * static_cast<double>(u[i])) / d * std::exp((al - 1.0) * t);
    ep += std::exp(al * t) / d;
  }
  return std::log(eq) / (al - 1.0) - std::log(ep) / al;
}

double hypothesis_kl(const Codeword& u, const Codeword& v, double delta) {
  check_balanced(u, "hypothesis_kl");
  check_balanced(v, "hypothesis_kl");
  check_same_dim(u, v);
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw std::domain_error("hypothesis_kl: delta must lie in [0,1)");
  }
  const double m = static_cast<double>(hamming_distance(u, v)) / 2.0;
  const double d = static_cast<double>(u.size());
  return (2.0 * m * delta / d) * std::log((1.0 + delta) / (1.0 - delta));
}

double hypothesis_kl_brute(const Codeword& u, const Codeword& v, double delta) {
  const std::vector<double> qu = q_u_masses(u, delta);
  const std::vector<double> qv = q_u_masses(v, delta);
  double kl = 0.0;
  for (std::size_t i = 0; i < qu.size(); ++i) {
    kl += qu[i] * std::log(qu[i] / qv[i]);
  }
  return kl;
}

double separation_gap(Order alpha, double tau, double delta) {
  check_value_params(delta, tau);
  const double al = alpha.alpha();
  const double a = (al - 1.0) * tau;
  const auto F = [&](double r) {
    return std::log(std::cosh(a) + delta * std::sinh(a) * r) / (al - 1.0);
  };
  return F(1.0) - F(0.5);
}

double c_alpha_numeric(Order alpha, double tau) {
  check_instance_params(0.25, tau);
  const double al = alpha.alpha();
  const double a = (al - 1.0) * tau;
  // F'(r)/delta = sinh(a) / ((al-1)(cosh(a) + delta sinh(a) r)); minimized
  // over the grid r in [-1,1] at the worst admissible delta = 1/2.
  const double worst_delta = 0.5;
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double r = -1.0 + 2.0 * static_cast<double>(i) / 200.0;
    const double denom = (al - 1.0) * (std::cosh(a) +
                                       worst_delta * std::sinh(a) * r);
    c = std::min(c, std::sinh(a) / denom);
  }
  return c;
}

InstanceVerification verify_instance(const PackingInstance& instance,
                                     Order alpha) {
  const auto& words = instance.codewords;
  if (words.size() < 2) {
    throw std::invalid_argument("verify_instance: need >= 2 codewords");
  }
  InstanceVerification v;
  const int lo = instance.d / 4;
  const int hi = 3 * instance.d / 4;

  v.balanced = std::all_of(words.begin(), words.end(),
                           [](const Codeword& u) { return is_balanced(u); });

  v.distance_window = true;
  for (std::size_t i = 0; i < words.size() && v.distance_window; ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const int dist = hamming_distance(words[i], words[j]);
      if (dist < lo || dist > hi) {
        v.distance_window = false;
        break;
      }
    }
  }

  v.q_valid = true;
  for (const Codeword& u : words) {
    const std::vector<double> q = q_u_masses(u, instance.delta);
    const double total = std::accumulate(q.begin(), q.end(), 0.0);
    const bool positive = std::all_of(q.begin(), q.end(),
                                      [](double m) { return m > 0.0; });
    if (!positive || std::abs(total - 1.0) > 1e-12) {
      v.q_valid = false;
      break;
    }
  }

  for (const Codeword& u : words) {
    for (const Codeword& w : words) {
      const double closed =
          population_dv_value(u, w, alpha, instance.tau, instance.delta);
      const double brute =
          population_dv_brute(u, w, alpha, instance.tau, instance.delta);
      v.max_dv_deviation = std::max(v.max_dv_deviation, std::abs(closed - brute));
      if (u != w) {
        const double kl_closed = hypothesis_kl(u, w, instance.delta);
        const double kl_brute = hypothesis_kl_brute(u, w, instance.delta);
        v.max_kl_deviation =
            std::max(v.max_kl_deviation, std::abs(kl_closed - kl_brute));
      }
    }
  }
  v.closed_form_matches_brute = v.max_dv_deviation <= 1e-12;
  v.kl_matches_brute = v.max_kl_deviation <= 1e-12;

  // Decoding separation: every true codeword beats all others by the gap.
  v.gap = separation_gap(alpha, instance.tau, instance.delta);
  v.min_decoding_margin = std::numeric_limits<double>::infinity();
  for (const Codeword& u : words) {
    const double self =
        population_dv_value(u, u, alpha, instance.tau, instance.delta);
    double best_other = -std::numeric_limits<double>::infinity();
    for (const Codeword& w : words) {
      if (w == u) continue;
      best_other = std::max(best_other, population_dv_value(u, w, alpha,
                                                            instance.tau,
                                                            instance.delta));
    }
    v.min_decoding_margin = std::min(v.min_decoding_margin, self - best_other);
  }
  v.decoding_separation = v.min_decoding_margin >= v.gap - 1e-12;

  // Lipschitz witness: max_i |T_u(i) - T_v(i)| <= 2 tau ||theta_u - theta_v||.
  v.lipschitz_witness = true;
  const double sqrt_d = std::sqrt(static_cast<double>(instance.d));
  for (std::size_t i = 0; i < words.size() && v.lipschitz_witness; ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const double sup_t = instance.tau * 2.0 *
                           (hamming_distance(words[i], words[j]) > 0 ? 1.0 : 0.0);
      const double theta_dist =
          2.0 * std::sqrt(static_cast<double>(
                    hamming_distance(words[i], words[j]))) / sqrt_d;
      if (sup_t > 2.0 * instance.tau * theta_dist + 1e-12) {
        v.lipschitz_witness = false;
      }
    }
  }
  return v;
}

PlannerReport planner_consistency_check(int d, double epsilon, Order alpha,
                                        double tau, std::uint64_t seed,
                                        int target_count) {
  if (!(epsilon > 0.0)) {
    throw std::domain_error("planner_consistency_check: epsilon must be positive");
  }
  PlannerReport report;
  report.d = d;
  report.epsilon = epsilon;
  report.alpha = alpha.alpha();
  report.tau = tau;
  report.c_alpha = c_alpha_numeric(alpha, tau);
  report.delta = 8.0 * epsilon / report.c_alpha;
  if (report.delta > 0.5) {
    throw infeasible_error(
        "planner_consistency_check: delta = 8 eps / c_alpha = " +
        std::to_string(report.delta) +
        " exceeds 1/2; choose a smaller epsilon");
  }
  if (target_count <= 0) {
    // Keep construction time flat: a handful of codewords suffices to
    // exhibit the invariants at any d.
    target_count = std::min(32, std::max(4, d / 2));
  }
  const PackingInstance instance =
      build_balanced_packing(d, target_count, seed, report.delta, tau);
  report.packing_size = instance.codewords.size();
  report.log_packing_size = std::log(static_cast<double>(report.packing_size));
  // Worst per-pair KL over the admissible window (hamming = 3d/4, m = 3d/8).
  report.kl_max = (2.0 * (3.0 * d / 8.0) * report.delta / d) *
                  std::log((1.0 + report.delta) / (1.0 - report.delta));
  report.n_regime = static_cast<std::uint64_t>(
      std::floor(static_cast<double>(d) / (epsilon * epsilon)));
  report.mutual_info_bound =
      static_cast<double>(report.n_regime) * report.kl_max;
  report.fano_threshold = 0.5 * report.log_packing_size;
  report.fano_binding =
      report.mutual_info_bound + std::log(2.0) <= report.fano_threshold;
  const double headroom = report.fano_threshold - std::log(2.0);
  report.n_fano_max =
      headroom <= 0.0 ? 0
                      : static_cast<std::uint64_t>(
                            std::floor(headroom / report.kl_max));
  return report;
}

}  // namespace rdpaudit
