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

#ifndef RDPAUDIT_MINIMAX_HPP_
#define RDPAUDIT_MINIMAX_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rdpaudit/types.hpp"

namespace rdpaudit {

// Constructive verifier for the packing-based hardness instance: balanced
// +/-1 codewords with pairwise Hamming distance inside [d/4, 3d/4], the
// uniform base distribution P and the perturbed family Q_u(i) = (1+delta*u_i)/d,
// and critics T_{theta^u}(i) = tau * u_i on Omega = {1..d}.

using Codeword = std::vector<int>;  // entries in {-1, +1}

struct PackingInstance {
  int d = 0;
  std::vector<Codeword> codewords;
  double delta = 0.25;  // in (0, 1/2]
  double tau = 0.5;     // in (0, 1]
};

bool is_balanced(const Codeword& u);
int hamming_distance(const Codeword& u, const Codeword& v);
// Correlation rho(u, v) = (1/d) sum_i u_i v_i.
double correlation(const Codeword& u, const Codeword& v);

// Q_u masses (1 + delta * u_i) / d over Omega = {1..d}.
std::vector<double> q_u_masses(const Codeword& u, double delta);

// Greedy randomized construction: draws balanced vectors and keeps those at
// Hamming distance in [d/4, 3d/4] from all kept vectors until target_count
// or a stall bound. Throws infeasible_error if fewer than 2 codewords are
// found.
PackingInstance build_balanced_packing(int d, int target_count,
                                       std::uint64_t seed, double delta = 0.25,
                                       double tau = 0.5);

// Closed-form population DV value of the pair (P, Q_u) at critic theta^v:
//   (1/(a-1)) log(cosh(a') + delta sinh(a') rho(u,v)) - (1/a) log cosh(b')
// with a' = (alpha-1) tau and b' = alpha tau.
double population_dv_value(const Codeword& u, const Codeword& v, Order alpha,
                           double tau, double delta);

// Same value by direct summation over Omega; the independent oracle for the
// closed form.
double population_dv_brute(const Codeword& u, const Codeword& v, Order alpha,
                           double tau, double delta);

// KL(Q_u || Q_v) = (2 m delta / d) log((1+delta)/(1-delta)) with
// m = hamming/2. Requires balanced inputs.
double hypothesis_kl(const Codeword& u, const Codeword& v, double delta);

// The same KL by direct summation.
double hypothesis_kl_brute(const Codeword& u, const Codeword& v, double delta);

// F(1) - F(1/2) with F(r) = (1/(a-1)) log(cosh(a') + delta sinh(a') r): the
// population gap separating the true critic from any far codeword.
double separation_gap(Order alpha, double tau, double delta);

// min over r in [-1,1] (grid) and delta' <= 1/2 of F'(r)/delta': the concrete
// constant c_alpha behind the gap's linear-in-delta lower bound.
double c_alpha_numeric(Order alpha, double tau);

// Checks every invariant the construction promises; `max_*` fields carry the
// worst observed deviation so callers can report margins.
struct InstanceVerification {
  bool balanced = false;
  bool distance_window = false;
  bool q_valid = false;                 // each Q_u positive, sums to 1
  bool closed_form_matches_brute = false;
  bool kl_matches_brute = false;
  bool decoding_separation = false;     // gap inequality realized
  bool lipschitz_witness = false;       // |T_u - T_v|_inf <= 2 tau |theta_u - theta_v|
  double max_dv_deviation = 0.0;
  double max_kl_deviation = 0.0;
  double min_decoding_margin = 0.0;
  double gap = 0.0;

  bool all_ok() const {
    return balanced && distance_window && q_valid &&
           closed_form_matches_brute && kl_matches_brute &&
           decoding_separation && lipschitz_witness;
  }
};

InstanceVerification verify_instance(const PackingInstance& instance,
                                     Order alpha);

// Sample-complexity planning report built from the instance with
// delta = 8 eps / c_alpha and the regime boundary n = d / eps^2.
struct PlannerReport {
  int d = 0;
  double epsilon = 0.0;
  double alpha = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  double c_alpha = 0.0;
  std::size_t packing_size = 0;
  double log_packing_size = 0.0;
  double kl_max = 0.0;          // per-pair KL at the window's far edge
  std::uint64_t n_regime = 0;   // floor(d / eps^2)
  double mutual_info_bound = 0.0;  // n_regime * kl_max
  double fano_threshold = 0.0;     // 0.5 * log packing size
  bool fano_binding = false;       // mutual_info_bound + log 2 <= threshold
  // Largest n for which n * kl_max + log 2 <= fano_threshold with this
  // constructed packing; 0 when even a single sample breaks the bound.
  std::uint64_t n_fano_max = 0;
};

PlannerReport planner_consistency_check(int d, double epsilon,
                                        Order alpha = Order(2.0),
                                        double tau = 0.5,
                                        std::uint64_t seed = 1,
                                        int target_count = 0);

}  // namespace rdpaudit

#endif  // RDPAUDIT_MINIMAX_HPP_
