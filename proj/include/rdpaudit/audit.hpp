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

#ifndef RDPAUDIT_AUDIT_HPP_
#define RDPAUDIT_AUDIT_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "rdpaudit/accounting.hpp"
#include "rdpaudit/bounds.hpp"
#include "rdpaudit/dv_estimator.hpp"
#include "rdpaudit/mechanisms.hpp"
#include "rdpaudit/types.hpp"

namespace rdpaudit {

// Observation sources for an audit: simulate a known mechanism, run the
// miniature DP-SGD pipeline, or ingest externally produced loss files.
struct GaussianSource {
  GaussianMechanismSpec spec;
};

struct BernoulliSource {
  double tpr = 0.9;
  double fpr = 0.1;
};

struct DpSgdSource {
  int dataset_size = 400;
  DpSgdConfig dp;
  int warm_start_epochs = 0;
  double warm_start_lr = 0.05;
};

struct FileSource {
  std::string path_without;
  std::string path_with;
};

using AuditSource =
    std::variant<GaussianSource, BernoulliSource, DpSgdSource, FileSource>;

struct AuditConfig {
  int trials = 500;
  DvConfig dv;
  PrivacyGuarantee claimed = Rdp{2.0, 1.0};
  double beta = 0.05;
  double delta_ci = 0.05;
  AuditSource source = GaussianSource{};
  std::optional<CriticClassSpec> class_spec;
  std::uint64_t master_seed = 1;
};

// Trains the estimator in both orderings (shared derived seed, so swapping
// the inputs swaps the direction values but leaves the max unchanged) and
// takes the max.
struct RdpEstimate {
  double eps_hat = 0.0;
  std::array<double, 2> per_direction{0.0, 0.0};  // scaled D-hat per ordering
  int direction_of_max = 0;  // 0: D(O || O'), 1: D(O' || O)
  DvEstimate forward;   // trained on (O, O')
  DvEstimate backward;  // trained on (O', O)
};

RdpEstimate estimate_rdp(const SampleSet& observations,
                         const SampleSet& observations_prime,
                         const DvConfig& dv_config);

// T independent with/without-canary training runs; O holds the canary-absent
// canary losses, O' the canary-present ones, in trial order.
std::pair<SampleSet, SampleSet> collect_observations(const SyntheticTask& task,
                                                     const DpSgdConfig& dp,
                                                     int trials,
                                                     std::uint64_t master_seed);

struct AuditReport {
  double alpha = 0.0;
  double eps_hat = 0.0;
  std::array<double, 2> per_direction{0.0, 0.0};
  int direction_of_max = 0;
  double markov_lcb = 0.0;
  std::optional<double> dv_lcb;     // divergence scale (alpha * LCB)
  std::optional<double> dv_radius;  // variational scale
  AuditDecision decision;
  bool estimate_exceeds_claim = false;
  PrivacyGuarantee claimed = Rdp{2.0, 1.0};
  double claimed_eps_alpha = 0.0;  // claim converted to the audit's order
  double violation_eps_delta = 0.0;   // the delta used below
  double violation_eps_markov = 0.0;  // violation_epsilon at markov_lcb
  std::optional<double> violation_eps_dv;
  // Provenance
  AuditConfig config;
  std::string source_description;
  std::array<std::string, 2> source_digests{"", ""};
  std::array<std::size_t, 2> sample_counts{0, 0};
  std::uint64_t dv_seed = 0;
};

// Full Algorithm-3 style pipeline: collect or ingest observations, estimate
// in both directions, attach Markov (and optional covering-number) lower
// bounds, test the claimed guarantee, and assemble the report.
AuditReport run_audit(const AuditConfig& config);

// Machine-readable report with stable field names; byte-identical across
// replays of the same resolved configuration.
std::string report_to_json(const AuditReport& report);

// Loss-observation files: one real per line, or a delimited header row with
// a `loss` column (optional `trial` column); `#` comments ignored.
SampleSet read_loss_file(const std::string& path);
std::pair<SampleSet, SampleSet> ingest_losses(const std::string& path_without,
                                              const std::string& path_with);
void write_loss_file(const std::string& path, const SampleSet& samples);

// FNV-1a digest of a file's bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

// Write-temp-then-rename text output.
void write_text_atomic(const std::string& path, const std::string& content);

// Converts a claimed guarantee to the audit order's (alpha, eps_alpha):
// RDP claims must already be at the audit's alpha; GDP converts directly;
// approximate DP goes through GDP. Throws std::invalid_argument when the
// claim cannot be brought to the audit's order.
double claim_to_eps_alpha(const PrivacyGuarantee& claimed, Order order);

}  // namespace rdpaudit

#endif  // RDPAUDIT_AUDIT_HPP_
