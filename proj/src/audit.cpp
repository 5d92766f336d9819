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

#include "rdpaudit/audit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rdpaudit/math_util.hpp"
#include "rdpaudit/rng.hpp"

namespace rdpaudit {

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kDvSeedTag = 0x64766573;      // "dves"
constexpr std::uint64_t kTrialSeedTag = 0x747269616c;  // "trial"
constexpr double kDefaultViolationDelta = 1e-5;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  // Comma, tab, or whitespace delimited.
  char delim = line.find(',') != std::string::npos   ? ','
               : line.find('\t') != std::string::npos ? '\t'
                                                      : ' ';
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  if (delim == ' ') {
    while (ss >> field) fields.push_back(field);
  } else {
    while (std::getline(ss, field, delim)) {
      field = trim(field);
      if (!field.empty() || delim == ',') fields.push_back(field);
    }
  }
  return fields;
}

bool looks_like_header(const std::string& line) {
  return std::any_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isalpha(c) != 0; });
}

double parse_value(const std::string& token, const std::string& path,
                   int line_number) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != token.size() || token.empty()) {
    throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                ": cannot parse '" + token + "' as a number");
  }
  if (!std::isfinite(v)) {
    throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                ": non-finite loss value rejected");
  }
  return v;
}

ordered_json guarantee_to_json(const PrivacyGuarantee& g) {
  ordered_json j;
  if (const auto* r = std::get_if<Rdp>(&g)) {
    j["kind"] = "rdp";
    j["alpha"] = r->alpha;
    j["eps_alpha"] = r->eps_alpha;
  } else if (const auto* d = std::get_if<ApproxDp>(&g)) {
    j["kind"] = "dp";
    j["eps"] = d->eps;
    j["delta"] = d->delta;
  } else {
    j["kind"] = "gdp";
    j["mu"] = std::get<Gdp>(g).mu;
  }
  return j;
}

ordered_json source_to_json(const AuditSource& source) {
  ordered_json j;
  if (const auto* g = std::get_if<GaussianSource>(&source)) {
    j["kind"] = "gaussian";
    j["value_without"] = g->spec.value_without;
    j["value_with"] = g->spec.value_with;
    j["sigma"] = g->spec.sigma;
  } else if (const auto* b = std::get_if<BernoulliSource>(&source)) {
    j["kind"] = "bernoulli";
    j["tpr"] = b->tpr;
    j["fpr"] = b->fpr;
  } else if (const auto* d = std::get_if<DpSgdSource>(&source)) {
    j["kind"] = "dpsgd";
    j["dataset_size"] = d->dataset_size;
    j["iterations"] = d->dp.iterations;
    j["clip"] = d->dp.clip;
    j["noise_multiplier"] = d->dp.noise_multiplier;
    j["sample_prob"] = d->dp.sample_prob;
    j["learning_rate"] = d->dp.learning_rate;
    j["paired_noise"] = d->dp.paired_noise;
    j["warm_start_epochs"] = d->warm_start_epochs;
    j["warm_start_lr"] = d->warm_start_lr;
  } else {
    const auto& f = std::get<FileSource>(source);
    j["kind"] = "files";
    j["path_without"] = f.path_without;
    j["path_with"] = f.path_with;
  }
  return j;
}

ordered_json dv_config_to_json(const DvConfig& dv) {
  ordered_json j;
  j["alpha"] = dv.order.alpha();
  j["batch_size"] = dv.batch_size;
  j["ema_rate"] = dv.ema_rate;
  j["step_size"] = dv.step_size;
  j["epochs"] = dv.epochs;
  j["train_fraction"] = dv.train_fraction;
  j["seed"] = dv.seed;
  j["layer_sizes"] = dv.layer_sizes;
  j["standardize"] = dv.standardize;
  if (dv.clamp_bound) j["clamp_bound"] = *dv.clamp_bound;
  else j["clamp_bound"] = nullptr;
  if (dv.param_radius) j["param_radius"] = *dv.param_radius;
  else j["param_radius"] = nullptr;
  return j;
}

}  // namespace

double claim_to_eps_alpha(const PrivacyGuarantee& claimed, Order order) {
  const double alpha = order.alpha();
  if (const auto* r = std::get_if<Rdp>(&claimed)) {
    if (std::abs(r->alpha - alpha) > 1e-12) {
      throw std::invalid_argument(
          "claimed RDP order " + std::to_string(r->alpha) +
          " does not match the audit order " + std::to_string(alpha) +
          "; no general RDP order conversion is available");
    }
    return r->eps_alpha;
  }
  if (const auto* g = std::get_if<Gdp>(&claimed)) {
    return gdp_to_rdp(*g, alpha).eps_alpha;
  }
  const auto& dp = std::get<ApproxDp>(claimed);
  const Gdp gdp = approx_dp_to_gdp(dp.eps, dp.delta);
  return gdp_to_rdp(gdp, alpha).eps_alpha;
}

std::pair<SampleSet, SampleSet> collect_observations(const SyntheticTask& task,
                                                     const DpSgdConfig& dp,
                                                     int trials,
                                                     std::uint64_t master_seed) {
  if (trials < 1) {
    throw std::invalid_argument("collect_observations: trials >= 1 required");
  }
  SampleSet o{{}, "canary-absent"};
  SampleSet o_prime{{}, "canary-present"};
  o.values.reserve(static_cast<std::size_t>(trials));
  o_prime.values.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    DpSgdConfig trial_cfg = dp;
    trial_cfg.seed = derive_seed(master_seed,
                                 {kTrialSeedTag, static_cast<std::uint64_t>(t)});
    try {
      o.values.push_back(dp_sgd_train(task, trial_cfg, false).canary_loss);
      o_prime.values.push_back(dp_sgd_train(task, trial_cfg, true).canary_loss);
    } catch (const std::exception& e) {
      throw std::runtime_error("collect_observations: trial " +
                               std::to_string(t) + " failed: " + e.what());
    }
  }
  return {std::move(o), std::move(o_prime)};
}

RdpEstimate estimate_rdp(const SampleSet& observations,
                         const SampleSet& observations_prime,
                         const DvConfig& dv_config) {
  // Both orderings share one derived training seed, which keeps the max
  // invariant under swapping the two inputs.
  DvConfig cfg = dv_config;
  cfg.seed = derive_seed(dv_config.seed, {kDvSeedTag});
  RdpEstimate est;
  try {
    est.forward = train(observations, observations_prime, cfg);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("estimate_rdp: direction D(O||O') "
                                         "failed: ") + e.what());
  }
  try {
    est.backward = train(observations_prime, observations, cfg);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("estimate_rdp: direction D(O'||O) "
                                         "failed: ") + e.what());
  }
  est.per_direction = {est.forward.d_hat, est.backward.d_hat};
  est.direction_of_max = est.per_direction[1] > est.per_direction[0] ? 1 : 0;
  est.eps_hat = est.per_direction[static_cast<std::size_t>(est.direction_of_max)];
  return est;
}

namespace {

// Validation-split size of a side under the estimator's first-k convention.
std::size_t validation_count(std::size_t n, double fraction) {
  auto k = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n);
  const std::size_t v = n - k;
  return v == 0 ? k : v;
}

}  // namespace

AuditReport run_audit(const AuditConfig& config) {
  if (config.trials < 1) {
    throw std::invalid_argument("run_audit: trials >= 1 required");
  }
  const Order order = config.dv.order;

  // Resolve the claim first so misconfigured audits fail before the
  // expensive collection phase.
  const double claimed_eps_alpha = claim_to_eps_alpha(config.claimed, order);

  AuditReport report;
  report.config = config;
  report.alpha = order.alpha();
  report.claimed = config.claimed;
  report.claimed_eps_alpha = claimed_eps_alpha;

  SampleSet o, o_prime;
  if (const auto* g = std::get_if<GaussianSource>(&config.source)) {
    std::tie(o, o_prime) =
        gaussian_pair_samples(g->spec, config.trials, config.master_seed);
    report.source_description = "simulated scalar gaussian mechanism";
  } else if (const auto* b = std::get_if<BernoulliSource>(&config.source)) {
    // O (canary-absent) is the FPR side, O' (canary-present) the TPR side.
    auto [tpr_side, fpr_side] = bernoulli_channel_samples(
        b->tpr, b->fpr, config.trials, config.master_seed);
    o = std::move(fpr_side);
    o_prime = std::move(tpr_side);
    report.source_description = "simulated bernoulli attack channel";
  } else if (const auto* d = std::get_if<DpSgdSource>(&config.source)) {
    SyntheticTask task = make_blob_task(d->dataset_size, config.master_seed);
    DpSgdConfig dp = d->dp;
    if (d->warm_start_epochs > 0) {
      dp.init_params = warm_start_params(task, d->warm_start_epochs,
                                         d->warm_start_lr, config.master_seed);
      task = second_half(task);
    }
    std::tie(o, o_prime) =
        collect_observations(task, dp, config.trials, config.master_seed);
    report.source_description = "miniature dp-sgd on synthetic blobs";
  } else {
    const auto& f = std::get<FileSource>(config.source);
    std::tie(o, o_prime) = ingest_losses(f.path_without, f.path_with);
    report.source_description = "ingested loss files";
    report.source_digests = {file_digest(f.path_without),
                             file_digest(f.path_with)};
  }
  report.sample_counts = {o.size(), o_prime.size()};

  DvConfig dv = config.dv;
  dv.seed = derive_seed(config.master_seed, {kDvSeedTag, dv.seed});
  report.dv_seed = dv.seed;
  if (config.class_spec) {
    // Certified mode: the trained critic must actually live in the class the
    // radius is computed for.
    dv.clamp_bound = config.class_spec->M;
    dv.param_radius = config.class_spec->K;
  }

  const RdpEstimate est = estimate_rdp(o, o_prime, dv);
  report.eps_hat = est.eps_hat;
  report.per_direction = est.per_direction;
  report.direction_of_max = est.direction_of_max;

  report.markov_lcb =
      markov_lower_bound(est.eps_hat, order, config.beta).lower;

  if (config.class_spec) {
    const auto param_count = est.forward.critic.param_count();
    if (static_cast<std::size_t>(config.class_spec->d) != param_count) {
      throw std::invalid_argument(
          "run_audit: class spec d = " + std::to_string(config.class_spec->d) +
          " does not match the critic parameter count " +
          std::to_string(param_count));
    }
    const std::size_t n_ci =
        std::min(validation_count(o.size(), dv.train_fraction),
                 validation_count(o_prime.size(), dv.train_fraction));
    const double radius =
        dv_ci_radius(static_cast<std::int64_t>(n_ci), *config.class_spec,
                     order, config.delta_ci, 0.0);
    const double r_hat = est.eps_hat / order.alpha();
    const ConfidenceBound cert = dv_certificate(r_hat, radius, config.delta_ci);
    report.dv_radius = radius;
    report.dv_lcb = order.alpha() * cert.lower;
  }

  report.decision =
      hypothesis_test(est.eps_hat, claimed_eps_alpha, order, config.beta);
  report.estimate_exceeds_claim = est.eps_hat > claimed_eps_alpha;

  report.violation_eps_delta =
      std::holds_alternative<ApproxDp>(config.claimed)
          ? std::get<ApproxDp>(config.claimed).delta
          : kDefaultViolationDelta;
  report.violation_eps_markov =
      violation_epsilon(report.markov_lcb, order, report.violation_eps_delta);
  if (report.dv_lcb) {
    report.violation_eps_dv =
        violation_epsilon(*report.dv_lcb, order, report.violation_eps_delta);
  }
  return report;
}

std::string report_to_json(const AuditReport& r) {
  ordered_json j;
  j["format"] = "rdpaudit-report-v1";
  j["alpha"] = r.alpha;
  j["eps_hat"] = r.eps_hat;
  j["per_direction"] = {r.per_direction[0], r.per_direction[1]};
  j["direction_of_max"] =
      r.direction_of_max == 0 ? "D(O||O')" : "D(O'||O)";
  j["markov_lcb"] = r.markov_lcb;
  if (r.dv_lcb) {
    j["dv_lcb"] = *r.dv_lcb;
    j["dv_radius_variational"] = *r.dv_radius;
  } else {
    j["dv_lcb"] = nullptr;
    j["dv_radius_variational"] = nullptr;
  }
  j["decision"]["reject_null"] = r.decision.reject_null;
  j["decision"]["epsilon_null"] = r.decision.epsilon_null;
  j["decision"]["sup_rejectable_epsilon"] = r.decision.sup_rejectable_epsilon;
  j["decision"]["beta"] = r.decision.beta;
  j["estimate_exceeds_claim"] = r.estimate_exceeds_claim;
  j["claimed"] = guarantee_to_json(r.claimed);
  j["conversions"]["claimed_eps_alpha"] = r.claimed_eps_alpha;
  j["conversions"]["violation_eps_delta"] = r.violation_eps_delta;
  j["conversions"]["violation_eps_from_markov_lcb"] = r.violation_eps_markov;
  if (r.violation_eps_dv) {
    j["conversions"]["violation_eps_from_dv_lcb"] = *r.violation_eps_dv;
  } else {
    j["conversions"]["violation_eps_from_dv_lcb"] = nullptr;
  }

  ordered_json prov;
  prov["master_seed"] = r.config.master_seed;
  prov["dv_seed"] = r.dv_seed;
  prov["trials"] = r.config.trials;
  prov["beta"] = r.config.beta;
  prov["delta_ci"] = r.config.delta_ci;
  prov["source"] = source_to_json(r.config.source);
  prov["source_description"] = r.source_description;
  if (!r.source_digests[0].empty()) {
    prov["source_digests"] = {r.source_digests[0], r.source_digests[1]};
  }
  prov["sample_counts"] = {r.sample_counts[0], r.sample_counts[1]};
  prov["dv_config"] = dv_config_to_json(r.config.dv);
  if (r.config.class_spec) {
    prov["class_spec"] = {{"d", r.config.class_spec->d},
                          {"K", r.config.class_spec->K},
                          {"M", r.config.class_spec->M},
                          {"L", r.config.class_spec->lipschitz}};
  } else {
    prov["class_spec"] = nullptr;
  }
  prov["config_hash"] = [&] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(prov.dump())));
    return std::string(buf);
  }();
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

SampleSet read_loss_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("read_loss_file: cannot open " + path);
  }
  SampleSet out{{}, path};
  std::string line;
  int line_number = 0;
  int loss_column = -1;
  bool saw_header_or_data = false;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!saw_header_or_data) {
      saw_header_or_data = true;
      if (looks_like_header(t)) {
        const auto fields = split_fields(t);
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == "loss") loss_column = static_cast<int>(i);
        }
        if (loss_column < 0) {
          throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                      ": header has no 'loss' column");
        }
        continue;
      }
    }
    const auto fields = split_fields(t);
    if (loss_column >= 0) {
      if (static_cast<std::size_t>(loss_column) >= fields.size()) {
        throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                    ": missing 'loss' column value");
      }
      out.values.push_back(parse_value(fields[static_cast<std::size_t>(loss_column)],
                                       path, line_number));
    } else {
      if (fields.size() != 1) {
        throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                    ": expected a single value per line");
      }
      out.values.push_back(parse_value(fields[0], path, line_number));
    }
  }
  if (out.values.empty()) {
    throw std::invalid_argument("read_loss_file: no observations in " + path);
  }
  return out;
}

std::pair<SampleSet, SampleSet> ingest_losses(const std::string& path_without,
                                              const std::string& path_with) {
  return {read_loss_file(path_without), read_loss_file(path_with)};
}

void write_loss_file(const std::string& path, const SampleSet& samples) {
  std::ostringstream out;
  out << "# " << samples.label << "\n";
  out << "# " << samples.values.size() << " observations, one per line\n";
  char buf[64];
  for (double v : samples.values) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << "\n";
  }
  write_text_atomic(path, out.str());
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("file_digest: cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(ss.str())));
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("write_text_atomic: cannot open " + tmp);
    }
    out << content;
    if (!out) {
      throw std::runtime_error("write_text_atomic: short write to " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rdpaudit
