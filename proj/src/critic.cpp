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

#include "rdpaudit/critic.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rdpaudit/rng.hpp"

namespace rdpaudit {

using nlohmann::json;

namespace {

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) {
    throw std::invalid_argument("CriticNetwork: need at least two layers");
  }
  for (int s : sizes) {
    if (s <= 0) {
      throw std::invalid_argument("CriticNetwork: layer sizes must be positive");
    }
  }
  if (sizes.back() != 1) {
    throw std::invalid_argument("CriticNetwork: output dimension must be 1");
  }
}

inline double relu(double z) { return z > 0.0 ? z : 0.0; }
// The rectifier derivative at exactly 0 is taken to be 0.
inline double relu_deriv(double z) { return z > 0.0 ? 1.0 : 0.0; }

}  // namespace

CriticNetwork CriticNetwork::init(std::uint64_t seed,
                                  const std::vector<int>& layer_sizes,
                                  std::optional<double> clamp_bound,
                                  std::optional<double> param_radius) {
  check_sizes(layer_sizes);
  if (clamp_bound && !(*clamp_bound > 0.0)) {
    throw std::invalid_argument("CriticNetwork: clamp_bound must be positive");
  }
  if (param_radius && !(*param_radius > 0.0)) {
    throw std::invalid_argument("CriticNetwork: param_radius must be positive");
  }
  CriticNetwork net;
  net.sizes_ = layer_sizes;
  net.clamp_bound_ = clamp_bound;
  net.param_radius_ = param_radius;
  net.seed_ = seed;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = rng.uniform(-a, a);
      }
    }
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  net.project();
  return net;
}

double CriticNetwork::forward(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != sizes_.front()) {
    throw std::invalid_argument("CriticNetwork::forward: input dimension " +
                                std::to_string(x.size()) + " != " +
                                std::to_string(sizes_.front()));
  }
  Eigen::VectorXd h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    h[i] = (x[i] - input_shift_) / input_scale_;
  }
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::VectorXd z = weights_[l] * h + biases_[l];
    if (l + 1 < weights_.size()) {
      h = z.unaryExpr([](double v) { return relu(v); });
    } else {
      h = z;
    }
  }
  double out = h[0];
  if (clamp_bound_) {
    out = *clamp_bound_ * std::tanh(out / *clamp_bound_);
  }
  return out;
}

double CriticNetwork::forward_scalar(double x) const {
  return forward(std::span<const double>(&x, 1));
}

std::vector<double> CriticNetwork::forward_batch(
    std::span<const double> xs) const {
  BatchForward bf(*this, xs);
  return bf.outputs();
}

std::size_t CriticNetwork::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size()) +
         static_cast<std::size_t>(biases_[l].size());
  }
  return n;
}

double CriticNetwork::param_norm() const {
  double sq = 0.0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    sq += weights_[l].squaredNorm() + biases_[l].squaredNorm();
  }
  return std::sqrt(sq);
}

void CriticNetwork::project() {
  if (!param_radius_) return;
  const double norm = param_norm();
  if (norm > *param_radius_ && norm > 0.0) {
    const double scale = *param_radius_ / norm;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      weights_[l] *= scale;
      biases_[l] *= scale;
    }
  }
}

void CriticNetwork::ascend(const ParamGradient& grad, double step) {
  if (grad.weights.size() != weights_.size()) {
    throw std::invalid_argument("ascend: gradient layer count mismatch");
  }
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (grad.weights[l].rows() != weights_[l].rows() ||
        grad.weights[l].cols() != weights_[l].cols()) {
      throw std::invalid_argument("ascend: gradient shape mismatch at layer " +
                                  std::to_string(l));
    }
    weights_[l] += step * grad.weights[l];
    biases_[l] += step * grad.biases[l];
  }
  project();
}

void CriticNetwork::set_input_transform(double shift, double scale) {
  if (!(scale > 0.0) || !std::isfinite(shift) || !std::isfinite(scale)) {
    throw std::invalid_argument("set_input_transform: need finite shift and "
                                "positive scale");
  }
  input_shift_ = shift;
  input_scale_ = scale;
}

bool CriticNetwork::same_parameters(const CriticNetwork& other) const {
  if (sizes_ != other.sizes_) return false;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (weights_[l] != other.weights_[l]) return false;
    if (biases_[l] != other.biases_[l]) return false;
  }
  return input_shift_ == other.input_shift_ &&
         input_scale_ == other.input_scale_;
}

ParamGradient ParamGradient::zeros_like(const CriticNetwork& net) {
  ParamGradient g;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(net.weight(l).rows(),
                                              net.weight(l).cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(net.bias(l).size()));
  }
  return g;
}

double ParamGradient::norm() const {
  double sq = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    sq += weights[l].squaredNorm() + biases[l].squaredNorm();
  }
  return std::sqrt(sq);
}

BatchForward::BatchForward(const CriticNetwork& net, std::span<const double> xs)
    : net_(net) {
  if (net.layer_sizes().front() != 1) {
    throw std::invalid_argument("BatchForward: batched evaluation requires a "
                                "scalar-input network");
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd h(1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(0, i) = (xs[i] - net.input_shift()) / net.input_scale();
  }
  activations_.push_back(h);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    Eigen::MatrixXd z = net.weight(l) * activations_.back();
    z.colwise() += net.bias(l);
    preactivations_.push_back(z);
    if (l + 1 < net.num_layers()) {
      activations_.push_back(
          z.unaryExpr([](double v) { return relu(v); }));
    } else {
      activations_.push_back(z);
    }
  }
  outputs_.resize(static_cast<std::size_t>(n));
  const Eigen::MatrixXd& raw = activations_.back();
  for (Eigen::Index i = 0; i < n; ++i) {
    double out = raw(0, i);
    if (net.clamp_bound()) {
      out = *net.clamp_bound() * std::tanh(out / *net.clamp_bound());
    }
    outputs_[static_cast<std::size_t>(i)] = out;
  }
}

ParamGradient BatchForward::weighted_gradient(
    std::span<const double> weights) const {
  const auto n = static_cast<Eigen::Index>(outputs_.size());
  if (static_cast<Eigen::Index>(weights.size()) != n) {
    throw std::invalid_argument("weighted_gradient: weights length " +
                                std::to_string(weights.size()) +
                                " != batch size " + std::to_string(n));
  }
  const std::size_t layers = net_.num_layers();
  ParamGradient grad = ParamGradient::zeros_like(net_);

  // Seed of the reverse pass: d/d(raw output) of sum_i w_i y_i. With the
  // tanh squash y = M tanh(r/M), dy/dr = 1 - (y/M)^2.
  Eigen::MatrixXd delta(1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double d = weights[static_cast<std::size_t>(i)];
    if (net_.clamp_bound()) {
      const double yn = outputs_[static_cast<std::size_t>(i)] /
                        *net_.clamp_bound();
      d *= 1.0 - yn * yn;
    }
    delta(0, i) = d;
  }

  for (std::size_t l = layers; l-- > 0;) {
    grad.weights[l] = delta * activations_[l].transpose();
    grad.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = net_.weight(l).transpose() * delta;
      delta = back.cwiseProduct(preactivations_[l - 1].unaryExpr(
          [](double v) { return relu_deriv(v); }));
    }
  }
  return grad;
}

ParamGradient weighted_param_gradient(const CriticNetwork& net,
                                      std::span<const double> inputs,
                                      std::span<const double> weights) {
  if (inputs.size() != weights.size()) {
    throw std::invalid_argument("weighted_param_gradient: inputs and weights "
                                "must have equal length");
  }
  BatchForward bf(net, inputs);
  return bf.weighted_gradient(weights);
}

CriticNetwork apply_update(const CriticNetwork& net, const ParamGradient& grad,
                           double step) {
  CriticNetwork out = net;
  out.ascend(grad, step);
  return out;
}

std::string critic_to_json(const CriticNetwork& net) {
  nlohmann::ordered_json j;
  j["format"] = "rdpaudit-critic-v1";
  j["layer_sizes"] = net.layer_sizes();
  j["seed"] = net.seed();
  if (net.clamp_bound()) {
    j["clamp_bound"] = *net.clamp_bound();
  } else {
    j["clamp_bound"] = nullptr;
  }
  if (net.param_radius()) {
    j["param_radius"] = *net.param_radius();
  } else {
    j["param_radius"] = nullptr;
  }
  j["input_shift"] = net.input_shift();
  j["input_scale"] = net.input_scale();
  auto weights = nlohmann::ordered_json::array();
  auto biases = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    std::vector<double> w;  // row-major
    const Eigen::MatrixXd& m = net.weight(l);
    w.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        w.push_back(m(r, c));
      }
    }
    weights.push_back(w);
    const Eigen::VectorXd& b = net.bias(l);
    biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  j["weights"] = weights;
  j["biases"] = biases;
  return j.dump(2) + "\n";
}

CriticNetwork critic_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "rdpaudit-critic-v1") {
    throw std::invalid_argument("critic_from_json: unknown format tag");
  }
  const auto sizes = j.at("layer_sizes").get<std::vector<int>>();
  std::optional<double> clamp, radius;
  if (!j.at("clamp_bound").is_null()) clamp = j["clamp_bound"].get<double>();
  if (!j.at("param_radius").is_null()) radius = j["param_radius"].get<double>();
  CriticNetwork net = CriticNetwork::init(j.value("seed", std::uint64_t{0}),
                                          sizes, clamp, radius);
  net.set_input_transform(j.value("input_shift", 0.0),
                          j.value("input_scale", 1.0));
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() != net.num_layers() || biases.size() != net.num_layers()) {
    throw std::invalid_argument("critic_from_json: layer count mismatch");
  }
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    Eigen::MatrixXd& m = net.mutable_weight(l);
    const auto w = weights[l].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != m.size()) {
      throw std::invalid_argument("critic_from_json: weight size mismatch");
    }
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = w[k++];
      }
    }
    Eigen::VectorXd& b = net.mutable_bias(l);
    const auto bv = biases[l].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(bv.size()) != b.size()) {
      throw std::invalid_argument("critic_from_json: bias size mismatch");
    }
    for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = bv[static_cast<std::size_t>(r)];
  }
  return net;
}

void save_critic(const CriticNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_critic: cannot open " + path);
  }
  out << critic_to_json(net);
}

CriticNetwork load_critic(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_critic: cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return critic_from_json(ss.str());
}

}  // namespace rdpaudit
