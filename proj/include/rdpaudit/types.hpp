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

#ifndef RDPAUDIT_TYPES_HPP_
#define RDPAUDIT_TYPES_HPP_

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdpaudit {

// Divergence order alpha. Valid for alpha > 0, alpha != 1; the classical
// Renyi divergence needs alpha > 1 (is_standard), the variational objective
// also accepts alpha in (0,1), which callers may use at their own risk.
class Order {
 public:
  explicit Order(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
      throw std::domain_error("Order: alpha must be finite, > 0 and != 1, got " +
                              std::to_string(alpha));
    }
  }

  double alpha() const { return alpha_; }
  bool is_standard() const { return alpha_ > 1.0; }

 private:
  double alpha_;
};

// Ordered scalar observations drawn from one mechanism-output distribution
// (e.g. canary losses across trials).
struct SampleSet {
  std::vector<double> values;
  std::string label;

  std::size_t size() const { return values.size(); }
};

// Throws std::invalid_argument if the set is empty or holds non-finite values.
void validate(const SampleSet& s);

// Evaluable log density ratio  L(x) = log(p(x) / q(x)).
using LogRatioOracle = std::function<double(double)>;

// Evaluable probability density.
using Density = std::function<double(double)>;

// Raised when a requested quantity has no solution in the supported range
// (planner targets, conversion brackets, packing construction).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when DV training diverges; carries the epoch at which it happened.
class training_error : public std::runtime_error {
 public:
  training_error(const std::string& what, int epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace rdpaudit

#endif  // RDPAUDIT_TYPES_HPP_
