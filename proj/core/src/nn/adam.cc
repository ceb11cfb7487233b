// Copyright 2026 The SLID Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slid/nn/adam.h"

#include <cmath>

#include "slid/error.h"

namespace slid::nn {

void Adam::Step(const ParameterList& params) {
  if (state_.first_moment.empty()) {
    for (const Parameter* p : params) {
      state_.first_moment.emplace_back(p->value.shape());
      state_.second_moment.emplace_back(p->value.shape());
    }
  }
  if (state_.first_moment.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "adam: parameter list changed between steps");
  }
  ++state_.step;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state_.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state_.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    Tensor& m = state_.first_moment[i];
    Tensor& v = state_.second_moment[i];
    CheckShape("adam/" + p.name, m.shape(), p.value.shape());
    for (std::size_t k = 0; k < p.value.size(); ++k) {
      const double g = p.grad[k];
      m[k] = b1 * m[k] + (1.0 - b1) * g;
      v[k] = b2 * v[k] + (1.0 - b2) * g * g;
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      p.value[k] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace slid::nn
