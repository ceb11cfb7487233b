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

#ifndef SLID_NN_ADAM_H_
#define SLID_NN_ADAM_H_

#include <cstdint>
#include <vector>

#include "slid/nn/tensor.h"

namespace slid::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  std::int64_t step = 0;
};

// Adam with bias correction. Moments are created lazily on the first step
// and must keep matching the parameter list afterwards.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void Step(const ParameterList& params);

  const AdamConfig& config() const { return config_; }
  const AdamState& state() const { return state_; }
  AdamState& state() { return state_; }

 private:
  AdamConfig config_;
  AdamState state_;
};

}  // namespace slid::nn

#endif  // SLID_NN_ADAM_H_
