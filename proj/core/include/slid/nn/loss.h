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

#ifndef SLID_NN_LOSS_H_
#define SLID_NN_LOSS_H_

#include <span>

#include "slid/nn/tensor.h"

namespace slid::nn {

inline constexpr double kLogFloor = 1e-10;

struct LossAndGrad {
  double loss = 0.0;
  Tensor grad;  // w.r.t. the probabilities
};

// -w[target] * log(probs[target] + kLogFloor). Throws Error(kInvalidArgument)
// for an out-of-range target or mismatched weights.
double WeightedCrossEntropy(std::span<const double> probs, int target,
                            std::span<const double> class_weights);

// Loss plus its gradient w.r.t. `probs` (rank-1 tensor).
LossAndGrad WeightedCrossEntropyWithGrad(const Tensor& probs, int target,
                                         std::span<const double> class_weights);

}  // namespace slid::nn

#endif  // SLID_NN_LOSS_H_
