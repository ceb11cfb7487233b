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

#include "slid/nn/loss.h"

#include <cmath>
#include <string>

#include "slid/error.h"

namespace slid::nn {
namespace {

void Check(std::size_t size, int target, std::size_t weights) {
  if (target < 0 || static_cast<std::size_t>(target) >= size) {
    throw Error(ErrorCode::kInvalidArgument,
                "cross-entropy target " + std::to_string(target) +
                    " outside [0, " + std::to_string(size) + ")");
  }
  if (weights != size) {
    throw Error(ErrorCode::kInvalidArgument,
                "cross-entropy: " + std::to_string(weights) +
                    " class weights for " + std::to_string(size) + " classes");
  }
}

}  // namespace

double WeightedCrossEntropy(std::span<const double> probs, int target,
                            std::span<const double> class_weights) {
  Check(probs.size(), target, class_weights.size());
  return -class_weights[target] * std::log(probs[target] + kLogFloor);
}

LossAndGrad WeightedCrossEntropyWithGrad(const Tensor& probs, int target,
                                         std::span<const double> class_weights) {
  LossAndGrad out;
  out.loss = WeightedCrossEntropy(probs.values(), target, class_weights);
  out.grad = Tensor(probs.shape());
  out.grad[target] = -class_weights[target] / (probs[target] + kLogFloor);
  return out;
}

}  // namespace slid::nn
