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

#include "slid/error.h"
#include "slid/nn/layers.h"

namespace slid::nn {

Dropout::Dropout(double rate) : rate_(rate) {
  if (!(rate >= 0 && rate < 1)) {
    throw Error(ErrorCode::kConfig, "dropout: rate must be in [0, 1)");
  }
}

Tensor Dropout::Forward(const Tensor& x, const RunMode& mode) {
  cached_ = true;
  mask_.clear();
  if (!mode.train || rate_ == 0.0) return x;
  if (mode.rng == nullptr) {
    throw Error(ErrorCode::kState, "dropout: training mode requires an rng");
  }
  std::bernoulli_distribution keep(1.0 - rate_);
  const double scale = 1.0 / (1.0 - rate_);
  mask_.resize(x.size());
  Tensor y = x;
  for (std::size_t i = 0; i < y.size(); ++i) {
    mask_[i] = keep(*mode.rng) ? scale : 0.0;
    y[i] *= mask_[i];
  }
  return y;
}

Tensor Dropout::Backward(const Tensor& dy) {
  if (!cached_) throw Error(ErrorCode::kState, "dropout: backward before forward");
  if (mask_.empty()) return dy;
  if (dy.size() != mask_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "dropout: upstream gradient " + ShapeString(dy.shape()) +
                    " does not match the cached mask");
  }
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= mask_[i];
  return dx;
}

}  // namespace slid::nn
