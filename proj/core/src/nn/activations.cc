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

#include <algorithm>
#include <cmath>

#include "slid/error.h"
#include "slid/nn/layers.h"

namespace slid::nn {

Tensor ReLU::Forward(const Tensor& x, const RunMode&) {
  Tensor y = x;
  for (double& v : y.values()) v = v > 0 ? v : 0.0;
  input_ = x;
  cached_ = true;
  return y;
}

Tensor ReLU::Backward(const Tensor& dy) {
  if (!cached_) throw Error(ErrorCode::kState, "relu: backward before forward");
  CheckShape("relu", input_.shape(), dy.shape());
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!(input_[i] > 0)) dx[i] = 0.0;
  }
  return dx;
}

Tensor SoftmaxRows(const Tensor& logits) {
  Tensor out = logits;
  const std::size_t rows = logits.rank() == 1 ? 1 : logits.rows();
  const std::size_t cols = logits.rank() == 1 ? logits.size() : logits.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = out.data() + r * cols;
    const double m = *std::max_element(row, row + cols);
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      row[c] = std::exp(row[c] - m);
      sum += row[c];
    }
    for (std::size_t c = 0; c < cols; ++c) row[c] /= sum;
  }
  return out;
}

Tensor SoftmaxBackward(const Tensor& probs, const Tensor& dprobs) {
  CheckShape("softmax", probs.shape(), dprobs.shape());
  Tensor dx(probs.shape());
  const std::size_t rows = probs.rank() == 1 ? 1 : probs.rows();
  const std::size_t cols = probs.rank() == 1 ? probs.size() : probs.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* p = probs.data() + r * cols;
    const double* g = dprobs.data() + r * cols;
    double dot = 0.0;
    for (std::size_t c = 0; c < cols; ++c) dot += p[c] * g[c];
    for (std::size_t c = 0; c < cols; ++c) {
      dx[r * cols + c] = p[c] * (g[c] - dot);
    }
  }
  return dx;
}

Tensor Softmax::Forward(const Tensor& x, const RunMode&) {
  if (x.rank() != 1 && x.rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "softmax: expected rank 1 or 2, got " + ShapeString(x.shape()));
  }
  output_ = SoftmaxRows(x);
  cached_ = true;
  return output_;
}

Tensor Softmax::Backward(const Tensor& dy) {
  if (!cached_) throw Error(ErrorCode::kState, "softmax: backward before forward");
  return SoftmaxBackward(output_, dy);
}

}  // namespace slid::nn
