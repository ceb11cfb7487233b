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

MaxPool2D::MaxPool2D(std::string name, int pool_time, int pool_freq)
    : name_(std::move(name)), pt_(pool_time), pf_(pool_freq) {
  if (pt_ < 1 || pf_ < 1) {
    throw Error(ErrorCode::kConfig, name_ + ": pool sizes must be >= 1");
  }
}

Tensor MaxPool2D::Forward(const Tensor& x, const RunMode&) {
  if (x.rank() != 3) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": expected [CxTxF] input, got " + ShapeString(x.shape()));
  }
  const std::size_t c = x.dim(0), t = x.dim(1), f = x.dim(2);
  const std::size_t ot = t / pt_, of = f / pf_;
  if (ot == 0 || of == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": input " + ShapeString(x.shape()) +
                    " is smaller than the pooling window");
  }
  Tensor y({c, ot, of});
  argmax_.assign(y.size(), 0);
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t i = 0; i < ot; ++i) {
      for (std::size_t j = 0; j < of; ++j) {
        std::size_t best = (ch * t + i * pt_) * f + j * pf_;
        for (int a = 0; a < pt_; ++a) {
          for (int b = 0; b < pf_; ++b) {
            const std::size_t idx = (ch * t + i * pt_ + a) * f + j * pf_ + b;
            if (x[idx] > x[best]) best = idx;
          }
        }
        const std::size_t out = (ch * ot + i) * of + j;
        y[out] = x[best];
        argmax_[out] = best;
      }
    }
  }
  input_shape_ = x.shape();
  cached_ = true;
  return y;
}

Tensor MaxPool2D::Backward(const Tensor& dy) {
  if (!cached_) throw Error(ErrorCode::kState, name_ + ": backward before forward");
  if (dy.size() != argmax_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": upstream gradient " + ShapeString(dy.shape()) +
                    " does not match pooled output");
  }
  Tensor dx(input_shape_);
  for (std::size_t i = 0; i < argmax_.size(); ++i) dx[argmax_[i]] += dy[i];
  return dx;
}

}  // namespace slid::nn
