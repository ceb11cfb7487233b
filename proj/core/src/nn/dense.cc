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

#include "eigen_map.h"
#include "slid/error.h"
#include "slid/nn/layers.h"

namespace slid::nn {

using internal::AsMatrix;

Dense::Dense(std::string name, int in_features, int out_features,
             std::mt19937_64& rng)
    : name_(std::move(name)), in_(in_features), out_(out_features) {
  if (in_ <= 0 || out_ <= 0) {
    throw Error(ErrorCode::kConfig, name_ + ": sizes must be positive");
  }
  weight_ = Parameter(name_ + "/weight",
                      Tensor({static_cast<std::size_t>(out_),
                              static_cast<std::size_t>(in_)}));
  GlorotUniform(weight_.value, in_, out_, rng);
  bias_ = Parameter(name_ + "/bias", Tensor({static_cast<std::size_t>(out_)}));
}

void Dense::CollectParameters(ParameterList& out) {
  out.push_back(&weight_);
  out.push_back(&bias_);
}

Tensor Dense::Forward(const Tensor& x, const RunMode&) {
  const bool vector = x.rank() == 1;
  if ((x.rank() != 1 && x.rank() != 2) ||
      x.shape().back() != static_cast<std::size_t>(in_)) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": expected input [..x" + std::to_string(in_) +
                    "], got " + ShapeString(x.shape()));
  }
  const std::size_t rows = vector ? 1 : x.dim(0);
  Tensor y = vector ? Tensor({static_cast<std::size_t>(out_)})
                    : Tensor({rows, static_cast<std::size_t>(out_)});
  auto ym = AsMatrix(y, rows, out_);
  ym.noalias() = AsMatrix(x, rows, in_) * AsMatrix(weight_.value, out_, in_).transpose();
  ym.rowwise() += AsMatrix(bias_.value, 1, out_).row(0);
  input_ = x;
  cached_ = true;
  return y;
}

Tensor Dense::Backward(const Tensor& dy) {
  if (!cached_) throw Error(ErrorCode::kState, name_ + ": backward before forward");
  const std::size_t rows = input_.rank() == 1 ? 1 : input_.dim(0);
  if (dy.size() != rows * static_cast<std::size_t>(out_)) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": upstream gradient " + ShapeString(dy.shape()) +
                    " does not match output");
  }
  const auto g = AsMatrix(dy, rows, out_);
  AsMatrix(weight_.grad, out_, in_).noalias() +=
      g.transpose() * AsMatrix(input_, rows, in_);
  AsMatrix(bias_.grad, 1, out_).row(0) += g.colwise().sum();
  Tensor dx(input_.shape());
  AsMatrix(dx, rows, in_).noalias() = g * AsMatrix(weight_.value, out_, in_);
  return dx;
}

}  // namespace slid::nn
