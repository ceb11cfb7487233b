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

#include "slid/nn/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "slid/error.h"

namespace slid::nn {
namespace {

std::size_t Product(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

}  // namespace

std::string ShapeString(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), values_(Product(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (Product(shape_) != values_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "tensor shape " + ShapeString(shape_) + " does not hold " +
                    std::to_string(values_.size()) + " values");
  }
}

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols,
                      std::initializer_list<double> values) {
  return Tensor({rows, cols}, std::vector<double>(values));
}

std::size_t Tensor::rows() const {
  if (shape_.size() == 1) return 1;
  if (shape_.size() != 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "rows() on rank-" + std::to_string(shape_.size()) + " tensor");
  }
  return shape_[0];
}

std::size_t Tensor::cols() const {
  return shape_.size() == 1 ? shape_[0] : shape_.at(1);
}

void Tensor::Fill(double v) { std::fill(values_.begin(), values_.end(), v); }

Tensor Tensor::Reshaped(Shape shape) const {
  return Tensor(std::move(shape), values_);
}

Tensor Tensor::GatherRows(std::span<const std::size_t> indices) const {
  const std::size_t c = cols();
  Tensor out({indices.size(), c});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(indices[i] * c),
                c, out.values_.begin() + static_cast<std::ptrdiff_t>(i * c));
  }
  return out;
}

bool Tensor::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void ZeroGrads(const ParameterList& params) {
  for (Parameter* p : params) p->grad.Fill(0.0);
}

void CheckShape(const std::string& layer, const Shape& expected,
                const Shape& actual) {
  if (expected != actual) {
    throw Error(ErrorCode::kShapeMismatch,
                layer + ": expected input " + ShapeString(expected) + ", got " +
                    ShapeString(actual));
  }
}

}  // namespace slid::nn
