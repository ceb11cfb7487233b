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

void GlorotUniform(Tensor& t, std::size_t fan_in, std::size_t fan_out,
                   std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : t.values()) v = dist(rng);
}

Conv2D::Conv2D(std::string name, int in_channels, int out_channels,
               int kernel_h, int kernel_w, std::mt19937_64& rng)
    : name_(std::move(name)),
      in_(in_channels),
      out_(out_channels),
      kh_(kernel_h),
      kw_(kernel_w) {
  if (in_ <= 0 || out_ <= 0 || kh_ <= 0 || kw_ <= 0 || kh_ % 2 == 0 ||
      kw_ % 2 == 0) {
    throw Error(ErrorCode::kConfig,
                name_ + ": channels must be positive and kernels odd");
  }
  kernel_ = Parameter(name_ + "/kernel",
                      Tensor({static_cast<std::size_t>(out_),
                              static_cast<std::size_t>(in_),
                              static_cast<std::size_t>(kh_),
                              static_cast<std::size_t>(kw_)}));
  GlorotUniform(kernel_.value, static_cast<std::size_t>(in_ * kh_ * kw_),
                static_cast<std::size_t>(out_ * kh_ * kw_), rng);
  bias_ = Parameter(name_ + "/bias", Tensor({static_cast<std::size_t>(out_)}));
}

void Conv2D::CollectParameters(ParameterList& out) {
  out.push_back(&kernel_);
  out.push_back(&bias_);
}

Tensor Conv2D::Forward(const Tensor& x, const RunMode&) {
  if (x.rank() != 3 || x.dim(0) != static_cast<std::size_t>(in_)) {
    throw Error(ErrorCode::kShapeMismatch,
                name_ + ": expected input [" + std::to_string(in_) +
                    "xTxF], got " + ShapeString(x.shape()));
  }
  const auto t_len = static_cast<std::ptrdiff_t>(x.dim(1));
  const auto f_len = static_cast<std::ptrdiff_t>(x.dim(2));
  const std::ptrdiff_t plane = t_len * f_len;
  Tensor y({static_cast<std::size_t>(out_), x.dim(1), x.dim(2)});
  const int ph = kh_ / 2, pw = kw_ / 2;
  for (int co = 0; co < out_; ++co) {
    double* yo = y.data() + co * plane;
    std::fill(yo, yo + plane, bias_.value[co]);
    for (int ci = 0; ci < in_; ++ci) {
      const double* xi = x.data() + ci * plane;
      for (int ky = 0; ky < kh_; ++ky) {
        for (int kx = 0; kx < kw_; ++kx) {
          const double w =
              kernel_.value[((co * in_ + ci) * kh_ + ky) * kw_ + kx];
          const int dt = ky - ph, df = kx - pw;
          const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -dt);
          const std::ptrdiff_t t1 = std::min<std::ptrdiff_t>(t_len, t_len - dt);
          const std::ptrdiff_t f0 = std::max<std::ptrdiff_t>(0, -df);
          const std::ptrdiff_t f1 = std::min<std::ptrdiff_t>(f_len, f_len - df);
          for (std::ptrdiff_t t = t0; t < t1; ++t) {
            double* yrow = yo + t * f_len;
            const double* xrow = xi + (t + dt) * f_len + df;
            for (std::ptrdiff_t f = f0; f < f1; ++f) yrow[f] += w * xrow[f];
          }
        }
      }
    }
  }
  input_ = x;
  cached_ = true;
  return y;
}

Tensor Conv2D::Backward(const Tensor& dy) {
  if (!cached_) throw Error(ErrorCode::kState, name_ + ": backward before forward");
  const auto t_len = static_cast<std::ptrdiff_t>(input_.dim(1));
  const auto f_len = static_cast<std::ptrdiff_t>(input_.dim(2));
  CheckShape(name_, {static_cast<std::size_t>(out_), input_.dim(1), input_.dim(2)},
             dy.shape());
  const std::ptrdiff_t plane = t_len * f_len;
  Tensor dx(input_.shape());
  const int ph = kh_ / 2, pw = kw_ / 2;
  for (int co = 0; co < out_; ++co) {
    const double* go = dy.data() + co * plane;
    double bsum = 0.0;
    for (std::ptrdiff_t i = 0; i < plane; ++i) bsum += go[i];
    bias_.grad[co] += bsum;
    for (int ci = 0; ci < in_; ++ci) {
      const double* xi = input_.data() + ci * plane;
      double* dxi = dx.data() + ci * plane;
      for (int ky = 0; ky < kh_; ++ky) {
        for (int kx = 0; kx < kw_; ++kx) {
          const std::size_t widx = ((co * in_ + ci) * kh_ + ky) * kw_ + kx;
          const double w = kernel_.value[widx];
          const int dt = ky - ph, df = kx - pw;
          const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -dt);
          const std::ptrdiff_t t1 = std::min<std::ptrdiff_t>(t_len, t_len - dt);
          const std::ptrdiff_t f0 = std::max<std::ptrdiff_t>(0, -df);
          const std::ptrdiff_t f1 = std::min<std::ptrdiff_t>(f_len, f_len - df);
          double wsum = 0.0;
          for (std::ptrdiff_t t = t0; t < t1; ++t) {
            const double* grow = go + t * f_len;
            const double* xrow = xi + (t + dt) * f_len + df;
            double* dxrow = dxi + (t + dt) * f_len + df;
            for (std::ptrdiff_t f = f0; f < f1; ++f) {
              wsum += grow[f] * xrow[f];
              dxrow[f] += w * grow[f];
            }
          }
          kernel_.grad[widx] += wsum;
        }
      }
    }
  }
  return dx;
}

}  // namespace slid::nn
